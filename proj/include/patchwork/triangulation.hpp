/**
 * Regular (convex) subdivisions from lifting functions and the constructions
 * built on them: exact lower hulls, convexity certification against the
 * stored lift, the primitive staircase triangulation of T_m^n, dilation by a
 * positive integer, and refinement of a triangulation by disjoint islands.
 */

#ifndef PATCHWORK_TRIANGULATION_HPP
#define PATCHWORK_TRIANGULATION_HPP

#include "geometry.hpp"

#include <atomic>
#include <cmath>
#include <limits>

namespace patchwork {

/** Ordered, pairwise distinct point set; here always P cap Z^n in lex order. */
struct PointConfiguration {
    int ambient = 0;
    std::vector<IntVec> points;

    PointConfiguration() = default;
    PointConfiguration(int ambient_, std::vector<IntVec> pts)
        : ambient(ambient_), points(std::move(pts))
    {
        for (std::size_t i = 0; i < points.size(); ++i)
        {
            if (points[i].size() != ambient)
                throw std::invalid_argument("PointConfiguration: dimension mismatch");
            index_.emplace(points[i], static_cast<int>(i));
        }
        if (index_.size() != points.size())
            throw std::invalid_argument("PointConfiguration: points must be pairwise distinct");
    }

    int size() const { return static_cast<int>(points.size()); }

    int index_of(const IntVec& p) const
    {
        auto it = index_.find(p);
        return it == index_.end() ? -1 : it->second;
    }

private:
    std::map<IntVec, int, IntVecLess> index_;
};

/** All lattice points of a polytope as a configuration. */
inline PointConfiguration lattice_configuration(const LatticePolytope& P)
{
    return PointConfiguration(P.ambient_dim(), P.lattice_points());
}

using LiftingFunction = std::vector<Rat>;

/**
 * A polyhedral subdivision of a point configuration. Each cell records every
 * configuration point lying on its supporting lower hyperplane (vertices and
 * non-vertex points alike); the optional lift is the convexity certificate.
 */
struct ConvexTriangulation {
    PointConfiguration config;
    std::vector<std::vector<int>> cells;
    std::optional<LiftingFunction> lift;
    bool certified = false;

    int ambient() const { return config.ambient; }

    LatticePolytope cell_polytope(int i) const
    {
        std::vector<IntVec> pts;
        for (int j : cells[static_cast<std::size_t>(i)])
            pts.push_back(config.points[static_cast<std::size_t>(j)]);
        return LatticePolytope(config.ambient, pts);
    }

    LatticePolytope hull() const { return LatticePolytope(config.ambient, config.points); }

    /** Do all cells have exactly n+1 points of normalized volume 1? */
    bool is_primitive() const
    {
        const int n = config.ambient;
        for (const auto& cell : cells)
        {
            if (static_cast<int>(cell.size()) != n + 1)
                return false;
            IntMat edges(n, n);
            for (int c = 0; c < n; ++c)
                edges.col(c) = config.points[static_cast<std::size_t>(cell[static_cast<std::size_t>(c) + 1])] -
                               config.points[static_cast<std::size_t>(cell[0])];
            Int d = int_det(edges);
            if (d != 1 && d != -1)
                return false;
        }
        return true;
    }
};

/* ------------------------------------------------------------------ *
 *                        Exact lower hull                             *
 * ------------------------------------------------------------------ */

namespace detail {

/** Fraction-free determinant over __int128; exact while entries stay small. */
inline __int128 det128(std::vector<std::vector<__int128>> m)
{
    const int n = static_cast<int>(m.size());
    if (n == 0)
        return 1;
    __int128 sign = 1, prev = 1;
    for (int k = 0; k + 1 < n; ++k)
    {
        if (m[k][k] == 0)
        {
            int p = k + 1;
            while (p < n && m[p][k] == 0)
                ++p;
            if (p == n)
                return 0;
            std::swap(m[k], m[p]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j)
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

/**
 * Machine-word path for the exhaustive lower hull: valid whenever the worst
 * case |normal| and dot products provably fit in 127 bits.
 */
inline std::optional<std::vector<std::vector<int>>>
lower_hull_cells_fast(const std::vector<std::vector<std::int64_t>>& lifted)
{
    const int V = static_cast<int>(lifted.size());
    const int d = static_cast<int>(lifted[0].size());  // n + 1
    long double bound = 1.0L;
    long double maxabs = 1.0L;
    for (const auto& q : lifted)
        for (std::int64_t c : q)
            maxabs = std::max<long double>(maxabs, c < 0 ? -static_cast<long double>(c)
                                                         : static_cast<long double>(c));
    for (int i = 1; i <= d; ++i)
        bound *= i;
    for (int i = 0; i < d; ++i)
        bound *= 2.0L * maxabs;
    if (bound * V >= std::ldexp(1.0L, 120))
        return std::nullopt;

    std::set<std::vector<int>> cell_set;
    std::vector<int> chosen;
    std::vector<std::vector<__int128>> E(static_cast<std::size_t>(d) - 1,
                                         std::vector<__int128>(static_cast<std::size_t>(d)));
    std::function<void(int)> search = [&](int start) {
        const int n = d - 1;
        if (static_cast<int>(chosen.size()) == d)
        {
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < d; ++c)
                    E[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] =
                        static_cast<__int128>(lifted[static_cast<std::size_t>(chosen[static_cast<std::size_t>(r) + 1])]
                                                    [static_cast<std::size_t>(c)]) -
                        lifted[static_cast<std::size_t>(chosen[0])][static_cast<std::size_t>(c)];
            std::vector<__int128> normal(static_cast<std::size_t>(d));
            std::vector<std::vector<__int128>> minor(static_cast<std::size_t>(n),
                                                     std::vector<__int128>(static_cast<std::size_t>(n)));
            for (int j = 0; j < d; ++j)
            {
                for (int r = 0; r < n; ++r)
                {
                    int cc = 0;
                    for (int c = 0; c < d; ++c)
                    {
                        if (c == j)
                            continue;
                        minor[static_cast<std::size_t>(r)][static_cast<std::size_t>(cc++)] =
                            E[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
                    }
                }
                normal[static_cast<std::size_t>(j)] =
                    ((n - j) % 2 == 0 ? 1 : -1) * det128(minor);
            }
            if (normal[static_cast<std::size_t>(n)] == 0)
                return;
            if (normal[static_cast<std::size_t>(n)] < 0)
                for (auto& x : normal)
                    x = -x;
            __int128 c0 = 0;
            for (int c = 0; c < d; ++c)
                c0 += normal[static_cast<std::size_t>(c)] *
                      lifted[static_cast<std::size_t>(chosen[0])][static_cast<std::size_t>(c)];
            std::vector<int> cell;
            for (int i = 0; i < V; ++i)
            {
                __int128 s = -c0;
                for (int c = 0; c < d; ++c)
                    s += normal[static_cast<std::size_t>(c)] *
                         lifted[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
                if (s < 0)
                    return;
                if (s == 0)
                    cell.push_back(i);
            }
            cell_set.insert(std::move(cell));
            return;
        }
        int need = d - static_cast<int>(chosen.size());
        for (int i = start; i <= V - need; ++i)
        {
            chosen.push_back(i);
            search(i + 1);
            chosen.pop_back();
        }
    };
    search(0);
    return std::vector<std::vector<int>>(cell_set.begin(), cell_set.end());
}

/**
 * Cells of the lower hull of { (pts[i], values[i]) }: for each non-vertical
 * supporting hyperplane from below, the set of point indices lying on it.
 * Exhaustive over spanning (n+1)-subsets with affine-independence pruning;
 * exact over the integers after clearing lift denominators.
 */
inline std::vector<std::vector<int>> lower_hull_cells(const std::vector<IntVec>& pts,
                                                      const std::vector<Rat>& values)
{
    if (pts.empty())
        throw std::invalid_argument("lower_hull_cells: empty configuration");
    if (pts.size() != values.size())
        throw std::invalid_argument("lower_hull_cells: size mismatch");
    const int n = static_cast<int>(pts[0].size());
    const int V = static_cast<int>(pts.size());

    Int L = 1;
    for (const Rat& v : values)
        L = L / int_gcd(L, denominator(v)) * denominator(v);
    std::vector<IntVec> lifted(static_cast<std::size_t>(V));
    for (int i = 0; i < V; ++i)
    {
        IntVec q(n + 1);
        q.head(n) = pts[static_cast<std::size_t>(i)];
        q(n) = numerator(values[static_cast<std::size_t>(i)]) *
               (L / denominator(values[static_cast<std::size_t>(i)]));
        lifted[static_cast<std::size_t>(i)] = q;
    }

    // Machine-word path when the coordinates provably fit.
    {
        bool fits = true;
        std::vector<std::vector<std::int64_t>> small(static_cast<std::size_t>(V));
        for (int i = 0; i < V && fits; ++i)
        {
            small[static_cast<std::size_t>(i)].resize(static_cast<std::size_t>(n) + 1);
            for (int c = 0; c <= n && fits; ++c)
            {
                const Int& x = lifted[static_cast<std::size_t>(i)](c);
                if (x < std::numeric_limits<std::int64_t>::min() ||
                    x > std::numeric_limits<std::int64_t>::max())
                    fits = false;
                else
                    small[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] =
                        x.convert_to<std::int64_t>();
            }
        }
        if (fits)
            if (auto cells = lower_hull_cells_fast(small))
                return *cells;
    }

    std::set<std::vector<int>> cell_set;
    std::vector<int> chosen;
    // Row-echelon basis (over Q) of projected edge vectors for pruning.
    std::vector<RatVec> echelon;

    auto reduce = [&](const IntVec& edge, bool insert) -> bool {
        RatVec v = to_rational(edge).head(n);
        for (const RatVec& row : echelon)
        {
            Eigen::Index p = 0;
            while (p < n && row(p) == 0)
                ++p;
            if (p < n && v(p) != 0)
                v -= row * (v(p) / row(p));
        }
        if (v.isZero(0))
            return false;
        if (insert)
            echelon.push_back(v);
        return true;
    };

    std::function<void(int)> search = [&](int start) {
        if (static_cast<int>(chosen.size()) == n + 1)
        {
            // Normal via generalized cross product of the lifted edges.
            IntMat E(n, n + 1);
            for (int r = 0; r < n; ++r)
                E.row(r) = (lifted[static_cast<std::size_t>(chosen[static_cast<std::size_t>(r) + 1])] -
                            lifted[static_cast<std::size_t>(chosen[0])])
                               .transpose();
            IntVec normal(n + 1);
            for (int j = 0; j <= n; ++j)
            {
                IntMat minor(n, n);
                int cc = 0;
                for (int c = 0; c <= n; ++c)
                {
                    if (c == j)
                        continue;
                    minor.col(cc++) = E.col(c);
                }
                normal(j) = ((n - j) % 2 == 0 ? 1 : -1) * int_det(minor);
            }
            if (normal(n) == 0)
                return;  // vertical hyperplane
            if (normal(n) < 0)
                normal = -normal;
            Int c0 = normal.dot(lifted[static_cast<std::size_t>(chosen[0])]);
            std::vector<int> cell;
            for (int i = 0; i < V; ++i)
            {
                Int s = normal.dot(lifted[static_cast<std::size_t>(i)]) - c0;
                if (s < 0)
                    return;  // not supporting from below
                if (s == 0)
                    cell.push_back(i);
            }
            cell_set.insert(std::move(cell));
            return;
        }
        int need = n + 1 - static_cast<int>(chosen.size());
        for (int i = start; i <= V - need; ++i)
        {
            if (!chosen.empty())
            {
                IntVec edge = pts[static_cast<std::size_t>(i)] - pts[static_cast<std::size_t>(chosen[0])];
                if (!reduce(edge, true))
                    continue;  // projected points affinely dependent
                chosen.push_back(i);
                search(i + 1);
                chosen.pop_back();
                echelon.pop_back();
            }
            else
            {
                chosen.push_back(i);
                search(i + 1);
                chosen.pop_back();
            }
        }
    };
    search(0);
    return std::vector<std::vector<int>>(cell_set.begin(), cell_set.end());
}

/** Affine interpolant alpha(y) = coeffs . y + constant through cell points. */
struct AffineInterpolant {
    RatVec coeffs;
    Rat constant;

    Rat operator()(const IntVec& y) const
    {
        Rat v = constant;
        for (Eigen::Index i = 0; i < y.size(); ++i)
            v += coeffs(i) * Rat(y(i));
        return v;
    }

    Rat at(const RatVec& y) const
    {
        Rat v = constant;
        for (Eigen::Index i = 0; i < y.size(); ++i)
            v += coeffs(i) * y(i);
        return v;
    }
};

/**
 * Interpolant through the cell's lifted points. Fails (nullopt) when the
 * lifted points are not on a common non-vertical hyperplane; degenerate
 * (second flag) when the projected cell does not span the ambient space.
 */
inline std::pair<std::optional<AffineInterpolant>, bool>
cell_interpolant(const std::vector<IntVec>& pts, const std::vector<Rat>& values)
{
    const int n = static_cast<int>(pts[0].size());
    RatMat A(static_cast<Eigen::Index>(pts.size()), n + 1);
    RatVec b(static_cast<Eigen::Index>(pts.size()));
    for (std::size_t i = 0; i < pts.size(); ++i)
    {
        for (int j = 0; j < n; ++j)
            A(static_cast<Eigen::Index>(i), j) = Rat(pts[i](j));
        A(static_cast<Eigen::Index>(i), n) = 1;
        b(static_cast<Eigen::Index>(i)) = values[i];
    }
    if (affine_rank(pts) < n)
        return {std::nullopt, true};
    auto x = solve_exact(A, b);
    if (!x)
        return {std::nullopt, false};
    AffineInterpolant alpha;
    alpha.coeffs = x->head(n);
    alpha.constant = (*x)(n);
    return {alpha, false};
}

}  // namespace detail

/* ------------------------------------------------------------------ *
 *                         Module operations                           *
 * ------------------------------------------------------------------ */

/** Project the lower faces of the lifted configuration. */
inline ConvexTriangulation regular_subdivision(const PointConfiguration& config,
                                               const LiftingFunction& lift)
{
    if (config.points.empty())
        throw std::invalid_argument("regular_subdivision: empty configuration");
    if (static_cast<int>(lift.size()) != config.size())
        throw std::invalid_argument("regular_subdivision: one lift value per point required");
    if (affine_rank(config.points) != config.ambient)
        throw std::invalid_argument(
            "regular_subdivision: configuration must affinely span its ambient space "
            "(reduce by an affine unimodular change first)");
    ConvexTriangulation out;
    out.config = config;
    out.cells = detail::lower_hull_cells(config.points, lift);
    out.lift = lift;
    out.certified = true;
    return out;
}

struct CertifyReport {
    enum class Status { certified, not_convex, degenerate_cell };
    Status status = Status::certified;
    int cell = -1;   // offending cell, if any
    int point = -1;  // offending configuration point, if any
    std::string detail;

    bool ok() const { return status == Status::certified; }
};

/**
 * Check that the stored lift induces exactly the stored cells: per cell an
 * affine function agreeing with the lift on the cell's points and strictly
 * below it on every other configuration point.
 */
inline CertifyReport certify_convexity(const ConvexTriangulation& tau)
{
    if (!tau.lift)
        throw std::invalid_argument("certify_convexity: no lifting function present");
    const auto& pts = tau.config.points;
    const auto& lift = *tau.lift;
    const std::size_t ncells = tau.cells.size();

    std::vector<CertifyReport> partial(ncells);
    std::atomic<bool> all_ok{true};
    parallel_for(ncells, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t ci = lo; ci < hi; ++ci)
        {
            const auto& cell = tau.cells[ci];
            CertifyReport& rep = partial[ci];
            std::vector<IntVec> cpts;
            std::vector<Rat> cvals;
            for (int j : cell)
            {
                cpts.push_back(pts[static_cast<std::size_t>(j)]);
                cvals.push_back(lift[static_cast<std::size_t>(j)]);
            }
            auto [alpha, degenerate] = detail::cell_interpolant(cpts, cvals);
            if (degenerate)
            {
                rep = {CertifyReport::Status::degenerate_cell, static_cast<int>(ci), -1,
                       "cell does not span the ambient space"};
                all_ok = false;
                continue;
            }
            if (!alpha)
            {
                rep = {CertifyReport::Status::not_convex, static_cast<int>(ci), -1,
                       "cell points admit no common affine lift"};
                all_ok = false;
                continue;
            }
            std::vector<char> in_cell(pts.size(), 0);
            for (int j : cell)
                in_cell[static_cast<std::size_t>(j)] = 1;
            for (std::size_t q = 0; q < pts.size(); ++q)
            {
                if (in_cell[q])
                    continue;
                if (!(lift[q] > (*alpha)(pts[q])))
                {
                    rep = {CertifyReport::Status::not_convex, static_cast<int>(ci),
                           static_cast<int>(q), "lift not strictly above the cell hyperplane"};
                    all_ok = false;
                    break;
                }
            }
        }
    });
    if (all_ok)
        return {};
    // Deterministic report: smallest offending cell index wins.
    for (const auto& rep : partial)
        if (rep.cell >= 0)
            return rep;
    return {};
}

/**
 * The staircase (Freudenthal-style) primitive triangulation of T_m^n:
 * m^n simplices of normalized volume 1 on all lattice points, with an
 * explicit integer-valued certifying lift.
 */
inline ConvexTriangulation primitive_triangulation(int m, int n)
{
    if (m <= 0 || n <= 0)
        throw std::invalid_argument("primitive_triangulation: m and n must be positive");
    PointConfiguration config(n, simplex_lattice_points(m, n));

    // Work in cumulative coordinates u_i = x_1 + ... + x_i, where T_m^n maps
    // unimodularly onto { 0 <= u_1 <= ... <= u_n <= m }; the Freudenthal
    // cells of the unit grid that fit in this region pull back to the cells.
    auto to_u = [&](const IntVec& x) {
        IntVec u(n);
        Int s = 0;
        for (int i = 0; i < n; ++i)
        {
            s += x(i);
            u(i) = s;
        }
        return u;
    };
    auto from_u = [&](const std::vector<int>& u) {
        IntVec x(n);
        for (int i = 0; i < n; ++i)
            x(i) = u[static_cast<std::size_t>(i)] - (i > 0 ? u[static_cast<std::size_t>(i) - 1] : 0);
        return x;
    };
    auto in_region = [&](const std::vector<int>& u) {
        if (u[0] < 0 || u[static_cast<std::size_t>(n) - 1] > m)
            return false;
        for (int i = 0; i + 1 < n; ++i)
            if (u[static_cast<std::size_t>(i)] > u[static_cast<std::size_t>(i) + 1])
                return false;
        return true;
    };

    ConvexTriangulation out;
    out.config = config;

    std::vector<int> perm(n);
    std::vector<int> base(n, 0);
    std::function<void(int)> walk_base = [&](int j) {
        if (j == n)
        {
            for (int i = 0; i < n; ++i)
                perm[static_cast<std::size_t>(i)] = i;
            do
            {
                std::vector<std::vector<int>> chain;
                std::vector<int> u = base;
                chain.push_back(u);
                for (int t = 0; t < n; ++t)
                {
                    u[static_cast<std::size_t>(perm[static_cast<std::size_t>(t)])] += 1;
                    chain.push_back(u);
                }
                bool ok = true;
                for (const auto& v : chain)
                    if (!in_region(v))
                    {
                        ok = false;
                        break;
                    }
                if (ok)
                {
                    std::vector<int> cell;
                    for (const auto& v : chain)
                    {
                        int idx = config.index_of(from_u(v));
                        if (idx < 0)
                            throw std::logic_error("primitive_triangulation: vertex escaped T_m^n");
                        cell.push_back(idx);
                    }
                    std::sort(cell.begin(), cell.end());
                    out.cells.push_back(std::move(cell));
                }
            } while (std::next_permutation(perm.begin(), perm.end()));
            return;
        }
        for (int c = 0; c < m; ++c)
        {
            base[static_cast<std::size_t>(j)] = c;
            walk_base(j + 1);
        }
    };
    walk_base(0);
    std::sort(out.cells.begin(), out.cells.end());

    Int expected = 1;
    for (int i = 0; i < n; ++i)
        expected *= m;
    if (Int(static_cast<long>(out.cells.size())) != expected)
        throw std::logic_error("primitive_triangulation: wrong cell count");

    // Certifying lift: strictly convex along every coordinate and every
    // difference of cumulative coordinates, which is exactly what separates
    // the Freudenthal cells.
    LiftingFunction lift;
    for (const IntVec& x : config.points)
    {
        IntVec u = to_u(x);
        Int v = 0;
        for (int i = 0; i < n; ++i)
            v += u(i) * u(i);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                v += (u(i) - u(j)) * (u(i) - u(j));
        lift.push_back(Rat(v));
    }
    out.lift = std::move(lift);
    out.certified = true;
    return out;
}

/**
 * Scale a certified subdivision by a positive integer: cells become the
 * scaled cells (with every lattice point of the scaled polytope accounted
 * for) and the certificate is the scaled piecewise-linear extension.
 */
inline ConvexTriangulation dilate(const ConvexTriangulation& tau, const Int& c)
{
    if (c <= 0)
        throw std::invalid_argument("dilate: factor must be positive");
    if (!tau.certified || !tau.lift)
        throw std::invalid_argument("dilate: input must be convex-certified");
    const int n = tau.ambient();

    LatticePolytope input_hull = tau.hull();
    std::vector<IntVec> scaled_vertices;
    for (const IntVec& p : input_hull.vertices())
        scaled_vertices.push_back(c * p);
    LatticePolytope scaled_hull(n, scaled_vertices);
    PointConfiguration config(n, scaled_hull.lattice_points());

    struct ScaledCell {
        LatticePolytope poly;  // scaled cell polytope
        detail::AffineInterpolant alpha;
    };
    std::vector<ScaledCell> scaled;
    for (const auto& cell : tau.cells)
    {
        std::vector<IntVec> cpts, spts;
        std::vector<Rat> cvals;
        for (int j : cell)
        {
            cpts.push_back(tau.config.points[static_cast<std::size_t>(j)]);
            spts.push_back(c * tau.config.points[static_cast<std::size_t>(j)]);
            cvals.push_back((*tau.lift)[static_cast<std::size_t>(j)]);
        }
        auto [alpha, degenerate] = detail::cell_interpolant(cpts, cvals);
        if (!alpha || degenerate)
            throw std::invalid_argument("dilate: input cells are not certified flats");
        scaled.push_back({LatticePolytope(n, spts), *alpha});
    }

    ConvexTriangulation out;
    out.config = config;
    LiftingFunction lift(static_cast<std::size_t>(config.size()));
    std::vector<char> assigned(static_cast<std::size_t>(config.size()), 0);
    for (const auto& sc : scaled)
    {
        std::vector<int> cell;
        for (int i = 0; i < config.size(); ++i)
        {
            const IntVec& y = config.points[static_cast<std::size_t>(i)];
            if (sc.poly.contains(y))
            {
                cell.push_back(i);
                if (!assigned[static_cast<std::size_t>(i)])
                {
                    RatVec yc(n);
                    for (int j = 0; j < n; ++j)
                        yc(j) = Rat(y(j)) / Rat(c);
                    lift[static_cast<std::size_t>(i)] = Rat(c) * sc.alpha.at(yc);
                    assigned[static_cast<std::size_t>(i)] = 1;
                }
            }
        }
        out.cells.push_back(std::move(cell));
    }
    for (char a : assigned)
        if (!a)
            throw std::logic_error("dilate: uncovered lattice point");
    std::sort(out.cells.begin(), out.cells.end());
    out.lift = std::move(lift);
    CertifyReport rep = certify_convexity(out);
    if (!rep.ok())
        throw std::logic_error("dilate: scaled certificate failed certification");
    out.certified = true;
    return out;
}

/** An island to graft into a host cell of an outer triangulation. */
struct Island {
    int cell = -1;
    AffineUnimodularMap map;
    ConvexTriangulation inner;
};

namespace detail {

/**
 * Split non-simplex cells by pulling: repeatedly lower the lift at the
 * lexicographically smallest vertex of a non-simplex cell by a safe margin,
 * coning that cell (and every cell whose hyperplane passes through the
 * vertex) from it. Keeps an explicit certificate throughout.
 */
inline void simplicialize(ConvexTriangulation& tau)
{
    const int n = tau.ambient();
    auto& lift = *tau.lift;
    std::set<int> pulled;
    for (std::size_t guard = 0; guard <= tau.config.points.size(); ++guard)
    {
        // Locate the pull vertex: lex-smallest not-yet-pulled point of any
        // non-simplex cell. Pulling each point at most once, in this order,
        // is the classical pulling refinement and terminates in simplices.
        int pull = -1;
        bool any_nonsimplex = false;
        for (const auto& cell : tau.cells)
        {
            std::vector<IntVec> cpts;
            for (int j : cell)
                cpts.push_back(tau.config.points[static_cast<std::size_t>(j)]);
            LatticePolytope poly(n, cpts);
            if (static_cast<int>(poly.vertices().size()) == n + 1)
                continue;  // simplex cell (possibly with extra on-plane points)
            any_nonsimplex = true;
            for (int j : cell)
                if (!pulled.count(j))
                    if (pull < 0 || lex_less(tau.config.points[static_cast<std::size_t>(j)],
                                             tau.config.points[static_cast<std::size_t>(pull)]))
                        pull = j;
        }
        if (!any_nonsimplex)
            return;
        if (pull < 0)
            throw std::logic_error("simplicialize: ran out of pull candidates");
        pulled.insert(pull);

        const IntVec& vp = tau.config.points[static_cast<std::size_t>(pull)];
        // Safe drop: half the smallest slack of the pulled point against the
        // cells not containing it.
        std::optional<Rat> slack;
        std::vector<std::vector<int>> untouched, touched;
        for (const auto& cell : tau.cells)
        {
            if (std::find(cell.begin(), cell.end(), pull) != cell.end())
            {
                touched.push_back(cell);
                continue;
            }
            untouched.push_back(cell);
            std::vector<IntVec> cpts;
            std::vector<Rat> cvals;
            for (int j : cell)
            {
                cpts.push_back(tau.config.points[static_cast<std::size_t>(j)]);
                cvals.push_back(lift[static_cast<std::size_t>(j)]);
            }
            auto [alpha, deg] = cell_interpolant(cpts, cvals);
            if (!alpha || deg)
                throw std::logic_error("simplicialize: invalid cell");
            Rat s = lift[static_cast<std::size_t>(pull)] - (*alpha)(vp);
            if (!slack || s < *slack)
                slack = s;
        }
        Rat delta = slack ? *slack / 2 : Rat(1);
        if (delta <= 0)
            throw std::logic_error("simplicialize: non-positive slack");
        lift[static_cast<std::size_t>(pull)] -= delta;

        // Re-derive the cells around the pulled vertex from the new lift.
        std::vector<std::vector<int>> rebuilt = untouched;
        for (const auto& cell : touched)
        {
            std::vector<IntVec> cpts;
            std::vector<Rat> cvals;
            for (int j : cell)
            {
                cpts.push_back(tau.config.points[static_cast<std::size_t>(j)]);
                cvals.push_back(lift[static_cast<std::size_t>(j)]);
            }
            for (auto& sub : lower_hull_cells(cpts, cvals))
            {
                std::vector<int> mapped;
                for (int local : sub)
                    mapped.push_back(cell[static_cast<std::size_t>(local)]);
                std::sort(mapped.begin(), mapped.end());
                rebuilt.push_back(std::move(mapped));
            }
        }
        std::sort(rebuilt.begin(), rebuilt.end());
        rebuilt.erase(std::unique(rebuilt.begin(), rebuilt.end()), rebuilt.end());
        tau.cells = std::move(rebuilt);
    }
    throw std::logic_error("simplicialize: did not converge");
}

}  // namespace detail

/**
 * Refine a certified triangulation so that designated cells contain the
 * given triangulations verbatim, strictly inside. The island region is sunk
 * below the host-cell boundary in a local lift, the local lower hull builds
 * the shell, and the composition with the outer certificate is scaled by mu,
 * halving until certification succeeds.
 */
inline ConvexTriangulation embed_islands(const ConvexTriangulation& outer,
                                         const std::vector<Island>& islands)
{
    if (!outer.certified || !outer.lift)
        throw std::invalid_argument("embed_islands: outer must be convex-certified");
    if (islands.empty())
        return outer;

    std::set<int> used_cells;
    for (const auto& isl : islands)
    {
        if (isl.cell < 0 || isl.cell >= static_cast<int>(outer.cells.size()))
            throw std::invalid_argument("embed_islands: island cell index out of range");
        if (!used_cells.insert(isl.cell).second)
            throw std::domain_error("overlapping islands");
        if (!isl.inner.lift || !isl.inner.certified)
            throw std::invalid_argument("embed_islands: island must be convex-certified");
    }

    std::vector<Rat> bump(static_cast<std::size_t>(outer.config.size()), Rat(0));
    std::vector<std::vector<int>> new_cells;
    std::set<int> host(used_cells);
    for (std::size_t ci = 0; ci < outer.cells.size(); ++ci)
        if (!host.count(static_cast<int>(ci)))
            new_cells.push_back(outer.cells[ci]);

    for (const auto& isl : islands)
    {
        LatticePolytope host_poly = outer.cell_polytope(isl.cell);
        // Map the island into the host cell and locate its points.
        std::map<IntVec, Rat, IntVecLess> island_lift;
        for (int i = 0; i < isl.inner.config.size(); ++i)
        {
            IntVec q = isl.map.apply(isl.inner.config.points[static_cast<std::size_t>(i)]);
            if (!host_poly.strictly_contains(q))
                throw std::domain_error("island not interior");
            island_lift.emplace(q, (*isl.inner.lift)[static_cast<std::size_t>(i)]);
        }

        const auto& cell = outer.cells[static_cast<std::size_t>(isl.cell)];

        // Scale the island certificate so that every island cell plane,
        // extrapolated across the whole host cell, stays within one unit of
        // zero; sinking the island by two units then keeps those planes
        // strictly below the boundary level.
        Rat extrapolation(0);
        for (const auto& icell : isl.inner.cells)
        {
            std::vector<IntVec> ipts;
            std::vector<Rat> ivals;
            for (int j : icell)
            {
                ipts.push_back(isl.map.apply(isl.inner.config.points[static_cast<std::size_t>(j)]));
                ivals.push_back((*isl.inner.lift)[static_cast<std::size_t>(j)]);
            }
            auto [alpha, degenerate] = detail::cell_interpolant(ipts, ivals);
            if (!alpha || degenerate)
                throw std::invalid_argument("embed_islands: island cells are not certified flats");
            for (int j : cell)
            {
                Rat v = abs((*alpha)(outer.config.points[static_cast<std::size_t>(j)]));
                if (v > extrapolation)
                    extrapolation = v;
            }
        }
        Rat scale = Rat(1) / (extrapolation + 1);
        const Rat depth(2);

        // Local lift on the host cell: boundary pinned at zero, island sunk
        // below, interior bystanders floated above every supporting plane.
        std::vector<IntVec> local_pts;
        std::vector<Rat> local_vals;
        std::vector<int> local_to_global;
        for (int j : cell)
        {
            const IntVec& y = outer.config.points[static_cast<std::size_t>(j)];
            local_pts.push_back(y);
            local_to_global.push_back(j);
            auto it = island_lift.find(y);
            if (it != island_lift.end())
                local_vals.push_back(scale * it->second - depth);
            else if (host_poly.strictly_contains(y))
                local_vals.push_back(2 * depth);
            else
                local_vals.push_back(Rat(0));
        }
        for (std::size_t i = 0; i < local_pts.size(); ++i)
            bump[static_cast<std::size_t>(local_to_global[i])] =
                host_poly.strictly_contains(local_pts[i]) ? local_vals[i] : Rat(0);

        auto local_cells = detail::lower_hull_cells(local_pts, local_vals);

        // The island must reappear verbatim in the local hull.
        std::set<std::vector<int>> island_cells_seen;
        std::map<IntVec, int, IntVecLess> local_index;
        for (std::size_t i = 0; i < local_pts.size(); ++i)
            local_index.emplace(local_pts[i], static_cast<int>(i));
        std::set<std::vector<int>> expected_cells;
        for (const auto& icell : isl.inner.cells)
        {
            std::vector<int> mapped;
            for (int j : icell)
                mapped.push_back(local_index.at(
                    isl.map.apply(isl.inner.config.points[static_cast<std::size_t>(j)])));
            std::sort(mapped.begin(), mapped.end());
            expected_cells.insert(std::move(mapped));
        }
        for (const auto& lc : local_cells)
        {
            bool inside = true;
            for (int i : lc)
                if (!island_lift.count(local_pts[static_cast<std::size_t>(i)]))
                {
                    inside = false;
                    break;
                }
            if (inside && !expected_cells.count(lc))
                throw std::logic_error("embed_islands: island cells were not reproduced");
            if (inside)
                island_cells_seen.insert(lc);
        }
        if (island_cells_seen.size() != expected_cells.size())
            throw std::logic_error("embed_islands: island cells were not reproduced");

        for (const auto& lc : local_cells)
        {
            std::vector<int> mapped;
            for (int i : lc)
                mapped.push_back(local_to_global[static_cast<std::size_t>(i)]);
            std::sort(mapped.begin(), mapped.end());
            new_cells.push_back(std::move(mapped));
        }
    }
    std::sort(new_cells.begin(), new_cells.end());

    // Compose: outer certificate plus mu times the local bumps, halving mu
    // until the composite certifies the candidate cells.
    ConvexTriangulation out;
    out.config = outer.config;
    out.cells = new_cells;
    Rat mu(1);
    for (int attempt = 0; attempt < 64; ++attempt)
    {
        LiftingFunction lift(static_cast<std::size_t>(outer.config.size()));
        for (int i = 0; i < outer.config.size(); ++i)
            lift[static_cast<std::size_t>(i)] =
                (*outer.lift)[static_cast<std::size_t>(i)] + mu * bump[static_cast<std::size_t>(i)];
        out.lift = lift;
        if (certify_convexity(out).ok())
        {
            out.certified = true;
            detail::simplicialize(out);
            CertifyReport rep = certify_convexity(out);
            if (!rep.ok())
                throw std::logic_error("embed_islands: simplicialization broke the certificate");
            return out;
        }
        mu /= 2;
    }
    throw std::domain_error("certification budget exhausted");
}

}  // namespace patchwork

#endif  // PATCHWORK_TRIANGULATION_HPP
