/**
 * Mixed subdivisions of T_k^n + T_2k^n from a pair of affine lifts: the
 * pairwise-distinct-keys criterion, the permutation cells, a brute-force
 * lower-hull oracle over all lattice sum points, the coordinate faces, and
 * the orthant chart change.
 */

#ifndef PATCHWORK_MIXED_HPP
#define PATCHWORK_MIXED_HPP

#include "triangulation.hpp"

#include <numeric>

namespace patchwork {

/** Pair of affine lifts on T_k^n and T_2k^n given by their vertex values. */
struct AffinePairLift {
    int k = 1;
    int n = 1;
    std::vector<Rat> a;  // nu_1(u_i), i = 0..n
    std::vector<Rat> b;  // nu_2(v_i), i = 0..n

    void validate() const
    {
        if (k < 1 || n < 1)
            throw std::invalid_argument("AffinePairLift: k and n must be positive");
        if (a.size() != static_cast<std::size_t>(n) + 1 || b.size() != static_cast<std::size_t>(n) + 1)
            throw std::invalid_argument("AffinePairLift: need n+1 values per lift");
    }

    /** u_i = k e_i (u_0 = 0). */
    IntVec u(int i) const
    {
        IntVec w = IntVec::Zero(n);
        if (i > 0)
            w(i - 1) = k;
        return w;
    }

    /** v_i = 2k e_i (v_0 = 0). */
    IntVec v(int i) const
    {
        IntVec w = IntVec::Zero(n);
        if (i > 0)
            w(i - 1) = 2 * k;
        return w;
    }

    /** The affine function through the a-values, evaluated on T_k^n points. */
    Rat nu1(const IntVec& w) const
    {
        Rat val = a[0];
        for (int i = 0; i < n; ++i)
            val += (a[static_cast<std::size_t>(i) + 1] - a[0]) * Rat(w(i)) / Rat(k);
        return val;
    }

    Rat nu2(const IntVec& w) const
    {
        Rat val = b[0];
        for (int i = 0; i < n; ++i)
            val += (b[static_cast<std::size_t>(i) + 1] - b[0]) * Rat(w(i)) / Rat(2 * k);
        return val;
    }

    Rat key(int i) const { return 2 * a[static_cast<std::size_t>(i)] - b[static_cast<std::size_t>(i)]; }
};

/**
 * The subdivision is mixed iff the keys 2a_i - b_i are pairwise distinct;
 * the witnessing permutation sorts them increasingly.
 */
inline std::optional<std::vector<int>> mixedness(const AffinePairLift& lift)
{
    lift.validate();
    std::vector<int> sigma(static_cast<std::size_t>(lift.n) + 1);
    std::iota(sigma.begin(), sigma.end(), 0);
    std::sort(sigma.begin(), sigma.end(),
              [&](int i, int j) { return lift.key(i) < lift.key(j); });
    for (std::size_t i = 0; i + 1 < sigma.size(); ++i)
        if (lift.key(sigma[i]) == lift.key(sigma[i + 1]))
            return std::nullopt;
    return sigma;
}

/** Cells F_l = conv{u_sigma(0..l)} + conv{v_sigma(l..n)}. */
struct MixedSubdivision {
    std::vector<int> sigma;
    struct Cell {
        std::vector<int> u_indices;  // sigma(0), ..., sigma(l)
        std::vector<int> v_indices;  // sigma(l), ..., sigma(n)
        LatticePolytope poly;
    };
    std::vector<Cell> cells;
};

inline MixedSubdivision mixed_subdivision(const AffinePairLift& lift)
{
    auto sigma = mixedness(lift);
    if (!sigma)
        throw std::domain_error("lift is not mixed: coinciding keys 2a_i - b_i");
    MixedSubdivision out;
    out.sigma = *sigma;
    const int n = lift.n;
    for (int l = 0; l <= n; ++l)
    {
        MixedSubdivision::Cell cell;
        std::vector<IntVec> upts, vpts;
        for (int i = 0; i <= l; ++i)
        {
            cell.u_indices.push_back((*sigma)[static_cast<std::size_t>(i)]);
            upts.push_back(lift.u((*sigma)[static_cast<std::size_t>(i)]));
        }
        for (int i = l; i <= n; ++i)
        {
            cell.v_indices.push_back((*sigma)[static_cast<std::size_t>(i)]);
            vpts.push_back(lift.v((*sigma)[static_cast<std::size_t>(i)]));
        }
        cell.poly = minkowski_sum(LatticePolytope(n, upts), LatticePolytope(n, vpts));
        out.cells.push_back(std::move(cell));
    }
    return out;
}

/**
 * Brute-force validation oracle: the regular subdivision of T_3k^n induced
 * by minimizing nu_1(w_1) + nu_2(w_2) over all lattice decompositions
 * w_1 + w_2. Guarded against oversized enumerations.
 */
inline ConvexTriangulation lower_hull_oracle(const AffinePairLift& lift)
{
    lift.validate();
    const int n = lift.n;
    std::vector<IntVec> pts1 = simplex_lattice_points(lift.k, n);
    std::vector<IntVec> pts2 = simplex_lattice_points(2 * lift.k, n);
    if (pts1.size() * pts2.size() > 100000)
        throw std::invalid_argument("lower_hull_oracle: size guard exceeded");

    std::map<IntVec, Rat, IntVecLess> value;
    for (const IntVec& w1 : pts1)
        for (const IntVec& w2 : pts2)
        {
            IntVec s = w1 + w2;
            Rat v = lift.nu1(w1) + lift.nu2(w2);
            auto [it, inserted] = value.emplace(s, v);
            if (!inserted && v < it->second)
                it->second = v;
        }

    PointConfiguration config(n, simplex_lattice_points(3 * lift.k, n));
    LiftingFunction nu;
    for (const IntVec& p : config.points)
    {
        auto it = value.find(p);
        if (it == value.end())
            throw std::logic_error("lower_hull_oracle: lattice point is not a sum");
        nu.push_back(it->second);
    }
    return regular_subdivision(config, nu);
}

/**
 * Summand representation induced by the pair of lifts on a cell of the sum
 * subdivision: the faces of T_k^n and T_2k^n minimizing the tilted lifts.
 */
struct InducedCell {
    std::vector<int> u_indices;
    std::vector<int> v_indices;
    int dim_sum = 0;  // dim F_1 + dim F_2
};

inline std::vector<InducedCell> induced_representation(const AffinePairLift& lift,
                                                       const ConvexTriangulation& subdivision)
{
    lift.validate();
    const int n = lift.n;
    std::vector<InducedCell> out;
    for (std::size_t ci = 0; ci < subdivision.cells.size(); ++ci)
    {
        std::vector<IntVec> cpts;
        std::vector<Rat> cvals;
        for (int j : subdivision.cells[ci])
        {
            cpts.push_back(subdivision.config.points[static_cast<std::size_t>(j)]);
            cvals.push_back((*subdivision.lift)[static_cast<std::size_t>(j)]);
        }
        auto [alpha, degenerate] = detail::cell_interpolant(cpts, cvals);
        if (!alpha || degenerate)
            throw std::invalid_argument("induced_representation: cell admits no affine support");
        InducedCell ind;
        // F_i = argmin over the summand vertices of (nu_i - <grad alpha, .>).
        auto argmin = [&](bool first) {
            std::vector<int> best;
            std::optional<Rat> best_val;
            for (int i = 0; i <= n; ++i)
            {
                IntVec w = first ? lift.u(i) : lift.v(i);
                Rat val = (first ? lift.nu1(w) : lift.nu2(w));
                for (int j = 0; j < n; ++j)
                    val -= alpha->coeffs(j) * Rat(w(j));
                if (!best_val || val < *best_val)
                {
                    best_val = val;
                    best = {i};
                }
                else if (val == *best_val)
                {
                    best.push_back(i);
                }
            }
            return best;
        };
        ind.u_indices = argmin(true);
        ind.v_indices = argmin(false);
        std::vector<IntVec> upts, vpts;
        for (int i : ind.u_indices)
            upts.push_back(lift.u(i));
        for (int i : ind.v_indices)
            vpts.push_back(lift.v(i));
        ind.dim_sum = affine_rank(upts) + affine_rank(vpts);
        out.push_back(std::move(ind));
    }
    return out;
}

/** Are all induced summand sums direct (dim F_1 + dim F_2 = n)? */
inline bool representation_is_mixed(const AffinePairLift& lift,
                                    const ConvexTriangulation& subdivision)
{
    for (const auto& cell : induced_representation(lift, subdivision))
        if (cell.dim_sum != lift.n)
            return false;
    return true;
}

/**
 * The coordinate faces F_1^l = conv{u_0..u_l}, F_2^{n-l} = conv{v_l..v_n}
 * with the homogeneous-coordinate index sets of the projective subspaces
 * they span.
 */
struct CoordinateFaces {
    LatticePolytope f1;
    LatticePolytope f2;
    std::vector<int> z_indices_f1;  // X(F_1^l) = { Z_j = 0, j not in this set }
    std::vector<int> z_indices_f2;
};

inline CoordinateFaces coordinate_faces(int k, int n, int l)
{
    if (k < 1 || n < 1)
        throw std::invalid_argument("coordinate_faces: k and n must be positive");
    if (l < 0 || l > n)
        throw std::invalid_argument("coordinate_faces: l out of range");
    AffinePairLift lift;
    lift.k = k;
    lift.n = n;
    lift.a.assign(static_cast<std::size_t>(n) + 1, Rat(0));
    lift.b.assign(static_cast<std::size_t>(n) + 1, Rat(0));
    CoordinateFaces out;
    std::vector<IntVec> upts, vpts;
    for (int i = 0; i <= l; ++i)
    {
        upts.push_back(lift.u(i));
        out.z_indices_f1.push_back(i);
    }
    for (int i = l; i <= n; ++i)
    {
        vpts.push_back(lift.v(i));
        out.z_indices_f2.push_back(i);
    }
    out.f1 = LatticePolytope(n, upts);
    out.f2 = LatticePolytope(n, vpts);
    return out;
}

/**
 * Chart change to the affine chart of Z_l: alpha_l flips bit i to
 * eps_i xor eps_l for i != l and keeps eps_l; the result splits into the
 * first l and last n-l coordinates.
 */
inline std::pair<OrthantLabel, OrthantLabel> orthant_chart_change(int l, const OrthantLabel& g)
{
    const int n = g.n;
    if (l < 1 || l > n - 1)
        throw std::invalid_argument("orthant_chart_change: l must be between 1 and n-1");
    int el = g.bit(l - 1);
    std::vector<int> alpha(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        alpha[static_cast<std::size_t>(i)] = (i == l - 1) ? el : (g.bit(i) ^ el);
    std::vector<int> first(alpha.begin(), alpha.begin() + l);
    std::vector<int> last(alpha.begin() + l, alpha.end());
    return {OrthantLabel::from_bits(first), OrthantLabel::from_bits(last)};
}

}  // namespace patchwork

#endif  // PATCHWORK_MIXED_HPP
