/**
 * Lattice geometry: points, dilated standard simplices, convex hull data
 * with exact facet descriptions, face enumeration, pulled triangulations,
 * orthant symmetries of (Z/2)^n and integer affine unimodular maps.
 *
 * Everything is exact: coordinates are arbitrary-precision integers and all
 * derived data (normals, chart coordinates, volumes) are rationals.
 */

#ifndef PATCHWORK_GEOMETRY_HPP
#define PATCHWORK_GEOMETRY_HPP

#include "numeric.hpp"

#include <map>
#include <set>

namespace patchwork {

/* ------------------------------------------------------------------ *
 *                        Orthant symmetries                           *
 * ------------------------------------------------------------------ */

/** An element of (Z/2)^n: which coordinate signs are flipped. */
struct OrthantLabel {
    int n = 0;
    std::uint32_t mask = 0;  // bit i = epsilon_{i+1}

    OrthantLabel() = default;
    OrthantLabel(int n_, std::uint32_t mask_) : n(n_), mask(mask_)
    {
        if (n_ < 0 || n_ > 31)
            throw std::invalid_argument("OrthantLabel: dimension out of range");
        if (n_ < 31 && mask_ >> n_)
            throw std::invalid_argument("OrthantLabel: mask has bits beyond dimension");
    }

    static OrthantLabel zero(int n_) { return OrthantLabel(n_, 0); }

    static OrthantLabel from_bits(const std::vector<int>& bits)
    {
        OrthantLabel g(static_cast<int>(bits.size()), 0);
        for (std::size_t i = 0; i < bits.size(); ++i)
        {
            if (bits[i] != 0 && bits[i] != 1)
                throw std::invalid_argument("OrthantLabel: bits must be 0 or 1");
            if (bits[i])
                g.mask |= (1u << i);
        }
        return g;
    }

    int bit(int i) const { return (mask >> i) & 1u; }

    std::vector<int> bits() const
    {
        std::vector<int> out(n);
        for (int i = 0; i < n; ++i)
            out[i] = bit(i);
        return out;
    }

    bool is_zero() const { return mask == 0; }

    /** Group operation of (Z/2)^n (componentwise XOR). */
    OrthantLabel composed(const OrthantLabel& o) const
    {
        if (o.n != n)
            throw std::invalid_argument("OrthantLabel: dimension mismatch");
        return OrthantLabel(n, mask ^ o.mask);
    }

    bool operator==(const OrthantLabel& o) const { return n == o.n && mask == o.mask; }
    bool operator!=(const OrthantLabel& o) const { return !(*this == o); }
    bool operator<(const OrthantLabel& o) const
    {
        return n != o.n ? n < o.n : mask < o.mask;
    }
};

inline std::vector<OrthantLabel> all_orthants(int n)
{
    std::vector<OrthantLabel> out;
    out.reserve(std::size_t(1) << n);
    for (std::uint32_t m = 0; m < (1u << n); ++m)
        out.emplace_back(n, m);
    return out;
}

/** Parity of <g, w> mod 2. */
inline int pairing_parity(const OrthantLabel& g, const IntVec& w)
{
    if (w.size() != g.n)
        throw std::invalid_argument("pairing_parity: dimension mismatch");
    int p = 0;
    for (int i = 0; i < g.n; ++i)
        if (g.bit(i) && (w(i) % 2 != 0))
            p ^= 1;
    return p;
}

/** Coordinate-wise sign flip per g. */
inline RatVec reflect(const OrthantLabel& g, const RatVec& w)
{
    if (w.size() != g.n)
        throw std::invalid_argument("reflect: dimension mismatch");
    RatVec out = w;
    for (int i = 0; i < g.n; ++i)
        if (g.bit(i))
            out(i) = -out(i);
    return out;
}

inline IntVec reflect(const OrthantLabel& g, const IntVec& w)
{
    if (w.size() != g.n)
        throw std::invalid_argument("reflect: dimension mismatch");
    IntVec out = w;
    for (int i = 0; i < g.n; ++i)
        if (g.bit(i))
            out(i) = -out(i);
    return out;
}

/* ------------------------------------------------------------------ *
 *                  Exact convex hull data (chart form)                *
 * ------------------------------------------------------------------ */

namespace detail {

/**
 * Convex hull of a finite point set described inside an affine chart of its
 * own span: base point + rational direction basis, per-point chart
 * coordinates, and supporting hyperplanes found by exhaustive search over
 * spanning subsets. Intended for the small polytopes of this library
 * (simplices, their dilations, Minkowski sums of two simplices, chart
 * pieces); not a general-purpose hull code.
 */
struct HullData {
    int ambient = 0;
    int dim = -1;  // affine dimension d
    IntVec base;
    RatMat basis;  // ambient x d
    std::vector<RatVec> coords;  // chart coordinates per input point

    struct Facet {
        RatVec normal;  // chart form: normal . t >= offset on all coords
        Rat offset;
        std::vector<int> tight;  // indices of points on the hyperplane
    };
    std::vector<Facet> facets;
    std::vector<int> extreme;  // indices of extreme points
};

inline HullData build_hull(const std::vector<IntVec>& pts)
{
    if (pts.empty())
        throw std::invalid_argument("build_hull: empty point set");
    HullData h;
    h.ambient = static_cast<int>(pts[0].size());
    h.base = pts[0];

    // Greedy rational direction basis from edge vectors.
    std::vector<RatVec> dirs;
    for (std::size_t i = 1; i < pts.size(); ++i)
    {
        RatVec e = to_rational(IntVec(pts[i] - pts[0]));
        RatMat trial(h.ambient, static_cast<Eigen::Index>(dirs.size()) + 1);
        for (std::size_t c = 0; c < dirs.size(); ++c)
            trial.col(static_cast<Eigen::Index>(c)) = dirs[c];
        trial.col(static_cast<Eigen::Index>(dirs.size())) = e;
        if (rat_rank(trial) == static_cast<Eigen::Index>(dirs.size()) + 1)
            dirs.push_back(e);
    }
    h.dim = static_cast<int>(dirs.size());
    h.basis.resize(h.ambient, h.dim);
    for (int c = 0; c < h.dim; ++c)
        h.basis.col(c) = dirs[static_cast<std::size_t>(c)];

    if (h.dim == 0)
    {
        h.coords.assign(pts.size(), RatVec(0));
        h.extreme = {0};
        return h;
    }

    // Chart coordinates of every point.
    Eigen::FullPivLU<RatMat> lu(h.basis);
    for (const IntVec& p : pts)
    {
        RatVec rhs = to_rational(IntVec(p - h.base));
        RatVec t = lu.solve(rhs);
        if (!(h.basis * t - rhs).isZero(0))
            throw std::logic_error("build_hull: point escapes its own affine span");
        h.coords.push_back(t);
    }

    const int d = h.dim;
    const int V = static_cast<int>(pts.size());
    if (d == 0)
    {
        h.extreme = {0};
        return h;
    }

    // Supporting hyperplanes from d-subsets spanning a (d-1)-flat.
    std::set<std::vector<int>> seen;
    std::vector<int> sub(d);
    std::function<void(int, int)> enumerate = [&](int start, int chosen) {
        if (chosen == d)
        {
            RatMat edges(d - 1, d);
            for (int i = 1; i < d; ++i)
                edges.row(i - 1) = (h.coords[sub[i]] - h.coords[sub[0]]).transpose();
            RatVec normal;
            if (d == 1)
            {
                normal = RatVec::Ones(1);
            }
            else
            {
                Eigen::FullPivLU<RatMat> elu(edges);
                if (elu.rank() != d - 1)
                    return;
                normal = elu.kernel().col(0);
            }
            Rat offset = normal.dot(h.coords[sub[0]]);
            bool above = false, below = false;
            for (int i = 0; i < V; ++i)
            {
                Rat v = normal.dot(h.coords[i]) - offset;
                if (v > 0)
                    above = true;
                else if (v < 0)
                    below = true;
                if (above && below)
                    return;
            }
            if (below)
            {
                normal = -normal;
                offset = -offset;
            }
            HullData::Facet f;
            f.normal = normal;
            f.offset = offset;
            for (int i = 0; i < V; ++i)
                if (normal.dot(h.coords[i]) == offset)
                    f.tight.push_back(i);
            if (seen.insert(f.tight).second)
                h.facets.push_back(std::move(f));
            return;
        }
        for (int i = start; i <= V - (d - chosen); ++i)
        {
            sub[chosen] = i;
            enumerate(i + 1, chosen + 1);
        }
    };
    enumerate(0, 0);

    // A point is extreme iff its tight facet normals span the chart.
    for (int i = 0; i < V; ++i)
    {
        std::vector<RatVec> tight;
        for (const auto& f : h.facets)
            if (f.normal.dot(h.coords[i]) == f.offset)
                tight.push_back(f.normal);
        if (static_cast<int>(tight.size()) < d)
            continue;
        RatMat m(static_cast<Eigen::Index>(tight.size()), d);
        for (std::size_t r = 0; r < tight.size(); ++r)
            m.row(static_cast<Eigen::Index>(r)) = tight[r].transpose();
        if (rat_rank(m) == d)
            h.extreme.push_back(i);
    }
    return h;
}

}  // namespace detail

/* ------------------------------------------------------------------ *
 *                          LatticePolytope                            *
 * ------------------------------------------------------------------ */

/**
 * Convex lattice polytope stored by its vertex set (extreme points only),
 * with a lazily computed exact halfspace description.
 */
class LatticePolytope {
public:
    /** Halfspace normal . x >= offset valid on the polytope. */
    struct Halfspace {
        IntVec normal;
        Int offset;
    };

    LatticePolytope() = default;

    LatticePolytope(int dim_ambient, const std::vector<IntVec>& points)
        : ambient_(dim_ambient)
    {
        if (points.empty())
            throw std::invalid_argument("LatticePolytope: empty point set");
        std::vector<IntVec> uniq = points;
        for (const IntVec& p : uniq)
            if (p.size() != dim_ambient)
                throw std::invalid_argument("LatticePolytope: point dimension mismatch");
        std::sort(uniq.begin(), uniq.end(), IntVecLess{});
        uniq.erase(std::unique(uniq.begin(), uniq.end(), points_equal), uniq.end());
        detail::HullData h = detail::build_hull(uniq);
        for (int i : h.extreme)
            vertices_.push_back(uniq[static_cast<std::size_t>(i)]);
        std::sort(vertices_.begin(), vertices_.end(), IntVecLess{});
        dim_ = h.dim;
    }

    int ambient_dim() const { return ambient_; }
    int dim() const { return dim_; }
    const std::vector<IntVec>& vertices() const { return vertices_; }

    bool operator==(const LatticePolytope& o) const
    {
        if (ambient_ != o.ambient_ || vertices_.size() != o.vertices_.size())
            return false;
        for (std::size_t i = 0; i < vertices_.size(); ++i)
            if (!points_equal(vertices_[i], o.vertices_[i]))
                return false;
        return true;
    }
    bool operator!=(const LatticePolytope& o) const { return !(*this == o); }

    /** Ambient integer halfspaces; only available for full-dimensional polytopes. */
    const std::vector<Halfspace>& halfspaces() const
    {
        ensure_hull();
        if (dim_ != ambient_)
            throw std::logic_error("halfspaces: polytope is not full-dimensional");
        if (halfspaces_.empty() && !hull_->facets.empty())
        {
            Eigen::FullPivLU<RatMat> basis_t(hull_->basis.transpose());
            for (const auto& f : hull_->facets)
            {
                RatVec nr = basis_t.solve(f.normal);
                IntVec nz = primitive_integer_vector(nr);
                // Inner orientation: normal . v >= offset on every vertex.
                Int off = nz.dot(vertices_[0]);
                for (const IntVec& v : vertices_)
                {
                    Int d = nz.dot(v);
                    if (d < off)
                        off = d;
                }
                halfspaces_.push_back({nz, off});
            }
        }
        return halfspaces_;
    }

    /** Does p / scale lie in the polytope? (scale > 0) */
    bool contains(const IntVec& p, const Int& scale = Int(1)) const
    {
        return contains_impl(p, scale, false);
    }

    /** Does p / scale lie in the relative... strict interior (full-dim)? */
    bool strictly_contains(const IntVec& p, const Int& scale = Int(1)) const
    {
        return contains_impl(p, scale, true);
    }

    /** All lattice points of the polytope, in lexicographic order. */
    std::vector<IntVec> lattice_points() const
    {
        std::vector<Int> lo(ambient_), hi(ambient_);
        for (int j = 0; j < ambient_; ++j)
        {
            lo[j] = vertices_[0](j);
            hi[j] = vertices_[0](j);
            for (const IntVec& v : vertices_)
            {
                lo[j] = std::min(lo[j], Int(v(j)), [](const Int& a, const Int& b) { return a < b; });
                hi[j] = std::max(hi[j], Int(v(j)), [](const Int& a, const Int& b) { return a < b; });
            }
        }
        std::vector<IntVec> out;
        IntVec p(ambient_);
        std::function<void(int)> walk = [&](int j) {
            if (j == ambient_)
            {
                if (contains(p))
                    out.push_back(p);
                return;
            }
            for (Int c = lo[j]; c <= hi[j]; ++c)
            {
                p(j) = c;
                walk(j + 1);
            }
        };
        walk(0);
        return out;
    }

    /** Euclidean volume (exact rational); zero unless full-dimensional. */
    Rat volume() const
    {
        if (dim_ < ambient_)
            return Rat(0);
        Rat total(0);
        Int fact = 1;
        for (int i = 2; i <= ambient_; ++i)
            fact *= i;
        for (const auto& s : triangulate())
        {
            IntMat edges(ambient_, ambient_);
            for (int c = 0; c < ambient_; ++c)
                edges.col(c) = vertices_[s[static_cast<std::size_t>(c) + 1]] - vertices_[s[0]];
            Int d = int_det(edges);
            total += Rat(abs(d)) / Rat(fact);
        }
        return total;
    }

    /** Normalized volume: n! times the euclidean volume (an integer). */
    Int normalized_volume() const
    {
        Rat v = volume();
        Int fact = 1;
        for (int i = 2; i <= ambient_; ++i)
            fact *= i;
        Rat nv = v * Rat(fact);
        if (denominator(nv) != 1)
            throw std::logic_error("normalized_volume: non-integral result");
        return numerator(nv);
    }

    /** Pulled triangulation of the vertex set (indices into vertices()). */
    std::vector<std::vector<int>> triangulate() const
    {
        return pull_triangulate(vertices_);
    }

    /**
     * All nonempty faces (including the polytope itself), as vertex lists.
     * Computed on demand by intersecting facets.
     */
    std::vector<std::vector<IntVec>> faces() const
    {
        ensure_hull();
        std::set<std::vector<int>> subsets;
        std::vector<int> whole(vertices_.size());
        for (std::size_t i = 0; i < vertices_.size(); ++i)
            whole[i] = static_cast<int>(i);
        subsets.insert(whole);
        std::vector<std::vector<int>> frontier;
        for (const auto& f : hull_->facets)
        {
            if (subsets.insert(f.tight).second)
                frontier.push_back(f.tight);
        }
        while (!frontier.empty())
        {
            std::vector<std::vector<int>> next;
            for (const auto& a : frontier)
                for (const auto& f : hull_->facets)
                {
                    std::vector<int> inter;
                    std::set_intersection(a.begin(), a.end(), f.tight.begin(), f.tight.end(),
                                          std::back_inserter(inter));
                    if (!inter.empty() && subsets.insert(inter).second)
                        next.push_back(inter);
                }
            frontier = std::move(next);
        }
        std::vector<std::vector<IntVec>> out;
        for (const auto& s : subsets)
        {
            std::vector<IntVec> pts;
            for (int i : s)
                pts.push_back(vertices_[static_cast<std::size_t>(i)]);
            out.push_back(std::move(pts));
        }
        return out;
    }

    /**
     * Deterministic pulling triangulation of an arbitrary point list:
     * recursively cone the lexicographically smallest point over the facets
     * avoiding it. Restricting the result to any face of the hull yields the
     * pulling triangulation of that face, so adjacent polytopes sharing a
     * face triangulate it identically.
     */
    static std::vector<std::vector<int>> pull_triangulate(const std::vector<IntVec>& pts)
    {
        std::map<std::vector<int>, std::vector<std::vector<int>>> memo;
        std::vector<int> all(pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i)
            all[i] = static_cast<int>(i);
        std::function<const std::vector<std::vector<int>>&(const std::vector<int>&)> rec =
            [&](const std::vector<int>& S) -> const std::vector<std::vector<int>>& {
            auto it = memo.find(S);
            if (it != memo.end())
                return it->second;
            std::vector<IntVec> sub;
            sub.reserve(S.size());
            for (int i : S)
                sub.push_back(pts[static_cast<std::size_t>(i)]);
            detail::HullData h = detail::build_hull(sub);
            std::vector<std::vector<int>> cells;
            if (static_cast<int>(S.size()) == h.dim + 1)
            {
                cells.push_back(S);
            }
            else
            {
                int v = 0;
                for (std::size_t i = 1; i < S.size(); ++i)
                    if (lex_less(sub[i], sub[static_cast<std::size_t>(v)]))
                        v = static_cast<int>(i);
                for (const auto& f : h.facets)
                {
                    if (std::find(f.tight.begin(), f.tight.end(), v) != f.tight.end())
                        continue;
                    std::vector<int> T;
                    for (int i : f.tight)
                        T.push_back(S[static_cast<std::size_t>(i)]);
                    std::sort(T.begin(), T.end());
                    for (std::vector<int> s : rec(T))
                    {
                        s.push_back(S[static_cast<std::size_t>(v)]);
                        std::sort(s.begin(), s.end());
                        cells.push_back(std::move(s));
                    }
                }
            }
            return memo.emplace(S, std::move(cells)).first->second;
        };
        return rec(all);
    }

private:
    void ensure_hull() const
    {
        if (!hull_)
            hull_ = std::make_shared<detail::HullData>(detail::build_hull(vertices_));
    }

    bool contains_impl(const IntVec& p, const Int& scale, bool strict) const
    {
        if (p.size() != ambient_)
            throw std::invalid_argument("contains: dimension mismatch");
        if (scale <= 0)
            throw std::invalid_argument("contains: scale must be positive");
        ensure_hull();
        RatVec r(ambient_);
        for (int j = 0; j < ambient_; ++j)
            r(j) = Rat(p(j)) / Rat(scale) - Rat(hull_->base(j));
        // Must lie in the affine span first.
        Eigen::FullPivLU<RatMat> lu(hull_->basis);
        RatVec t = lu.solve(r);
        if (!(hull_->basis * t - r).isZero(0))
            return false;
        if (strict && dim_ < ambient_)
            return false;
        for (const auto& f : hull_->facets)
        {
            Rat v = f.normal.dot(t) - f.offset;
            if (v < 0 || (strict && v == 0))
                return false;
        }
        return true;
    }

    int ambient_ = 0;
    int dim_ = -1;
    std::vector<IntVec> vertices_;
    mutable std::shared_ptr<detail::HullData> hull_;
    mutable std::vector<Halfspace> halfspaces_;
};

/* ------------------------------------------------------------------ *
 *                     Affine unimodular maps                          *
 * ------------------------------------------------------------------ */

/** Integer affine map x -> L x + b with |det L| = 1. */
struct AffineUnimodularMap {
    IntMat linear;
    IntVec translation;

    AffineUnimodularMap(IntMat L, IntVec b) : linear(std::move(L)), translation(std::move(b))
    {
        if (linear.rows() != linear.cols() || linear.rows() != translation.size())
            throw std::invalid_argument("AffineUnimodularMap: shape mismatch");
        Int d = int_det(linear);
        if (d != 1 && d != -1)
            throw std::invalid_argument("AffineUnimodularMap: determinant must be +-1");
    }

    int dim() const { return static_cast<int>(linear.rows()); }

    IntVec apply(const IntVec& w) const
    {
        if (w.size() != linear.cols())
            throw std::invalid_argument("AffineUnimodularMap: dimension mismatch");
        return linear * w + translation;
    }

    AffineUnimodularMap inverse() const
    {
        RatMat inv = to_rational(linear).fullPivLu().inverse();
        IntMat L(linear.rows(), linear.cols());
        for (Eigen::Index i = 0; i < inv.rows(); ++i)
            for (Eigen::Index j = 0; j < inv.cols(); ++j)
            {
                if (denominator(inv(i, j)) != 1)
                    throw std::logic_error("AffineUnimodularMap: non-integral inverse");
                L(i, j) = numerator(inv(i, j));
            }
        return AffineUnimodularMap(L, IntVec(-(L * translation)));
    }

    static AffineUnimodularMap identity(int n)
    {
        return AffineUnimodularMap(IntMat::Identity(n, n), IntVec::Zero(n));
    }

    static AffineUnimodularMap translation_by(const IntVec& b)
    {
        return AffineUnimodularMap(IntMat::Identity(b.size(), b.size()), b);
    }
};

/* ------------------------------------------------------------------ *
 *                         Module operations                           *
 * ------------------------------------------------------------------ */

/** Lattice points of the dilated standard simplex T_m^n, in lex order. */
inline std::vector<IntVec> simplex_lattice_points(int m, int n)
{
    if (m <= 0 || n <= 0)
        throw std::invalid_argument("simplex_lattice_points: m and n must be positive");
    std::vector<IntVec> out;
    IntVec p = IntVec::Zero(n);
    std::function<void(int, int)> walk = [&](int j, int left) {
        if (j == n)
        {
            out.push_back(p);
            return;
        }
        for (int c = 0; c <= left; ++c)
        {
            p(j) = c;
            walk(j + 1, left - c);
        }
        p(j) = 0;
    };
    walk(0, m);
    std::sort(out.begin(), out.end(), IntVecLess{});
    return out;
}

/** T_m^n = conv{0, m e_1, ..., m e_n}. */
inline LatticePolytope standard_simplex(int m, int n)
{
    if (m <= 0 || n <= 0)
        throw std::invalid_argument("standard_simplex: m and n must be positive");
    std::vector<IntVec> verts;
    verts.push_back(IntVec::Zero(n));
    for (int i = 0; i < n; ++i)
    {
        IntVec v = IntVec::Zero(n);
        v(i) = m;
        verts.push_back(v);
    }
    return LatticePolytope(n, verts);
}

inline LatticePolytope apply_map(const AffineUnimodularMap& map, const LatticePolytope& P)
{
    if (map.dim() != P.ambient_dim())
        throw std::invalid_argument("apply_map: dimension mismatch");
    std::vector<IntVec> image;
    for (const IntVec& v : P.vertices())
        image.push_back(map.apply(v));
    return LatticePolytope(P.ambient_dim(), image);
}

inline LatticePolytope minkowski_sum(const LatticePolytope& P, const LatticePolytope& Q)
{
    if (P.ambient_dim() != Q.ambient_dim())
        throw std::invalid_argument("minkowski_sum: dimension mismatch");
    std::vector<IntVec> sums;
    for (const IntVec& p : P.vertices())
        for (const IntVec& q : Q.vertices())
            sums.push_back(p + q);
    return LatticePolytope(P.ambient_dim(), sums);
}

/**
 * Mod-2 reductions of the lattice of integer vectors orthogonal to the
 * direction space of a face, closed under addition: the subgroup of (Z/2)^n
 * driving the quotient identifications of C_P.
 */
inline std::vector<OrthantLabel> face_normal_parities(const std::vector<IntVec>& face_points, int n)
{
    if (face_points.empty())
        throw std::invalid_argument("face_normal_parities: empty face");
    IntMat edges(static_cast<Eigen::Index>(face_points.size()) - 1, n);
    for (std::size_t i = 1; i < face_points.size(); ++i)
        edges.row(static_cast<Eigen::Index>(i) - 1) = (face_points[i] - face_points[0]).transpose();
    std::vector<IntVec> kernel = integer_kernel_basis(edges);

    std::set<std::uint32_t> group{0};
    std::vector<std::uint32_t> gens;
    for (const IntVec& k : kernel)
    {
        std::uint32_t m = 0;
        for (int j = 0; j < n; ++j)
            if (k(j) % 2 != 0)
                m |= (1u << j);
        gens.push_back(m);
    }
    bool grew = true;
    while (grew)
    {
        grew = false;
        std::vector<std::uint32_t> current(group.begin(), group.end());
        for (std::uint32_t a : current)
            for (std::uint32_t g : gens)
                if (group.insert(a ^ g).second)
                    grew = true;
    }
    std::vector<OrthantLabel> out;
    for (std::uint32_t m : group)
        out.emplace_back(n, m);
    return out;
}

inline std::vector<OrthantLabel> face_normal_parities(const LatticePolytope& P,
                                                      const std::vector<IntVec>& face_points)
{
    return face_normal_parities(face_points, P.ambient_dim());
}

}  // namespace patchwork

#endif  // PATCHWORK_GEOMETRY_HPP
