/**
 * Combinatorial patchworking over T_m^n: orthant sign extension, chart
 * pieces of primitive simplices from sign-changing edge midpoints, gluing
 * across the 2^n symmetric copies, the quotient identification producing
 * C_{T_m^n}, sign-definite region complexes, and the Harnack sign rule.
 *
 * Cells carry doubled integer coordinates (so edge midpoints stay integral)
 * plus an orthant tag; the quotient acts on the tag only. A boundary cell's
 * canonical representative is the lexicographically smallest tag in its
 * orbit under the parity subgroup of its minimal face.
 */

#ifndef PATCHWORK_PATCHWORK_HPP
#define PATCHWORK_PATCHWORK_HPP

#include "homology.hpp"
#include "triangulation.hpp"

#include <array>
#include <bit>

namespace patchwork {

/** One sign (+1 or -1) per configuration point. */
using SignDistribution = std::vector<int>;

/** Sign of the monomial of w in the orthant g: s(w) * (-1)^<g,w>. */
inline int orthant_sign(const SignDistribution& s, const OrthantLabel& g, int point_index,
                        const PointConfiguration& config)
{
    if (point_index < 0 || point_index >= config.size())
        throw std::invalid_argument("orthant_sign: unknown point");
    int base = s[static_cast<std::size_t>(point_index)];
    if (base != 1 && base != -1)
        throw std::invalid_argument("orthant_sign: signs must be +1 or -1");
    return pairing_parity(g, config.points[static_cast<std::size_t>(point_index)]) ? -base : base;
}

namespace detail {

/**
 * Quotient bookkeeping for the copies of T_m^n: tight facets of a point set
 * (coordinate facets y_i = 0 plus the outer facet sum = m) and the parity
 * subgroup they generate.
 */
struct SimplexQuotient {
    int n = 0;
    std::int64_t two_m = 0;  // doubled right-hand side of the outer facet

    /** Tight-facet bitmask of a set of doubled points; bit n = outer facet. */
    std::uint32_t tight_mask(const std::vector<std::int64_t>& rows, int npts) const
    {
        std::uint32_t tight = (1u << (n + 1)) - 1;
        for (int p = 0; p < npts && tight; ++p)
        {
            std::int64_t sum = 0;
            for (int j = 0; j < n; ++j)
            {
                std::int64_t c = rows[static_cast<std::size_t>(p * n + j)];
                sum += c;
                if (c != 0)
                    tight &= ~(1u << j);
            }
            if (sum != two_m)
                tight &= ~(1u << n);
        }
        return tight;
    }

    /** Parity subgroup generated by the tight facets' normals. */
    const std::vector<std::uint32_t>& subgroup(std::uint32_t tight) const
    {
        auto it = memo_.find(tight);
        if (it != memo_.end())
            return it->second;
        std::vector<std::uint32_t> gens;
        for (int j = 0; j < n; ++j)
            if (tight & (1u << j))
                gens.push_back(1u << j);
        if (tight & (1u << n))
            gens.push_back((1u << n) - 1);
        std::set<std::uint32_t> group{0};
        bool grew = true;
        while (grew)
        {
            grew = false;
            std::vector<std::uint32_t> cur(group.begin(), group.end());
            for (std::uint32_t a : cur)
                for (std::uint32_t g : gens)
                    if (group.insert(a ^ g).second)
                        grew = true;
        }
        return memo_.emplace(tight, std::vector<std::uint32_t>(group.begin(), group.end()))
            .first->second;
    }

    std::uint32_t canonical_orthant(std::uint32_t orthant, std::uint32_t tight) const
    {
        std::uint32_t best = orthant;
        for (std::uint32_t s : subgroup(tight))
            best = std::min(best, orthant ^ s);
        return best;
    }

private:
    mutable std::map<std::uint32_t, std::vector<std::uint32_t>> memo_;
};

}  // namespace detail

/**
 * A finite cell complex built from simplices living in orthant copies of
 * T_m^n, after quotient identification. Cells are canonical (orthant tag,
 * sorted doubled vertex rows) pairs; boundary incidences are over Z/2.
 */
struct PatchworkComplex {
    struct Cell {
        std::uint32_t orthant = 0;
        int npts = 0;
        std::vector<std::int64_t> rows;  // npts x n, rows sorted lexicographically

        bool operator<(const Cell& o) const
        {
            if (orthant != o.orthant)
                return orthant < o.orthant;
            return rows < o.rows;
        }
    };

    /** Provenance of top cells: which (cell of tau, orthant) produced them. */
    struct Piece {
        int tau_cell = -1;
        std::uint32_t orthant = 0;
        bool whole = false;  // region pieces: the full simplex was kept
        std::vector<int> top_cells;
        int component = -1;
    };

    int n = 0;
    int degree = 0;  // m
    int top_dim = 0;
    std::vector<std::vector<Cell>> cells;                    // per dimension
    std::vector<std::vector<std::vector<int>>> boundaries;   // per dimension >= 1
    std::vector<Piece> pieces;
    int component_count = 0;  // components of the top-cell adjacency

    long cell_count(int d) const
    {
        if (d < 0 || d > top_dim)
            return 0;
        return static_cast<long>(cells[static_cast<std::size_t>(d)].size());
    }

    ChainComplexZ2 chain() const
    {
        ChainComplexZ2 K;
        for (int d = 0; d <= top_dim; ++d)
            K.counts.push_back(cell_count(d));
        K.boundaries.resize(static_cast<std::size_t>(top_dim) + 1);
        for (int d = 1; d <= top_dim; ++d)
            K.boundaries[static_cast<std::size_t>(d)] = boundaries[static_cast<std::size_t>(d)];
        return K;
    }

    std::vector<long> betti() const { return betti_z2(chain()); }
    long euler() const { return euler_characteristic(chain()); }
};

namespace detail {

/** Incremental builder for PatchworkComplex. */
class ComplexBuilder {
public:
    ComplexBuilder(int n, int m, int top_dim) : n_(n), m_(m), top_dim_(top_dim)
    {
        quotient_.n = n;
        quotient_.two_m = 2 * static_cast<std::int64_t>(m);
        cells_.resize(static_cast<std::size_t>(top_dim) + 1);
        index_.resize(static_cast<std::size_t>(top_dim) + 1);
    }

    PatchworkComplex::Cell canonical(std::uint32_t orthant, int npts,
                                     std::vector<std::int64_t> rows) const
    {
        // Sort rows lexicographically.
        std::vector<std::vector<std::int64_t>> r(static_cast<std::size_t>(npts));
        for (int p = 0; p < npts; ++p)
            r[static_cast<std::size_t>(p)] =
                std::vector<std::int64_t>(rows.begin() + p * n_, rows.begin() + (p + 1) * n_);
        std::sort(r.begin(), r.end());
        std::vector<std::int64_t> flat;
        flat.reserve(static_cast<std::size_t>(npts) * n_);
        for (const auto& row : r)
            flat.insert(flat.end(), row.begin(), row.end());
        std::uint32_t tight = quotient_.tight_mask(flat, npts);
        PatchworkComplex::Cell c;
        c.orthant = quotient_.canonical_orthant(orthant, tight);
        c.npts = npts;
        c.rows = std::move(flat);
        return c;
    }

    int add_cell(int dim, const PatchworkComplex::Cell& c)
    {
        auto [it, inserted] =
            index_[static_cast<std::size_t>(dim)].emplace(c, static_cast<int>(cells_[static_cast<std::size_t>(dim)].size()));
        if (inserted)
            cells_[static_cast<std::size_t>(dim)].push_back(c);
        return it->second;
    }

    int add_top(std::uint32_t orthant, const std::vector<std::int64_t>& rows)
    {
        if (static_cast<int>(rows.size()) != (top_dim_ + 1) * n_)
            throw std::logic_error("ComplexBuilder: top cell has wrong point count");
        return add_cell(top_dim_, canonical(orthant, top_dim_ + 1, rows));
    }

    /** Close under faces and assemble boundary incidences (mod 2). */
    PatchworkComplex finalize()
    {
        PatchworkComplex out;
        out.n = n_;
        out.degree = m_;
        out.top_dim = top_dim_;
        out.boundaries.resize(static_cast<std::size_t>(top_dim_) + 1);
        for (int d = top_dim_; d >= 1; --d)
        {
            auto& level = cells_[static_cast<std::size_t>(d)];
            auto& bnd = out.boundaries[static_cast<std::size_t>(d)];
            bnd.resize(level.size());
            for (std::size_t ci = 0; ci < level.size(); ++ci)
            {
                const auto& c = level[ci];
                std::map<int, int> parity;
                for (int drop = 0; drop < c.npts; ++drop)
                {
                    std::vector<std::int64_t> rows;
                    rows.reserve(static_cast<std::size_t>(c.npts - 1) * n_);
                    for (int p = 0; p < c.npts; ++p)
                    {
                        if (p == drop)
                            continue;
                        rows.insert(rows.end(), c.rows.begin() + p * n_, c.rows.begin() + (p + 1) * n_);
                    }
                    int fid = add_cell(d - 1, canonical(c.orthant, c.npts - 1, rows));
                    parity[fid] ^= 1;
                }
                for (const auto& [fid, p] : parity)
                    if (p)
                        bnd[ci].push_back(fid);
                std::sort(bnd[ci].begin(), bnd[ci].end());
            }
        }
        out.cells = std::move(cells_);
        return out;
    }

private:
    int n_, m_, top_dim_;
    SimplexQuotient quotient_;
    std::vector<std::vector<PatchworkComplex::Cell>> cells_;
    std::vector<std::map<PatchworkComplex::Cell, int>> index_;
};

/** Degree of the simplex whose lattice points form the configuration. */
inline int configuration_degree(const PointConfiguration& config)
{
    const int n = config.ambient;
    Int m = 0;
    for (const IntVec& p : config.points)
    {
        Int sum = 0;
        for (int j = 0; j < n; ++j)
        {
            if (p(j) < 0)
                throw std::invalid_argument("configuration must be the lattice points of T_m^n");
            sum += p(j);
        }
        if (sum > m)
            m = sum;
    }
    int mi = m.convert_to<int>();
    std::vector<IntVec> expect = simplex_lattice_points(mi, n);
    if (static_cast<int>(expect.size()) != config.size())
        throw std::invalid_argument("configuration must be the lattice points of T_m^n");
    for (const IntVec& p : expect)
        if (config.index_of(p) < 0)
            throw std::invalid_argument("configuration must be the lattice points of T_m^n");
    return mi;
}

inline void require_certified_primitive(const ConvexTriangulation& tau)
{
    if (!tau.lift || !tau.certified)
        throw std::invalid_argument("triangulation must be convex-certified");
    if (!tau.is_primitive())
        throw std::domain_error("non-primitive cell encountered");
}

/** Doubled coordinates of a configuration point as machine integers. */
inline std::vector<std::int64_t> doubled_row(const IntVec& p)
{
    std::vector<std::int64_t> row(static_cast<std::size_t>(p.size()));
    for (Eigen::Index j = 0; j < p.size(); ++j)
        row[static_cast<std::size_t>(j)] = 2 * p(j).convert_to<std::int64_t>();
    return row;
}

/** Pulled triangulation of a small point set given by int64 rows. */
inline std::vector<std::vector<int>> pull_rows(const std::vector<std::vector<std::int64_t>>& rows)
{
    const std::size_t k = rows.empty() ? 0 : rows[0].size();
    std::vector<IntVec> pts;
    for (const auto& r : rows)
    {
        IntVec p(static_cast<Eigen::Index>(k));
        for (std::size_t j = 0; j < k; ++j)
            p(static_cast<Eigen::Index>(j)) = r[j];
        pts.push_back(p);
    }
    return LatticePolytope::pull_triangulate(pts);
}

}  // namespace detail

/**
 * The glued and identified hypersurface complex of a primitive convex
 * triangulation with a sign distribution: per top simplex and orthant, the
 * convex hull of the midpoints of sign-changing edges, canonically
 * triangulated and glued in C_{T_m^n}.
 */
inline PatchworkComplex hypersurface_complex(const ConvexTriangulation& tau,
                                             const SignDistribution& s)
{
    detail::require_certified_primitive(tau);
    if (static_cast<int>(s.size()) != tau.config.size())
        throw std::invalid_argument("configuration/sign size mismatch");
    for (int v : s)
        if (v != 1 && v != -1)
            throw std::invalid_argument("signs must be +1 or -1");
    const int n = tau.ambient();
    const int m = detail::configuration_degree(tau.config);

    // Parity of every configuration point in every orthant.
    std::vector<std::uint32_t> odd_mask(static_cast<std::size_t>(tau.config.size()), 0);
    for (int i = 0; i < tau.config.size(); ++i)
        for (int j = 0; j < n; ++j)
            if (tau.config.points[static_cast<std::size_t>(i)](j) % 2 != 0)
                odd_mask[static_cast<std::size_t>(i)] |= (1u << j);

    detail::ComplexBuilder builder(n, m, n - 1);
    PatchworkComplex out;

    // Cache of piece triangulations per (cell, sign pattern).
    std::map<std::pair<int, std::uint32_t>, std::vector<std::vector<int>>> piece_cache;

    std::vector<PatchworkComplex::Piece> pieces;
    for (std::size_t ci = 0; ci < tau.cells.size(); ++ci)
    {
        const auto& cell = tau.cells[ci];
        std::vector<std::vector<std::int64_t>> v2(cell.size());
        for (std::size_t k = 0; k < cell.size(); ++k)
            v2[k] = detail::doubled_row(tau.config.points[static_cast<std::size_t>(cell[k])]);
        for (std::uint32_t g = 0; g < (1u << n); ++g)
        {
            std::uint32_t pattern = 0;
            for (std::size_t k = 0; k < cell.size(); ++k)
            {
                int sign = s[static_cast<std::size_t>(cell[k])];
                if (std::popcount(odd_mask[static_cast<std::size_t>(cell[k])] & g) % 2)
                    sign = -sign;
                if (sign > 0)
                    pattern |= (1u << k);
            }
            std::uint32_t all = (1u << cell.size()) - 1;
            if (pattern == 0 || pattern == all)
                continue;  // sign-constant: empty chart
            std::uint32_t norm = (pattern & 1u) ? (pattern ^ all) : pattern;

            // Midpoints of sign-changing edges, in (i, j) lex order.
            std::vector<std::vector<std::int64_t>> mids;
            for (std::size_t i = 0; i < cell.size(); ++i)
                for (std::size_t j = i + 1; j < cell.size(); ++j)
                {
                    if (((pattern >> i) ^ (pattern >> j)) & 1u)
                    {
                        std::vector<std::int64_t> mid(static_cast<std::size_t>(n));
                        for (int c = 0; c < n; ++c)
                            mid[static_cast<std::size_t>(c)] =
                                (v2[i][static_cast<std::size_t>(c)] + v2[j][static_cast<std::size_t>(c)]) / 2;
                        mids.push_back(std::move(mid));
                    }
                }

            auto key = std::make_pair(static_cast<int>(ci), norm);
            auto it = piece_cache.find(key);
            if (it == piece_cache.end())
            {
                std::vector<std::vector<int>> tri;
                if (static_cast<int>(mids.size()) == n)
                {
                    std::vector<int> all_idx(mids.size());
                    std::iota(all_idx.begin(), all_idx.end(), 0);
                    tri.push_back(all_idx);
                }
                else
                {
                    tri = detail::pull_rows(mids);
                }
                it = piece_cache.emplace(key, std::move(tri)).first;
            }

            PatchworkComplex::Piece piece;
            piece.tau_cell = static_cast<int>(ci);
            piece.orthant = g;
            for (const auto& simplex : it->second)
            {
                std::vector<std::int64_t> rows;
                for (int idx : simplex)
                    rows.insert(rows.end(), mids[static_cast<std::size_t>(idx)].begin(),
                                mids[static_cast<std::size_t>(idx)].end());
                piece.top_cells.push_back(builder.add_top(g, rows));
            }
            pieces.push_back(std::move(piece));
        }
    }

    out = builder.finalize();
    out.pieces = std::move(pieces);

    // Components of the glued hypersurface via shared (top_dim-1)-faces.
    if (out.top_dim >= 1 && out.cell_count(out.top_dim) > 0)
    {
        detail::DisjointSet dsu(static_cast<std::size_t>(out.cell_count(out.top_dim)));
        std::map<int, int> face_owner;
        const auto& bnd = out.boundaries[static_cast<std::size_t>(out.top_dim)];
        for (std::size_t t = 0; t < bnd.size(); ++t)
            for (int f : bnd[t])
            {
                auto [it, inserted] = face_owner.emplace(f, static_cast<int>(t));
                if (!inserted)
                    dsu.unite(it->second, static_cast<int>(t));
            }
        std::map<int, int> root_id;
        for (long t = 0; t < out.cell_count(out.top_dim); ++t)
        {
            int r = dsu.find(static_cast<int>(t));
            root_id.emplace(r, static_cast<int>(root_id.size()));
        }
        out.component_count = static_cast<int>(root_id.size());
        for (auto& piece : out.pieces)
            if (!piece.top_cells.empty())
                piece.component = root_id.at(dsu.find(piece.top_cells[0]));
    }
    return out;
}

/**
 * The ambient complex C_{T_m^n} itself: every cell of the subdivision in
 * every orthant, triangulated by pulling when not a simplex, glued and
 * identified. Its Z/2 Betti numbers are those of RP^n.
 */
inline PatchworkComplex ambient_complex(const ConvexTriangulation& tau)
{
    if (!tau.lift || !tau.certified)
        throw std::invalid_argument("triangulation must be convex-certified");
    const int n = tau.ambient();
    const int m = detail::configuration_degree(tau.config);

    detail::ComplexBuilder builder(n, m, n);
    PatchworkComplex out;
    std::vector<PatchworkComplex::Piece> pieces;
    for (std::size_t ci = 0; ci < tau.cells.size(); ++ci)
    {
        const auto& cell = tau.cells[ci];
        std::vector<std::vector<std::int64_t>> rows(cell.size());
        for (std::size_t k = 0; k < cell.size(); ++k)
            rows[k] = detail::doubled_row(tau.config.points[static_cast<std::size_t>(cell[k])]);
        auto tri = detail::pull_rows(rows);
        for (std::uint32_t g = 0; g < (1u << n); ++g)
        {
            PatchworkComplex::Piece piece;
            piece.tau_cell = static_cast<int>(ci);
            piece.orthant = g;
            piece.whole = true;
            for (const auto& simplex : tri)
            {
                std::vector<std::int64_t> flat;
                for (int idx : simplex)
                    flat.insert(flat.end(), rows[static_cast<std::size_t>(idx)].begin(),
                                rows[static_cast<std::size_t>(idx)].end());
                piece.top_cells.push_back(builder.add_top(g, flat));
            }
            pieces.push_back(std::move(piece));
        }
    }
    out = builder.finalize();
    out.pieces = std::move(pieces);
    return out;
}

/**
 * The closed region on the chosen-sign side: per simplex and orthant the
 * whole simplex (sign-constant of that sign), the sign-side slice (mixed),
 * or nothing. Components use the facet-adjacency rule: two pieces touch
 * across a shared facet iff the facet carries a chosen-sign vertex on each
 * side, in each side's own orthant.
 */
struct RegionComplex {
    PatchworkComplex complex;
    int sign_choice = +1;
    int component_count = 0;
    std::vector<bool> closed_flags;  // per component

    long open_components() const
    {
        long c = 0;
        for (bool f : closed_flags)
            if (!f)
                ++c;
        return c;
    }

    long closed_components() const
    {
        long c = 0;
        for (bool f : closed_flags)
            if (f)
                ++c;
        return c;
    }
};

inline RegionComplex region_complex(const ConvexTriangulation& tau, const SignDistribution& s,
                                    int sign_choice)
{
    if (sign_choice != 1 && sign_choice != -1)
        throw std::invalid_argument("region_complex: sign choice must be +1 or -1");
    detail::require_certified_primitive(tau);
    if (static_cast<int>(s.size()) != tau.config.size())
        throw std::invalid_argument("configuration/sign size mismatch");
    const int n = tau.ambient();
    const int m = detail::configuration_degree(tau.config);

    std::vector<std::uint32_t> odd_mask(static_cast<std::size_t>(tau.config.size()), 0);
    for (int i = 0; i < tau.config.size(); ++i)
        for (int j = 0; j < n; ++j)
            if (tau.config.points[static_cast<std::size_t>(i)](j) % 2 != 0)
                odd_mask[static_cast<std::size_t>(i)] |= (1u << j);

    detail::ComplexBuilder builder(n, m, n);

    RegionComplex region;
    region.sign_choice = sign_choice;

    std::map<std::pair<int, std::uint32_t>, std::vector<std::vector<int>>> slice_cache;
    std::vector<PatchworkComplex::Piece> pieces;
    // Facet-level adjacency: canonical facet -> (piece id, chosen vertices of
    // the facet as a bitmask over its canonical row order). Two pieces touch
    // across the facet iff their chosen parts share a vertex; when the
    // quotient identification flips every sign (odd degree, outer facet) the
    // chosen parts are complementary and meet only on the hypersurface, which
    // must not merge region components.
    std::map<PatchworkComplex::Cell, std::vector<std::pair<int, std::uint32_t>>> facet_pieces;

    for (std::size_t ci = 0; ci < tau.cells.size(); ++ci)
    {
        const auto& cell = tau.cells[ci];
        std::vector<std::vector<std::int64_t>> v2(cell.size());
        for (std::size_t k = 0; k < cell.size(); ++k)
            v2[k] = detail::doubled_row(tau.config.points[static_cast<std::size_t>(cell[k])]);
        for (std::uint32_t g = 0; g < (1u << n); ++g)
        {
            std::uint32_t chosen = 0;
            for (std::size_t k = 0; k < cell.size(); ++k)
            {
                int sign = s[static_cast<std::size_t>(cell[k])];
                if (std::popcount(odd_mask[static_cast<std::size_t>(cell[k])] & g) % 2)
                    sign = -sign;
                if (sign == sign_choice)
                    chosen |= (1u << k);
            }
            if (chosen == 0)
                continue;
            std::uint32_t all = (1u << cell.size()) - 1;

            // Piece points: chosen vertices plus midpoints of mixed edges.
            std::vector<std::vector<std::int64_t>> ppts;
            for (std::size_t k = 0; k < cell.size(); ++k)
                if ((chosen >> k) & 1u)
                    ppts.push_back(v2[k]);
            for (std::size_t i = 0; i < cell.size(); ++i)
                for (std::size_t j = i + 1; j < cell.size(); ++j)
                    if (((chosen >> i) ^ (chosen >> j)) & 1u)
                    {
                        std::vector<std::int64_t> mid(static_cast<std::size_t>(n));
                        for (int c = 0; c < n; ++c)
                            mid[static_cast<std::size_t>(c)] =
                                (v2[i][static_cast<std::size_t>(c)] + v2[j][static_cast<std::size_t>(c)]) / 2;
                        ppts.push_back(std::move(mid));
                    }

            auto key = std::make_pair(static_cast<int>(ci), chosen);
            auto it = slice_cache.find(key);
            if (it == slice_cache.end())
            {
                std::vector<std::vector<int>> tri;
                if (static_cast<int>(ppts.size()) == n + 1)
                {
                    std::vector<int> all_idx(ppts.size());
                    std::iota(all_idx.begin(), all_idx.end(), 0);
                    tri.push_back(all_idx);
                }
                else
                {
                    tri = detail::pull_rows(ppts);
                }
                it = slice_cache.emplace(key, std::move(tri)).first;
            }

            PatchworkComplex::Piece piece;
            piece.tau_cell = static_cast<int>(ci);
            piece.orthant = g;
            piece.whole = (chosen == all);
            for (const auto& simplex : it->second)
            {
                std::vector<std::int64_t> rows;
                for (int idx : simplex)
                    rows.insert(rows.end(), ppts[static_cast<std::size_t>(idx)].begin(),
                                ppts[static_cast<std::size_t>(idx)].end());
                piece.top_cells.push_back(builder.add_top(g, rows));
            }
            int piece_id = static_cast<int>(pieces.size());
            pieces.push_back(std::move(piece));

            // Register the piece at every facet of its simplex carrying a
            // chosen-sign vertex, remembering which facet vertices those are.
            for (std::size_t drop = 0; drop < cell.size(); ++drop)
            {
                std::vector<std::pair<std::vector<std::int64_t>, bool>> fverts;
                for (std::size_t k = 0; k < cell.size(); ++k)
                {
                    if (k == drop)
                        continue;
                    fverts.emplace_back(v2[k], ((chosen >> k) & 1u) != 0);
                }
                std::sort(fverts.begin(), fverts.end());
                std::uint32_t carry_mask = 0;
                std::vector<std::int64_t> rows;
                for (std::size_t k = 0; k < fverts.size(); ++k)
                {
                    if (fverts[k].second)
                        carry_mask |= (1u << k);
                    rows.insert(rows.end(), fverts[k].first.begin(), fverts[k].first.end());
                }
                if (carry_mask == 0)
                    continue;
                auto fkey = builder.canonical(g, static_cast<int>(cell.size()) - 1, rows);
                facet_pieces[fkey].emplace_back(piece_id, carry_mask);
            }
        }
    }

    // Union pieces whose chosen parts of a shared facet overlap in a vertex.
    detail::DisjointSet dsu(pieces.size());
    for (const auto& [fkey, ids] : facet_pieces)
        for (std::size_t i = 0; i < ids.size(); ++i)
            for (std::size_t j = i + 1; j < ids.size(); ++j)
                if (ids[i].second & ids[j].second)
                    dsu.unite(ids[i].first, ids[j].first);
    std::map<int, int> root_id;
    for (std::size_t p = 0; p < pieces.size(); ++p)
        root_id.emplace(dsu.find(static_cast<int>(p)), static_cast<int>(root_id.size()));
    region.component_count = static_cast<int>(root_id.size());
    region.closed_flags.assign(static_cast<std::size_t>(region.component_count), true);
    for (std::size_t p = 0; p < pieces.size(); ++p)
    {
        pieces[p].component = root_id.at(dsu.find(static_cast<int>(p)));
        if (!pieces[p].whole)
            region.closed_flags[static_cast<std::size_t>(pieces[p].component)] = false;
    }

    region.complex = builder.finalize();
    region.complex.pieces = std::move(pieces);
    region.complex.component_count = region.component_count;
    return region;
}

/**
 * b_0 of the double cover branched along the region boundary: components
 * with boundary lift once, closed components twice.
 */
inline long double_plane_b0(const RegionComplex& region)
{
    if (region.sign_choice != +1)
        throw std::invalid_argument("double_plane_b0: region must be computed for sign +");
    return region.open_components() + 2 * region.closed_components();
}

/**
 * The Harnack-style sign rule on T_m^2 (m even): -1 exactly at points with
 * both coordinates odd, aligned with the lex-ordered lattice configuration.
 */
inline SignDistribution harnack_signs(int m)
{
    if (m < 2 || m % 2 != 0)
        throw std::invalid_argument("harnack_signs: m must be an even integer >= 2");
    SignDistribution s;
    for (const IntVec& p : simplex_lattice_points(m, 2))
        s.push_back((p(0) % 2 != 0 && p(1) % 2 != 0) ? -1 : +1);
    return s;
}

/* ------------------------------------------------------------------ *
 *            Fast exhaustive search over sign distributions           *
 * ------------------------------------------------------------------ */

/**
 * Precomputed component counter for plane curves over a fixed primitive
 * triangulation of T_m^2: midpoint identities are canonicalized once, and
 * each sign distribution costs one union-find sweep. Independent of the
 * full complex machinery; used as its cross-check and for exhaustive
 * maxima.
 */
class CurveComponentCounter {
public:
    explicit CurveComponentCounter(const ConvexTriangulation& tau)
    {
        detail::require_certified_primitive(tau);
        if (tau.ambient() != 2)
            throw std::invalid_argument("CurveComponentCounter: plane curves only");
        const int m = detail::configuration_degree(tau.config);
        detail::SimplexQuotient quotient;
        quotient.n = 2;
        quotient.two_m = 2 * static_cast<std::int64_t>(m);
        npts_ = tau.config.size();
        for (int i = 0; i < npts_; ++i)
        {
            std::uint32_t mask = 0;
            for (int j = 0; j < 2; ++j)
                if (tau.config.points[static_cast<std::size_t>(i)](j) % 2 != 0)
                    mask |= (1u << j);
            odd_mask_.push_back(mask);
        }
        std::map<std::pair<std::uint32_t, std::pair<std::int64_t, std::int64_t>>, int> mid_ids;
        for (const auto& cell : tau.cells)
        {
            std::array<int, 3> tri{cell[0], cell[1], cell[2]};
            std::array<std::array<int, 4>, 3> ids{};
            const std::array<std::pair<int, int>, 3> edges{{{0, 1}, {0, 2}, {1, 2}}};
            for (int e = 0; e < 3; ++e)
            {
                auto [a, b] = edges[static_cast<std::size_t>(e)];
                std::vector<std::int64_t> mid(2);
                for (int c = 0; c < 2; ++c)
                    mid[static_cast<std::size_t>(c)] =
                        (tau.config.points[static_cast<std::size_t>(tri[static_cast<std::size_t>(a)])](c) +
                         tau.config.points[static_cast<std::size_t>(tri[static_cast<std::size_t>(b)])](c))
                            .convert_to<std::int64_t>();
                std::uint32_t tight = quotient.tight_mask(mid, 1);
                for (std::uint32_t g = 0; g < 4; ++g)
                {
                    std::uint32_t canon = quotient.canonical_orthant(g, tight);
                    auto key = std::make_pair(canon, std::make_pair(mid[0], mid[1]));
                    auto [it, inserted] = mid_ids.emplace(key, static_cast<int>(mid_ids.size()));
                    ids[static_cast<std::size_t>(e)][g] = it->second;
                }
            }
            tris_.push_back(tri);
            mid_ids_.push_back(ids);
        }
        n_mid_ = static_cast<int>(mid_ids.size());
    }

    int point_count() const { return npts_; }

    /** b_0 of the patchworked curve for the given signs (+1/-1 per point). */
    long b0(const SignDistribution& s) const
    {
        std::vector<std::uint8_t> neg(static_cast<std::size_t>(npts_));
        for (int i = 0; i < npts_; ++i)
            neg[static_cast<std::size_t>(i)] = (s[static_cast<std::size_t>(i)] < 0);
        return b0_impl([&](int i) { return neg[static_cast<std::size_t>(i)]; });
    }

    /** Same, with signs packed as a bitmask (bit set means -1). */
    long b0_mask(std::uint64_t mask) const
    {
        return b0_impl([&](int i) { return (mask >> i) & 1u; });
    }

private:
    template <typename NegFn>
    long b0_impl(const NegFn& neg) const
    {
        std::vector<int> parent(static_cast<std::size_t>(n_mid_), -1);
        std::function<int(int)> find = [&](int v) {
            while (parent[static_cast<std::size_t>(v)] != v &&
                   parent[static_cast<std::size_t>(v)] >= 0)
            {
                int p = parent[static_cast<std::size_t>(v)];
                if (parent[static_cast<std::size_t>(p)] >= 0)
                    parent[static_cast<std::size_t>(v)] = parent[static_cast<std::size_t>(p)];
                v = parent[static_cast<std::size_t>(v)];
            }
            return v;
        };
        for (std::size_t t = 0; t < tris_.size(); ++t)
        {
            const auto& tri = tris_[t];
            for (std::uint32_t g = 0; g < 4; ++g)
            {
                std::array<int, 3> sign{};
                for (int k = 0; k < 3; ++k)
                {
                    int v = tri[static_cast<std::size_t>(k)];
                    int sg = neg(v) ? -1 : 1;
                    if (std::popcount(odd_mask_[static_cast<std::size_t>(v)] & g) % 2)
                        sg = -sg;
                    sign[static_cast<std::size_t>(k)] = sg;
                }
                if (sign[0] == sign[1] && sign[1] == sign[2])
                    continue;
                // Exactly two sign-changing edges; connect their midpoints.
                int e1 = -1, e2 = -1;
                if (sign[0] != sign[1])
                    e1 = 0;
                if (sign[0] != sign[2])
                {
                    if (e1 < 0)
                        e1 = 1;
                    else
                        e2 = 1;
                }
                if (sign[1] != sign[2])
                {
                    if (e1 < 0)
                        e1 = 2;
                    else
                        e2 = 2;
                }
                int a = mid_ids_[t][static_cast<std::size_t>(e1)][g];
                int b = mid_ids_[t][static_cast<std::size_t>(e2)][g];
                if (parent[static_cast<std::size_t>(a)] < 0)
                    parent[static_cast<std::size_t>(a)] = a;
                if (parent[static_cast<std::size_t>(b)] < 0)
                    parent[static_cast<std::size_t>(b)] = b;
                a = find(a);
                b = find(b);
                if (a != b)
                    parent[static_cast<std::size_t>(a)] = b;
            }
        }
        long components = 0;
        for (int v = 0; v < n_mid_; ++v)
            if (parent[static_cast<std::size_t>(v)] == v)
                ++components;
        return components;
    }

    int npts_ = 0;
    int n_mid_ = 0;
    std::vector<std::uint32_t> odd_mask_;
    std::vector<std::array<int, 3>> tris_;
    std::vector<std::array<std::array<int, 4>, 3>> mid_ids_;
};

}  // namespace patchwork

#endif  // PATCHWORK_PATCHWORK_HPP
