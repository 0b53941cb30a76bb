#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "patchwork/triangulation.hpp"

#include <random>

using namespace patchwork;

namespace {

IntVec pt(std::initializer_list<long> c) { return make_point(c); }

ConvexTriangulation trivial_triangulation(int m, int n)
{
    PointConfiguration config(n, simplex_lattice_points(m, n));
    ConvexTriangulation tau;
    tau.config = config;
    std::vector<int> all(static_cast<std::size_t>(config.size()));
    std::iota(all.begin(), all.end(), 0);
    tau.cells = {all};
    tau.lift = LiftingFunction(static_cast<std::size_t>(config.size()), Rat(0));
    tau.certified = true;
    return tau;
}

Rat cells_volume(const ConvexTriangulation& tau)
{
    Rat total(0);
    for (std::size_t i = 0; i < tau.cells.size(); ++i)
        total += tau.cell_polytope(static_cast<int>(i)).volume();
    return total;
}

}  // namespace

TEST_CASE("regular subdivision of the lifted unit square")
{
    PointConfiguration sq(2, {pt({0, 0}), pt({0, 1}), pt({1, 0}), pt({1, 1})});
    auto tau = regular_subdivision(sq, {Rat(0), Rat(0), Rat(0), Rat(1)});
    // Frozen from the four-point lower hull worked by hand: two triangles
    // split along the diagonal from (1,0) to (0,1).
    REQUIRE(tau.cells.size() == 2);
    CHECK(tau.cells[0] == std::vector<int>{0, 1, 2});
    CHECK(tau.cells[1] == std::vector<int>{1, 2, 3});
    CHECK(certify_convexity(tau).ok());
}

TEST_CASE("affine lifts induce the trivial subdivision")
{
    for (auto [m, n] : std::vector<std::pair<int, int>>{{2, 2}, {3, 2}, {2, 3}})
    {
        PointConfiguration config(n, simplex_lattice_points(m, n));
        LiftingFunction nu;
        for (const IntVec& p : config.points)
        {
            Rat v(7);
            for (int j = 0; j < n; ++j)
                v += Rat(j + 1) * Rat(p(j));
            nu.push_back(v);
        }
        auto tau = regular_subdivision(config, nu);
        REQUIRE(tau.cells.size() == 1);
        CHECK(static_cast<int>(tau.cells[0].size()) == config.size());
        CHECK(certify_convexity(tau).ok());
    }

    // One-dimensional flat case: a single cell [0, 2].
    PointConfiguration seg(1, {pt({0}), pt({1}), pt({2})});
    auto tau = regular_subdivision(seg, {Rat(0), Rat(0), Rat(0)});
    REQUIRE(tau.cells.size() == 1);
    CHECK(tau.cells[0] == std::vector<int>{0, 1, 2});
}

TEST_CASE("regular subdivision rejects bad inputs")
{
    CHECK_THROWS_AS(regular_subdivision(PointConfiguration{}, {}), std::invalid_argument);
    // Not full-dimensional: two points on a line in the plane.
    PointConfiguration flat(2, {pt({0, 0}), pt({1, 0})});
    CHECK_THROWS_AS(regular_subdivision(flat, {Rat(0), Rat(0)}), std::invalid_argument);
}

TEST_CASE("certification: failures are detected and reported")
{
    PointConfiguration sq(2, {pt({0, 0}), pt({0, 1}), pt({1, 0}), pt({1, 1})});
    auto tau = regular_subdivision(sq, {Rat(0), Rat(0), Rat(0), Rat(1)});

    // The same cells with a flat lift are not a convex subdivision.
    ConvexTriangulation flat = tau;
    flat.lift = LiftingFunction{Rat(0), Rat(0), Rat(0), Rat(0)};
    auto rep = certify_convexity(flat);
    CHECK(rep.status == CertifyReport::Status::not_convex);
    CHECK(rep.cell == 0);
    CHECK(rep.point == 3);

    // A claimed full-dimensional cell with affinely dependent points is
    // reported as degenerate, not merely non-convex.
    ConvexTriangulation degenerate;
    degenerate.config = PointConfiguration(2, {pt({0, 0}), pt({1, 0}), pt({2, 0}), pt({0, 1})});
    degenerate.cells = {{0, 1, 2}};
    degenerate.lift = LiftingFunction{Rat(0), Rat(0), Rat(0), Rat(0)};
    CHECK(certify_convexity(degenerate).status == CertifyReport::Status::degenerate_cell);

    CHECK(certify_convexity(trivial_triangulation(2, 2)).ok());

    ConvexTriangulation no_lift = tau;
    no_lift.lift.reset();
    CHECK_THROWS_AS(certify_convexity(no_lift), std::invalid_argument);
}

TEST_CASE("staircase primitive triangulations")
{
    CHECK(primitive_triangulation(1, 2).cells.size() == 1);
    CHECK(primitive_triangulation(1, 3).cells.size() == 1);
    CHECK(primitive_triangulation(2, 2).cells.size() == 4);

    auto p33 = primitive_triangulation(3, 3);
    REQUIRE(p33.cells.size() == 27);
    for (std::size_t i = 0; i < p33.cells.size(); ++i)
        CHECK(p33.cell_polytope(static_cast<int>(i)).volume() == Rat(1, 6));

    for (auto [m, n] : std::vector<std::pair<int, int>>{{1, 2}, {2, 2}, {3, 2}, {4, 2},
                                                        {1, 3}, {2, 3}, {3, 3}})
    {
        auto tau = primitive_triangulation(m, n);
        Int expected = 1;
        for (int i = 0; i < n; ++i)
            expected *= m;
        CHECK(Int(static_cast<long>(tau.cells.size())) == expected);
        CHECK(tau.is_primitive());
        CHECK(certify_convexity(tau).ok());

        // Every lattice point is a vertex of some cell.
        std::set<int> used;
        for (const auto& cell : tau.cells)
            used.insert(cell.begin(), cell.end());
        CHECK(static_cast<int>(used.size()) == tau.config.size());

        // Round trip: the stored lift induces exactly the stored cells.
        auto redo = regular_subdivision(tau.config, *tau.lift);
        CHECK(redo.cells == tau.cells);

        // Volumes add up to the hull volume.
        CHECK(cells_volume(tau) == tau.hull().volume());
    }
}

TEST_CASE("machine-word and big-integer hull paths agree")
{
    // Scaling every lift value by the same positive constant leaves the
    // subdivision unchanged; values beyond the 64-bit range force the
    // big-integer path.
    std::mt19937 rng(29);
    std::uniform_int_distribution<int> num(-5, 5);
    PointConfiguration config(2, simplex_lattice_points(3, 2));
    Rat huge = Rat(Int("1208925819614629174706176"));  // 2^80
    for (int trial = 0; trial < 6; ++trial)
    {
        LiftingFunction nu, scaled;
        for (int i = 0; i < config.size(); ++i)
        {
            Rat v(num(rng), 1 + (trial % 3));
            nu.push_back(v);
            scaled.push_back(v * huge);
        }
        CHECK(regular_subdivision(config, nu).cells ==
              regular_subdivision(config, scaled).cells);
    }
}

TEST_CASE("certification of a larger staircase (parallel strictness checks)")
{
    auto tau = primitive_triangulation(8, 2);
    REQUIRE(tau.cells.size() == 64);
    CHECK(certify_convexity(tau).ok());
}

TEST_CASE("regular subdivisions are invariant under adding an affine function")
{
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> num(-4, 4), den(1, 4);
    PointConfiguration config(2, simplex_lattice_points(3, 2));
    for (int trial = 0; trial < 10; ++trial)
    {
        LiftingFunction nu;
        for (int i = 0; i < config.size(); ++i)
            nu.push_back(Rat(num(rng), den(rng)));
        auto tau = regular_subdivision(config, nu);
        CHECK(certify_convexity(tau).ok());
        CHECK(cells_volume(tau) == tau.hull().volume());

        LiftingFunction shifted = nu;
        Rat c0(num(rng)), c1(num(rng)), c2(num(rng));
        for (int i = 0; i < config.size(); ++i)
            shifted[static_cast<std::size_t>(i)] +=
                c0 + c1 * Rat(config.points[static_cast<std::size_t>(i)](0)) +
                c2 * Rat(config.points[static_cast<std::size_t>(i)](1));
        CHECK(regular_subdivision(config, shifted).cells == tau.cells);
    }
}

TEST_CASE("dilation scales cells and keeps a valid certificate")
{
    auto triv = trivial_triangulation(1, 2);
    auto big = dilate(triv, 3);
    REQUIRE(big.cells.size() == 1);
    CHECK(static_cast<int>(big.cells[0].size()) == big.config.size());
    CHECK(big.config.size() == 10);  // T_3^2
    CHECK(big.certified);

    auto scaled = dilate(primitive_triangulation(2, 2), 2);
    REQUIRE(scaled.cells.size() == 4);
    for (std::size_t i = 0; i < scaled.cells.size(); ++i)
    {
        auto poly = scaled.cell_polytope(static_cast<int>(i));
        CHECK(poly.normalized_volume() == 4);  // a copy of T_2^2
        CHECK(poly.vertices().size() == 3);
        CHECK(poly.lattice_points().size() == 6);
    }
    CHECK(certify_convexity(scaled).ok());

    CHECK_THROWS_AS(dilate(triv, Int(0)), std::invalid_argument);
}

TEST_CASE("island embedding: trivial island inside a dilated cell")
{
    auto triv = trivial_triangulation(1, 2);
    auto outer = dilate(triv, 4);
    Island island{0, AffineUnimodularMap::translation_by(pt({1, 1})), triv};
    auto refined = embed_islands(outer, {island});
    CHECK(certify_convexity(refined).ok());
    CHECK(cells_volume(refined) == outer.hull().volume());

    // The island cell appears verbatim.
    bool found = false;
    for (const auto& cell : refined.cells)
    {
        if (cell.size() != 3)
            continue;
        std::vector<IntVec> pts;
        for (int i : cell)
            pts.push_back(refined.config.points[static_cast<std::size_t>(i)]);
        if (points_equal(pts[0], pt({1, 1})) && points_equal(pts[1], pt({1, 2})) &&
            points_equal(pts[2], pt({2, 1})))
            found = true;
    }
    CHECK(found);

    // All cells are simplices after refinement.
    for (std::size_t i = 0; i < refined.cells.size(); ++i)
        CHECK(refined.cell_polytope(static_cast<int>(i)).vertices().size() == 3);
}

TEST_CASE("island embedding: no islands, bad placements")
{
    auto outer = dilate(trivial_triangulation(1, 2), 4);
    CHECK(embed_islands(outer, {}).cells == outer.cells);

    auto triv = trivial_triangulation(1, 2);
    // Touching the boundary is rejected.
    Island touching{0, AffineUnimodularMap::translation_by(pt({0, 0})), triv};
    CHECK_THROWS_WITH_AS(embed_islands(outer, {touching}), "island not interior",
                         std::domain_error);

    Island island{0, AffineUnimodularMap::translation_by(pt({1, 1})), triv};
    CHECK_THROWS_WITH_AS(embed_islands(outer, {island, island}), "overlapping islands",
                         std::domain_error);
}

TEST_CASE("island embedding: two primitive islands in distinct cells")
{
    const int m0 = 2;
    auto outer = dilate(primitive_triangulation(2, 2), m0 + 3);
    auto inner = primitive_triangulation(m0, 2);

    // Place translated islands strictly inside two distinct host cells:
    // probe each scaled cell from its lex-smallest vertex.
    std::vector<Island> islands;
    std::vector<IntVec> anchors;
    for (std::size_t cell = 0; cell < outer.cells.size() && islands.size() < 2; ++cell)
    {
        auto poly = outer.cell_polytope(static_cast<int>(cell));
        auto island_hull = standard_simplex(m0, 2);
        IntVec base = poly.vertices()[0] + pt({1, 1});
        bool ok = true;
        for (const IntVec& v : island_hull.vertices())
            if (!poly.strictly_contains(IntVec(base + v)))
                ok = false;
        if (!ok)
            continue;
        islands.push_back({static_cast<int>(cell), AffineUnimodularMap::translation_by(base), inner});
        anchors.push_back(base);
    }
    REQUIRE(islands.size() == 2);

    auto refined = embed_islands(outer, islands);
    CHECK(certify_convexity(refined).ok());
    CHECK(cells_volume(refined) == outer.hull().volume());

    // Both islands appear cell-for-cell.
    std::set<std::vector<std::vector<long>>> present;
    for (const auto& cell : refined.cells)
    {
        std::vector<std::vector<long>> key;
        for (int i : cell)
        {
            const IntVec& p = refined.config.points[static_cast<std::size_t>(i)];
            key.push_back({p(0).convert_to<long>(), p(1).convert_to<long>()});
        }
        present.insert(key);
    }
    for (std::size_t isl = 0; isl < islands.size(); ++isl)
        for (const auto& icell : inner.cells)
        {
            std::vector<std::vector<long>> key;
            for (int i : icell)
            {
                IntVec p = anchors[isl] + inner.config.points[static_cast<std::size_t>(i)];
                key.push_back({p(0).convert_to<long>(), p(1).convert_to<long>()});
            }
            std::sort(key.begin(), key.end());
            CHECK(present.count(key) == 1);
        }
}
