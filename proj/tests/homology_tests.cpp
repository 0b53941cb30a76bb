#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "patchwork/homology.hpp"

#include <random>

using namespace patchwork;

namespace {

/** Chain complex of an abstract 2-complex given by its triangles/edges. */
ChainComplexZ2 from_simplices(int vertices, std::vector<std::vector<int>> edges,
                              std::vector<std::vector<int>> triangles)
{
    // Close the triangle list under edges.
    std::map<std::vector<int>, int> edge_id;
    for (auto& e : edges)
        std::sort(e.begin(), e.end());
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    for (auto& t : triangles)
    {
        std::sort(t.begin(), t.end());
        for (int drop = 0; drop < 3; ++drop)
        {
            std::vector<int> e;
            for (int i = 0; i < 3; ++i)
                if (i != drop)
                    e.push_back(t[static_cast<std::size_t>(i)]);
            if (std::find(edges.begin(), edges.end(), e) == edges.end())
                edges.push_back(e);
        }
    }
    std::sort(edges.begin(), edges.end());
    for (std::size_t i = 0; i < edges.size(); ++i)
        edge_id[edges[i]] = static_cast<int>(i);

    ChainComplexZ2 K;
    K.counts = {vertices, static_cast<long>(edges.size())};
    K.boundaries.resize(2);
    K.boundaries[1] = edges;
    if (!triangles.empty())
    {
        K.counts.push_back(static_cast<long>(triangles.size()));
        K.boundaries.resize(3);
        for (const auto& t : triangles)
        {
            std::vector<int> col;
            for (int drop = 0; drop < 3; ++drop)
            {
                std::vector<int> e;
                for (int i = 0; i < 3; ++i)
                    if (i != drop)
                        e.push_back(t[static_cast<std::size_t>(i)]);
                col.push_back(edge_id.at(e));
            }
            std::sort(col.begin(), col.end());
            K.boundaries[2].push_back(col);
        }
    }
    return K;
}

ChainComplexZ2 circle()
{
    ChainComplexZ2 K;
    K.counts = {2, 2};
    K.boundaries = {{}, {{0, 1}, {0, 1}}};
    return K;
}

/** The six-vertex triangulation of the projective plane. */
ChainComplexZ2 projective_plane()
{
    return from_simplices(6, {},
                          {{0, 1, 3}, {0, 1, 5}, {0, 2, 3}, {0, 2, 4}, {0, 4, 5},
                           {1, 2, 4}, {1, 2, 5}, {1, 3, 4}, {2, 3, 5}, {3, 4, 5}});
}

/** The seven-vertex triangulation of the torus: {i,i+1,i+3}, {i,i+2,i+3} mod 7. */
ChainComplexZ2 torus()
{
    std::vector<std::vector<int>> tris;
    for (int i = 0; i < 7; ++i)
    {
        tris.push_back({i, (i + 1) % 7, (i + 3) % 7});
        tris.push_back({i, (i + 2) % 7, (i + 3) % 7});
    }
    return from_simplices(7, {}, tris);
}

/** One round of barycentric-style subdivision of a pure 2-complex. */
ChainComplexZ2 subdivide(int vertices, const std::vector<std::vector<int>>& triangles)
{
    std::map<std::vector<int>, int> edge_vertex;
    int next = vertices;
    auto edge_of = [&](int a, int b) {
        std::vector<int> e{std::min(a, b), std::max(a, b)};
        auto [it, inserted] = edge_vertex.emplace(e, next);
        if (inserted)
            ++next;
        return it->second;
    };
    std::vector<std::vector<int>> small;
    for (const auto& t : triangles)
    {
        int a = t[0], b = t[1], c = t[2];
        int ab = edge_of(a, b), ac = edge_of(a, c), bc = edge_of(b, c);
        small.push_back({a, ab, ac});
        small.push_back({b, ab, bc});
        small.push_back({c, ac, bc});
        small.push_back({ab, ac, bc});
    }
    return from_simplices(next, {}, small);
}

}  // namespace

TEST_CASE("betti numbers of the classical small complexes")
{
    CHECK(betti_z2(circle()) == std::vector<long>{1, 1});
    CHECK(betti_z2(projective_plane()) == std::vector<long>{1, 1, 1});
    CHECK(betti_z2(torus()) == std::vector<long>{1, 2, 1});
}

TEST_CASE("euler characteristics")
{
    CHECK(euler_characteristic(circle()) == 0);
    CHECK(euler_characteristic(projective_plane()) == 1);

    // Disjoint union of two tetrahedral spheres.
    std::vector<std::vector<int>> tris;
    for (int base : {0, 4})
        for (int drop = 0; drop < 4; ++drop)
        {
            std::vector<int> t;
            for (int i = 0; i < 4; ++i)
                if (i != drop)
                    t.push_back(base + i);
            tris.push_back(t);
        }
    auto spheres = from_simplices(8, {}, tris);
    CHECK(euler_characteristic(spheres) == 4);
    CHECK(betti_z2(spheres) == std::vector<long>{2, 0, 2});

    // chi equals the alternating sum of the Betti numbers.
    for (const auto& K : {circle(), projective_plane(), torus(), spheres})
    {
        auto b = betti_z2(K);
        long alt = 0;
        for (std::size_t d = 0; d < b.size(); ++d)
            alt += (d % 2 == 0 ? 1 : -1) * b[d];
        CHECK(alt == euler_characteristic(K));
    }
}

TEST_CASE("connected components")
{
    CHECK(connected_components(ChainComplexZ2{}) == 0);

    ChainComplexZ2 two_circles;
    two_circles.counts = {4, 4};
    two_circles.boundaries = {{}, {{0, 1}, {0, 1}, {2, 3}, {2, 3}}};
    CHECK(connected_components(two_circles) == 2);
    CHECK(betti_z2(two_circles) == std::vector<long>{2, 2});
}

TEST_CASE("malformed complexes are rejected")
{
    ChainComplexZ2 bad;
    bad.counts = {3, 2, 1};
    bad.boundaries.resize(3);
    bad.boundaries[1] = {{0, 1}, {1, 2}};
    bad.boundaries[2] = {{0, 1}};  // boundary of boundary = {0, 2} != 0
    CHECK_THROWS_AS(betti_z2(bad), std::domain_error);
}

TEST_CASE("dense and sparse elimination agree")
{
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> rows_dist(1, 40), fill(0, 4);
    for (int trial = 0; trial < 50; ++trial)
    {
        int rows = rows_dist(rng), cols = rows_dist(rng);
        std::vector<std::vector<int>> columns(static_cast<std::size_t>(cols));
        for (auto& col : columns)
        {
            std::set<int> entries;
            int k = fill(rng);
            for (int i = 0; i < k; ++i)
                entries.insert(static_cast<int>(rng() % static_cast<unsigned>(rows)));
            col.assign(entries.begin(), entries.end());
        }
        CHECK(detail::gf2_rank_dense(rows, columns) == detail::gf2_rank_sparse(rows, columns));
    }
}

TEST_CASE("betti numbers are invariant under subdivision")
{
    std::vector<std::vector<int>> rp2 = {{0, 1, 3}, {0, 1, 5}, {0, 2, 3}, {0, 2, 4}, {0, 4, 5},
                                         {1, 2, 4}, {1, 2, 5}, {1, 3, 4}, {2, 3, 5}, {3, 4, 5}};
    CHECK(betti_z2(subdivide(6, rp2)) == std::vector<long>{1, 1, 1});

    std::vector<std::vector<int>> tor;
    for (int i = 0; i < 7; ++i)
    {
        tor.push_back({i, (i + 1) % 7, (i + 3) % 7});
        tor.push_back({i, (i + 2) % 7, (i + 3) % 7});
    }
    CHECK(betti_z2(subdivide(7, tor)) == std::vector<long>{1, 2, 1});
}

TEST_CASE("components agree with the zeroth Betti number on random complexes")
{
    std::mt19937 rng(17);
    std::uniform_int_distribution<int> nv(1, 8), ne(0, 10), nt(0, 5);
    for (int trial = 0; trial < 500; ++trial)
    {
        int vertices = nv(rng);
        std::vector<std::vector<int>> edges, tris;
        int e = ne(rng);
        for (int i = 0; i < e; ++i)
        {
            int a = static_cast<int>(rng() % static_cast<unsigned>(vertices));
            int b = static_cast<int>(rng() % static_cast<unsigned>(vertices));
            if (a != b)
                edges.push_back({std::min(a, b), std::max(a, b)});
        }
        if (vertices >= 3)
        {
            int t = nt(rng);
            for (int i = 0; i < t; ++i)
            {
                std::set<int> pick;
                while (pick.size() < 3)
                    pick.insert(static_cast<int>(rng() % static_cast<unsigned>(vertices)));
                tris.push_back(std::vector<int>(pick.begin(), pick.end()));
            }
        }
        auto K = from_simplices(vertices, edges, tris);
        CHECK(connected_components(K) == betti_z2(K)[0]);
    }
}
