#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "entx/delta_complex.hpp"

using namespace entx;

TEST_CASE("parse smallest circle complex")
{
    auto X = parse_complex("dim 1\nvertex 0\nsimplex 1 1 : 0 0\n");
    CHECK(X.dimension() == 1);
    CHECK(X.count(0) == 1);
    CHECK(X.count(1) == 1);
}

TEST_CASE("parse torus description")
{
    std::string txt =
        "dim 2\n"
        "vertex 0\n"
        "simplex 1 1 : 0 0\n"  // a
        "simplex 1 2 : 0 0\n"  // b
        "simplex 1 3 : 0 0\n"  // c
        "simplex 2 4 : 2 3 1\n"
        "simplex 2 5 : 1 3 2\n";
    auto X = parse_complex(txt);
    CHECK(X.count(0) == 1);
    CHECK(X.count(1) == 3);
    CHECK(X.count(2) == 2);
    CHECK(homology_rank(X, 1).betti == 2);
    CHECK(homology_rank(X, 2).betti == 1);
}

TEST_CASE("parse rejects dangling face reference")
{
    std::string txt = "dim 2\nvertex 0\nsimplex 1 1 : 0 0\nsimplex 2 2 : 1 1 9\n";
    CHECK_THROWS_WITH_AS(parse_complex(txt), doctest::Contains("face out of range"),
                         std::invalid_argument);
}

TEST_CASE("export round-trips")
{
    auto X = make_torus();
    auto Y = parse_complex(export_complex(X));
    CHECK(export_complex(Y) == export_complex(X));
}

TEST_CASE("boundary of a single 2-simplex")
{
    auto X = make_single_triangle();
    Chain c(2);
    c.set(X.simplices(2)[0].id, 1);
    Chain b = boundary(c, X);
    CHECK(b.support_size() == 3);
    CHECK(b.l1_norm() == Rat(3));
}

TEST_CASE("torus fundamental cycle has zero boundary")
{
    auto X = make_torus();
    auto rep = check_pseudomanifold(X);
    REQUIRE(rep.orientable);
    Chain b = boundary(*rep.fundamental_cycle, X);
    CHECK(b.is_zero());
}

TEST_CASE("pseudomanifold checks")
{
    SUBCASE("one-edge loop passes with multiplicity two at the vertex")
    {
        auto rep = check_pseudomanifold(make_circle());
        CHECK(rep.is_pseudomanifold);
        CHECK(rep.orientable);
    }
    SUBCASE("single triangle fails P2 on all three edges")
    {
        auto rep = check_pseudomanifold(make_single_triangle());
        CHECK_FALSE(rep.is_pseudomanifold);
        int p2 = 0;
        for (auto& [cond, id] : rep.failures)
            if (cond == "P2") ++p2;
        CHECK(p2 == 3);
    }
    SUBCASE("pillow is an orientable pseudomanifold with cycle (+1,-1)")
    {
        auto X = make_pillow();
        auto rep = check_pseudomanifold(X);
        CHECK(rep.is_pseudomanifold);
        CHECK(rep.orientable);
        REQUIRE(rep.fundamental_cycle.has_value());
        const auto& z = *rep.fundamental_cycle;
        int t0 = X.simplices(2)[0].id, t1 = X.simplices(2)[1].id;
        CHECK(z.coeff(t0) == -z.coeff(t1));
        CHECK(abs(z.coeff(t0)) == 1);
        CHECK(boundary(z, X).is_zero());
    }
}

TEST_CASE("homology ranks of stock complexes")
{
    CHECK(homology_rank(make_circle(), 1).betti == 1);
    CHECK(homology_rank(make_pillow(), 2).betti == 1);
    CHECK(homology_rank(make_projective_plane(), 2).betti == 0);
    CHECK(homology_rank(make_projective_plane(), 1).betti == 0);
    CHECK(homology_rank(make_genus2_surface(), 1).betti == 4);
    CHECK(homology_rank(make_genus2_surface(), 2).betti == 1);
}

TEST_CASE("orientation agrees with top homology rank")
{
    for (const DeltaComplex& X :
         {make_circle(), make_torus(), make_pillow(), make_projective_plane(),
          make_genus2_surface()}) {
        auto rep = check_pseudomanifold(X);
        if (!rep.is_pseudomanifold) continue;
        int top = homology_rank(X, X.dimension()).betti;
        CHECK(rep.orientable == (top == 1));
        CHECK(orientation_double_check(X) == rep.orientable);
    }
}

TEST_CASE("barycentric subdivision counts and homology")
{
    SUBCASE("single edge splits in two")
    {
        DeltaComplex X(1);
        int u = X.add_vertex();
        int v = X.add_vertex();
        X.add_simplex(1, {v, u});
        auto S = barycentric_subdivide(X);
        CHECK(S.count(1) == 2);
        CHECK(S.count(0) == 3);
    }
    SUBCASE("single 2-simplex gives 6 triangles")
    {
        auto S = barycentric_subdivide(make_single_triangle());
        CHECK(S.count(2) == 6);
        CHECK(S.count(0) == 7);
        CHECK(S.count(1) == 12);
    }
    SUBCASE("torus gives 12 triangles and keeps Betti numbers")
    {
        auto S = barycentric_subdivide(make_torus());
        CHECK(S.count(2) == 12);
        CHECK(homology_rank(S, 0).betti == 1);
        CHECK(homology_rank(S, 1).betti == 2);
        CHECK(homology_rank(S, 2).betti == 1);
    }
    SUBCASE("genus-2: factor (m+1)! and Betti preservation")
    {
        auto X = make_genus2_surface();
        auto S = barycentric_subdivide(X);
        CHECK(S.count(2) == 6 * X.count(2));
        CHECK(homology_rank(S, 1).betti == 4);
        CHECK(homology_rank(S, 2).betti == 1);
    }
}

TEST_CASE("wedge identifications")
{
    auto c1 = make_circle(), c2 = make_circle();
    int v1 = c1.simplices(0)[0].id, v2 = c2.simplices(0)[0].id;
    auto fig8 = wedge(c1, v1, c2, v2);
    CHECK(fig8.count(0) == 1);
    CHECK(fig8.count(1) == 2);

    auto w3 = wedge(fig8, fig8.simplices(0)[0].id, make_circle(), 0);
    CHECK(w3.count(0) == 1);
    CHECK(w3.count(1) == 3);

    auto t1 = make_torus(), t2 = make_torus();
    auto tt = wedge(t1, 0, t2, 0);
    CHECK(homology_rank(tt, 1).betti == 4);
    CHECK(tt.count(2) == t1.count(2) + t2.count(2));

    CHECK_THROWS_AS(wedge(c1, 999, c2, v2), std::invalid_argument);
}

TEST_CASE("boundary squared vanishes on random chains")
{
    std::mt19937 rng(12345);
    std::vector<DeltaComplex> pool;
    pool.push_back(make_torus());
    pool.push_back(make_pillow());
    pool.push_back(make_genus2_surface());
    pool.push_back(barycentric_subdivide(make_torus()));
    pool.push_back(make_projective_plane());

    std::uniform_int_distribution<int> coeff(-5, 5);
    int checked = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const auto& X = pool[trial % pool.size()];
        Chain c(2);
        for (const auto& s : X.simplices(2)) c.set(s.id, Rat(coeff(rng), 1 + trial % 3));
        Chain bb = boundary(boundary(c, X), X);
        CHECK(bb.is_zero());
        // Lemma-style bound: the boundary of a k-chain meets at most k+1
        // facets per simplex, so |del z|_1 <= (k+1) |z|_1.
        CHECK(boundary(c, X).l1_norm() <= Rat(3) * c.l1_norm());
        ++checked;
    }
    CHECK(checked == 1000);
}
