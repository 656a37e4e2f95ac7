#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "entx/l1norm.hpp"
#include "entx/simplex_lp.hpp"

using namespace entx;

namespace {

Chain fundamental_cycle(const DeltaComplex& X)
{
    auto report = check_pseudomanifold(X);
    REQUIRE(report.fundamental_cycle.has_value());
    return *report.fundamental_cycle;
}

NormProblem problem(const DeltaComplex& X, const Chain& c, Ring ring = Ring::Rationals)
{
    NormProblem p;
    p.X = &X;
    p.degree = c.degree();
    p.cycle = c;
    p.ring = ring;
    return p;
}

// Copy of X2 appended to X1 with fresh ids.
DeltaComplex disjoint_union(const DeltaComplex& X1, const DeltaComplex& X2)
{
    int m = std::max(X1.dimension(), X2.dimension());
    DeltaComplex U(m);
    for (const DeltaComplex* X : {&X1, &X2}) {
        std::map<int, int> remap;
        for (int k = 0; k <= X->dimension(); ++k) {
            for (const auto& s : X->simplices(k)) {
                if (k == 0) {
                    remap[s.id] = U.add_vertex();
                } else {
                    std::vector<int> faces;
                    for (int f : s.faces) faces.push_back(remap.at(f));
                    remap[s.id] = U.add_simplex(k, faces);
                }
            }
        }
    }
    return U;
}

Chain integral_scale(Chain c)
{
    BigInt l = 1;
    for (const auto& [id, v] : c.entries()) l = boost::multiprecision::lcm(l, denominator(v));
    c *= Rat(l);
    return c;
}

} // namespace

TEST_CASE("exact simplex solver basics")
{
    SUBCASE("bounded optimum with dual")
    {
        // min -x1 - x2 s.t. x1 + x2 + s = 1
        LinearProgram lp(1, 3);
        lp.A.at(0, 0) = 1;
        lp.A.at(0, 1) = 1;
        lp.A.at(0, 2) = 1;
        lp.b[0] = 1;
        lp.c[0] = -1;
        lp.c[1] = -1;
        auto sol = solve_lp(lp);
        REQUIRE(sol.status == LPSolution::Status::Optimal);
        CHECK(sol.value == Rat(-1));
        CHECK(sol.x[0] + sol.x[1] == Rat(1));
        CHECK(sol.dual[0] == Rat(-1)); // b^T y = value
    }
    SUBCASE("unbounded")
    {
        LinearProgram lp(1, 2);
        lp.A.at(0, 0) = 1;
        lp.A.at(0, 1) = -1;
        lp.c[0] = -1;
        CHECK(solve_lp(lp).status == LPSolution::Status::Unbounded);
    }
    SUBCASE("infeasible")
    {
        LinearProgram lp(1, 1);
        lp.A.at(0, 0) = 0;
        lp.b[0] = 1;
        CHECK(solve_lp(lp).status == LPSolution::Status::Infeasible);
    }
}

TEST_CASE("norms of fundamental classes")
{
    auto circle = make_circle();
    Chain edge(1);
    edge.set(1, 1);
    CHECK(l1_lp(problem(circle, edge)).value == Rat(1));

    auto torus = make_torus();
    auto torus_res = l1_lp(problem(torus, fundamental_cycle(torus)));
    CHECK(torus_res.value == Rat(2));
    CHECK(dual_certificate_check(torus_res, problem(torus, fundamental_cycle(torus))));

    auto genus2 = make_genus2_surface();
    CHECK(l1_lp(problem(genus2, fundamental_cycle(genus2))).value == Rat(6));

    auto pillow = make_pillow();
    CHECK(l1_lp(problem(pillow, fundamental_cycle(pillow))).value == Rat(2));
}

TEST_CASE("degree-1 classes on the torus use the triangle boundaries")
{
    auto torus = make_torus();
    Chain a(1);
    a.set(1, 1); // one meridian loop
    auto res = l1_lp(problem(torus, a));
    CHECK(res.value == Rat(1));
    CHECK(dual_certificate_check(res, problem(torus, a)));

    // boundary of one triangle is a zero class
    Chain t(2);
    t.set(4, 1);
    Chain b = boundary(t, torus);
    auto zero = l1_lp(problem(torus, b));
    CHECK(zero.value == Rat(0));
    CHECK(zero.proof_tag == "zero-class");
    CHECK(zero.certificate.empty());
    CHECK(dual_certificate_check(zero, problem(torus, b)));
}

TEST_CASE("homogeneity and triangle inequality are exact")
{
    auto torus = make_torus();
    auto h1 = homology_rank(torus, 1);
    REQUIRE(h1.betti == 2);
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> coeff(-3, 3);
    for (int trial = 0; trial < 15; ++trial) {
        Chain c1(1), c2(1);
        for (const auto& bc : h1.cycle_basis) {
            Chain s1 = bc, s2 = bc;
            s1 *= Rat(coeff(rng));
            s2 *= Rat(coeff(rng), 2);
            c1 += s1;
            c2 += s2;
        }
        Rat v1 = l1_lp(problem(torus, c1)).value;
        Rat v2 = l1_lp(problem(torus, c2)).value;
        Chain sum = c1 + c2;
        CHECK(l1_lp(problem(torus, sum)).value <= v1 + v2);
        Chain scaled = c1;
        scaled *= Rat(7, 3);
        CHECK(l1_lp(problem(torus, scaled)).value == Rat(7, 3) * v1);
    }
}

TEST_CASE("integral minima")
{
    auto torus = make_torus();
    Chain fund = fundamental_cycle(torus);
    CHECK(l1_ilp(problem(torus, fund, Ring::Integers)).value == Rat(2));
    Chain triple = fund;
    triple *= Rat(3);
    CHECK(l1_ilp(problem(torus, triple, Ring::Integers)).value == Rat(6));

    auto pillow = make_pillow();
    CHECK(l1_ilp(problem(pillow, fundamental_cycle(pillow), Ring::Integers)).value == Rat(2));

    // relaxation never exceeds the integral value
    auto h1 = homology_rank(torus, 1);
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> coeff(-2, 2);
    for (int trial = 0; trial < 10; ++trial) {
        Chain c(1);
        for (const auto& bc : h1.cycle_basis) {
            Chain s = integral_scale(bc);
            s *= Rat(coeff(rng));
            c += s;
        }
        Rat lp = l1_lp(problem(torus, c)).value;
        Rat ilp = l1_ilp(problem(torus, c, Ring::Integers)).value;
        CHECK(lp <= ilp);
    }

    CHECK_THROWS_AS(l1_ilp(problem(torus, fund, Ring::Integers), 1), std::invalid_argument);
}

TEST_CASE("perturbed certificates fail the check")
{
    auto torus = make_torus();
    Chain fund = fundamental_cycle(torus);
    auto res = l1_lp(problem(torus, fund));
    REQUIRE(dual_certificate_check(res, problem(torus, fund)));
    auto bad = res;
    REQUIRE(!bad.certificate.empty());
    bad.certificate.begin()->second += Rat(1, 7);
    CHECK(!dual_certificate_check(bad, problem(torus, fund)));
    auto wrong_value = res;
    wrong_value.value += 1;
    CHECK(!dual_certificate_check(wrong_value, problem(torus, fund)));
}

TEST_CASE("top-simplex count of geometric cycles")
{
    CHECK(kappa_of_cycle(make_circle()) == 1);
    CHECK(kappa_of_cycle(make_torus()) == 2);
    CHECK(kappa_of_cycle(disjoint_union(make_torus(), make_pillow())) == 4);
    CHECK_THROWS_AS(kappa_of_cycle(make_single_triangle()), std::invalid_argument);
}

TEST_CASE("subdivision keeps fundamental-class norms within the top-count factor")
{
    for (auto make : {make_torus, make_pillow, make_genus2_surface}) {
        auto X = make();
        Rat v = l1_lp(problem(X, fundamental_cycle(X))).value;
        auto S = barycentric_subdivide(X);
        Rat vs = l1_lp(problem(S, fundamental_cycle(S))).value;
        CHECK(vs <= Rat(6) * v); // each triangle subdivides into 3! pieces
        CHECK(vs >= v);
    }
}

TEST_CASE("stable-ratio estimation")
{
    std::vector<std::pair<int, Rat>> flat;
    for (int n = 1; n <= 6; ++n) flat.push_back({n, Rat(1)});
    auto seq = fekete_estimate(flat);
    CHECK(seq.estimate == Rat(1, 6));
    CHECK(seq.subadditive_on_samples);

    std::vector<std::pair<int, Rat>> linear;
    for (int n = 1; n <= 5; ++n) linear.push_back({n, Rat(2 * n)});
    CHECK(fekete_estimate(linear).estimate == Rat(2));

    std::vector<std::pair<int, Rat>> bad = {{1, Rat(1)}, {2, Rat(5)}};
    CHECK_THROWS_AS(fekete_estimate(bad), std::invalid_argument);
}

TEST_CASE("rounding float chains back to rational cycles")
{
    auto torus = make_torus();
    SUBCASE("already rational input is unchanged")
    {
        std::map<int, double> c = {{4, 1.0}, {5, -1.0}};
        Chain z = rationalize_cycle(c, torus, 2, 1e-6);
        CHECK(z.coeff(4) == Rat(1));
        CHECK(z.coeff(5) == Rat(-1));
    }
    SUBCASE("float fundamental cycle snaps to integers")
    {
        std::map<int, double> c = {{4, 1.0000003}, {5, -0.9999997}};
        Chain z = rationalize_cycle(c, torus, 2, 1e-5);
        CHECK(z.coeff(4) == Rat(1));
        CHECK(z.coeff(5) == Rat(-1));
        CHECK(boundary(z, torus).is_zero());
    }
    SUBCASE("perturbed genus-2 cycle stays close in l1")
    {
        auto genus2 = make_genus2_surface();
        Chain fund = fundamental_cycle(genus2);
        double eps = 1e-4;
        std::mt19937 rng(3);
        std::uniform_real_distribution<double> noise(-eps, eps);
        std::map<int, double> c;
        for (const auto& [id, v] : fund.entries()) c[id] = to_double(v) + noise(rng);
        Chain z = rationalize_cycle(c, genus2, 2, eps);
        CHECK(boundary(z, genus2).is_zero());
        Chain diff = z + Rat(-1) * fund;
        CHECK(to_double(diff.l1_norm()) <= 4.0 * eps * (fund.support_size() + 1));
    }
    SUBCASE("a non-cycle is rejected")
    {
        std::map<int, double> c = {{4, 1.0}, {5, 0.5}};
        CHECK_THROWS_AS(rationalize_cycle(c, torus, 2, 1e-6), std::invalid_argument);
    }
}
