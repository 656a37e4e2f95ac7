#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <map>
#include <random>
#include <set>

#include "entx/permutahedron.hpp"

using namespace entx;

namespace {

long long fact(int n)
{
    long long f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

} // namespace

TEST_CASE("face counts and simplicity")
{
    for (int m = 1; m <= 4; ++m) {
        auto P = build_permutahedron(m);
        CHECK(static_cast<long long>(P.vertices.size()) == fact(m + 1));
        CHECK(static_cast<long long>(P.facet_masks.size()) == (1LL << (m + 1)) - 2);
        CHECK(P.simple);
        CHECK(P.f_vector[0] == fact(m + 1));
        CHECK(P.f_vector[m] == 1);
        if (m >= 1) CHECK(P.f_vector[m - 1] == static_cast<long long>(P.facet_masks.size()));
        // Euler relation of a convex polytope boundary complex
        long long alt = 0;
        for (int k = 0; k < m; ++k) alt += (k % 2 == 0 ? 1 : -1) * P.f_vector[k];
        CHECK(alt == 1 + ((m - 1) % 2 == 0 ? 1 : -1));
        // every facet of a simple m-polytope here has at least m vertices
        for (const auto& fv : P.facet_vertices) CHECK(static_cast<int>(fv.size()) >= m);
    }
}

TEST_CASE("vertex and body barycenters")
{
    auto P = build_permutahedron(2);
    // a vertex face reproduces its own coordinates
    FaceBlocks vblocks = {{1}, {0}, {2}}; // values 3,2,1 at positions 1,0,2
    auto x = P.face_barycenter(vblocks);
    CHECK(x[1] == doctest::Approx(3.0));
    CHECK(x[0] == doctest::Approx(2.0));
    CHECK(x[2] == doctest::Approx(1.0));
    // the whole polytope averages to the center of the hyperplane
    auto c = P.face_barycenter({{0, 1, 2}});
    for (double v : c) CHECK(v == doctest::Approx(2.0));
}

TEST_CASE("truncated-simplex model has the same labeled incidences")
{
    for (int m = 1; m <= 3; ++m) CHECK(truncation_equivalence(m));
    CHECK_THROWS_AS(truncation_equivalence(4), std::invalid_argument);
}

TEST_CASE("flag-simplex volumes match the closed form")
{
    CHECK(permutahedron_volume(1) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
    CHECK(permutahedron_volume(2) == doctest::Approx(3.0 * std::sqrt(3.0)).epsilon(1e-9));
    CHECK(permutahedron_volume(3) == doctest::Approx(32.0).epsilon(1e-9));
    CHECK(permutahedron_volume(4) ==
          doctest::Approx(std::pow(5.0, 3.0) * std::sqrt(5.0)).epsilon(1e-8));
}

TEST_CASE("quotient cell counts and Euler characteristics")
{
    std::vector<long long> expected_euler = {0, 0, -2, 0};
    for (int m = 1; m <= 3; ++m) {
        auto T = build_tomei(m);
        CHECK(T.num_cells == (1 << m));
        CHECK(T.gluing_involution_ok);
        CHECK(T.two_cells_per_facet_ok);
        for (int k = 0; k <= m; ++k)
            CHECK(T.cell_counts[k] == (1LL << k) * T.tile.f_vector[k]);
        CHECK(T.euler == expected_euler[m]);
    }
}

TEST_CASE("dual graph is regular of degree 2^{m+1} - 2")
{
    for (int m = 1; m <= 3; ++m) {
        auto T = build_tomei(m);
        std::map<int, int> degree;
        for (auto [a, b] : T.dual_edges) {
            CHECK(a != b);
            ++degree[a];
            ++degree[b];
        }
        CHECK(static_cast<int>(degree.size()) == (1 << m));
        for (auto [s, d] : degree) CHECK(d == (1 << (m + 1)) - 2);
    }
}

TEST_CASE("quotient skeleton")
{
    auto T1 = build_tomei(1);
    CHECK(T1.skeleton.num_vertices == 2);
    CHECK(T1.skeleton.edges.size() == 2);
    CHECK(T1.skeleton.total_length() == doctest::Approx(2.0 * std::sqrt(2.0)));

    auto T2 = build_tomei(2);
    CHECK(T2.skeleton.num_vertices == 6);
    CHECK(static_cast<long long>(T2.skeleton.edges.size()) == T2.cell_counts[1]);
    for (const auto& e : T2.skeleton.edges) CHECK(e.length == doctest::Approx(std::sqrt(2.0)));
    CHECK_NOTHROW(T2.skeleton.check());

    auto T3 = build_tomei(3);
    CHECK(T3.skeleton.num_vertices == 24);
    CHECK(static_cast<long long>(T3.skeleton.edges.size()) == T3.cell_counts[1]);
}

TEST_CASE("quotient volumes")
{
    CHECK(tomei_volume(1) == doctest::Approx(2.0 * std::sqrt(2.0)));
    CHECK(tomei_volume(2) == doctest::Approx(12.0 * std::sqrt(3.0)));
    CHECK(tomei_volume(3) == doctest::Approx(256.0));
}

TEST_CASE("skeleton entropy estimates")
{
    CHECK(tomei_entropy_estimate(1).value == doctest::Approx(0.0));

    auto est = tomei_entropy_estimate(2);
    CHECK(est.lower > 0.0);
    CHECK(est.value >= est.lower);
    CHECK(est.value <= est.upper);

    // doubling every length halves the entropy (same counts at doubled radii)
    auto T = build_tomei(2);
    OrbitCountOptions opts;
    opts.t_max = 60.0;
    auto half = entropy_orbit_count(scaled(T.skeleton, 2.0), CoverSpec::trivial(), opts);
    CHECK(half.value == doctest::Approx(est.value / 2.0).epsilon(0.05));
}

TEST_CASE("normalized constants are deterministic")
{
    auto r1 = constants_report(2);
    auto r2 = constants_report(2);
    CHECK(r1.v_m == r2.v_m);
    CHECK(r1.ent.value == r2.ent.value);
    CHECK(r1.c_prime == r2.c_prime);
    CHECK(r1.c_factorial == r2.c_factorial);
    CHECK(r1.c_subdivision == r2.c_subdivision);
    CHECK(r1.c_prime == doctest::Approx(r1.ent.value * r1.ent.value * 3.0 * std::sqrt(3.0)));
    CHECK(r1.c_factorial / r1.c_subdivision == doctest::Approx(1.0 / 27.0));
}

TEST_CASE("collapse map onto the simplex")
{
    auto P = build_permutahedron(2);
    const int m = 2;

    // body barycenter to simplex barycenter
    auto c = theta_map(P, {2.0, 2.0, 2.0});
    for (double v : c) CHECK(v == doctest::Approx(1.0 / 3.0).epsilon(1e-7));

    // a vertex goes to the unit vector of its top position
    for (const auto& vert : P.vertices) {
        std::vector<double> x(vert.begin(), vert.end());
        auto img = theta_map(P, x);
        for (int i = 0; i <= m; ++i) {
            double want = vert[i] == m + 1 ? 1.0 : 0.0;
            CHECK(img[i] == doctest::Approx(want).epsilon(1e-7));
        }
    }

    // a facet barycenter lands inside the face spanned by its positions
    for (size_t f = 0; f < P.facet_masks.size(); ++f) {
        unsigned w = P.facet_masks[f];
        std::vector<double> bary(m + 1, 0.0);
        for (int v : P.facet_vertices[f])
            for (int i = 0; i <= m; ++i)
                bary[i] += P.vertices[v][i] / static_cast<double>(P.facet_vertices[f].size());
        auto img = theta_map(P, bary);
        double off = 0.0;
        for (int i = 0; i <= m; ++i)
            if (!(w >> i & 1)) off += std::abs(img[i]);
        CHECK(off <= 1e-7);
    }

    // distinct interior points get distinct images
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    auto sample = [&]() {
        std::vector<double> x(m + 1, 0.0);
        double tot = 0.0;
        std::vector<double> wgt;
        for (size_t v = 0; v < P.vertices.size(); ++v) {
            wgt.push_back(u(rng));
            tot += wgt.back();
        }
        for (size_t v = 0; v < P.vertices.size(); ++v)
            for (int i = 0; i <= m; ++i) x[i] += wgt[v] / tot * P.vertices[v][i];
        return x;
    };
    for (int trial = 0; trial < 100; ++trial) {
        auto x = sample();
        auto y = sample();
        double dxy = 0.0, dimg = 0.0;
        auto ix = theta_map(P, x);
        auto iy = theta_map(P, y);
        for (int i = 0; i <= m; ++i) {
            dxy += std::abs(x[i] - y[i]);
            dimg += std::abs(ix[i] - iy[i]);
        }
        REQUIRE(dxy > 1e-6); // random points almost surely differ
        CHECK(dimg > 1e-9);
    }

    CHECK_THROWS_AS(theta_map(P, {4.0, 1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(theta_map(P, {1.0, 1.0, 1.0}), std::invalid_argument);
}
