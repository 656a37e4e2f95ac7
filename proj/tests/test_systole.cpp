#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>
#include <limits>
#include <random>

#include "entx/systole.hpp"

using namespace entx;

namespace {

// brute-force check: shortest reduced word whose matrix image is the identity
int shortest_kernel_word(const MarkedGroup& g, int max_len)
{
    auto mul = [&](std::array<int, 4> x, std::array<int, 4> y) {
        int n = g.mod;
        return std::array<int, 4>{(x[0] * y[0] + x[1] * y[2]) % n, (x[0] * y[1] + x[1] * y[3]) % n,
                                  (x[2] * y[0] + x[3] * y[2]) % n, (x[2] * y[1] + x[3] * y[3]) % n};
    };
    auto inv = [&](std::array<int, 4> x) {
        int n = g.mod;
        return std::array<int, 4>{x[3], (n - x[1]) % n, (n - x[2]) % n, x[0]};
    };
    std::array<int, 4> identity = {1, 0, 0, 1};
    int best = max_len + 1;
    // words as sequences of signed letters, reduced
    std::vector<std::pair<std::vector<int>, std::array<int, 4>>> layer = {{{}, identity}};
    for (int len = 1; len <= max_len; ++len) {
        std::vector<std::pair<std::vector<int>, std::array<int, 4>>> next;
        for (const auto& [word, m] : layer) {
            for (int gen = 0; gen < g.rank; ++gen) {
                for (int sign : {+1, -1}) {
                    int letter = sign * (gen + 1);
                    if (!word.empty() && word.back() == -letter) continue;
                    auto img = sign > 0 ? g.matrix_images[gen] : inv(g.matrix_images[gen]);
                    auto nm = mul(m, img);
                    auto nw = word;
                    nw.push_back(letter);
                    if (nm == identity) best = std::min(best, len);
                    next.push_back({nw, nm});
                }
            }
        }
        if (best <= max_len) return best;
        layer = std::move(next);
    }
    return best;
}

MetricGraph random_graph(std::mt19937& rng, int vertices, int extra_edges)
{
    std::uniform_real_distribution<double> len(0.3, 2.0);
    std::uniform_int_distribution<int> pick(0, vertices - 1);
    MetricGraph g;
    g.num_vertices = vertices;
    int id = 0;
    for (int v = 1; v < vertices; ++v) {
        std::uniform_int_distribution<int> parent(0, v - 1);
        g.edges.push_back({"t" + std::to_string(id++), parent(rng), v, len(rng)});
    }
    for (int e = 0; e < extra_edges; ++e)
        g.edges.push_back({"x" + std::to_string(id++), pick(rng), pick(rng), len(rng)});
    return g;
}

} // namespace

TEST_CASE("coset graphs by orbit enumeration")
{
    MarkedGroup z2;
    z2.backend = MarkedGroup::Backend::Permutation;
    z2.rank = 2;
    z2.perm_images = {{1, 0}, {1, 0}}; // both generators to the flip
    CHECK(schreier_graph(z2, SubgroupSpec::kernel()).index == 2);

    CHECK(schreier_graph(make_sl2_mod(3), SubgroupSpec::kernel()).index == 24);
    CHECK(schreier_graph(make_sl2_mod(5), SubgroupSpec::kernel()).index == 120);

    CHECK(schreier_graph(make_sl2_mod(3), SubgroupSpec::whole_group()).index == 1);
    CHECK(schreier_graph(make_free_group(2), SubgroupSpec::kernel()).index == 1);
}

TEST_CASE("word-metric systoles of kernels")
{
    CHECK(cayley_systole(make_sl2_mod(3), SubgroupSpec::whole_group()) == 1);
    CHECK(cayley_systole(make_sl2_mod(3), SubgroupSpec::kernel()) == 3);
    CHECK(cayley_systole(make_sl2_mod(3), SubgroupSpec::kernel()) ==
          shortest_kernel_word(make_sl2_mod(3), 4));
    CHECK(cayley_systole(make_sl2_mod(5), SubgroupSpec::kernel()) ==
          shortest_kernel_word(make_sl2_mod(5), 6));
    CHECK(cayley_systole(make_abelianized_mod2(), SubgroupSpec::kernel()) == 2);
}

TEST_CASE("systole is invariant under coset relabeling")
{
    auto g = make_sl2_mod(3);
    auto s = schreier_graph(g, SubgroupSpec::kernel());
    std::mt19937 rng(7);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<int> sigma(s.index);
        std::iota(sigma.begin(), sigma.end(), 0);
        std::shuffle(sigma.begin(), sigma.end(), rng);
        std::vector<std::vector<int>> rows(g.rank, std::vector<int>(s.index));
        for (int c = 0; c < s.index; ++c)
            for (int gen = 0; gen < g.rank; ++gen) rows[gen][sigma[c]] = sigma[s.next[c][gen]];
        CHECK(cayley_systole(g, SubgroupSpec::cosets(rows)) == 3);
    }
}

TEST_CASE("deeper congruence kernels have larger systoles")
{
    int sys3 = cayley_systole(make_sl2_mod(3), SubgroupSpec::kernel());
    int sys9 = cayley_systole(make_sl2_mod(9), SubgroupSpec::kernel());
    CHECK(sys9 >= sys3);
}

TEST_CASE("essential loops in metric graphs")
{
    auto fig8 = make_figure8();
    CHECK(graph_systole_essential(fig8, CoverSpec::trivial()) == doctest::Approx(1.0));

    auto circle = make_circle_graph(1.5);
    CoverSpec z2;
    z2.kind = CoverSpec::Kind::FiniteQuotient;
    z2.degree = 2;
    z2.perms[circle.edges[0].name] = {1, 0};
    CHECK(graph_systole_essential(circle, z2) == doctest::Approx(1.5));

    CoverSpec kill_a;
    kill_a.kind = CoverSpec::Kind::FreeQuotient;
    kill_a.free_rank = 1;
    kill_a.words["a"] = {};
    kill_a.words["b"] = {1};
    CHECK(graph_systole_essential(fig8, kill_a) == doctest::Approx(1.0));

    CoverSpec kill_all;
    kill_all.kind = CoverSpec::Kind::FreeQuotient;
    kill_all.free_rank = 1;
    kill_all.words["a"] = {};
    kill_all.words["b"] = {};
    CHECK(graph_systole_essential(fig8, kill_all) ==
          std::numeric_limits<double>::infinity());
}

TEST_CASE("random graphs: girth below total length and equal to the free-cover answer")
{
    std::mt19937 rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        auto g = random_graph(rng, 3 + trial % 4, 2 + trial % 2);
        double sys = graph_systole_essential(g, CoverSpec::trivial());
        CHECK(sys <= g.total_length() + 1e-12);
        // shortest homotopically nontrivial loop, via one free generator per edge
        CoverSpec all_edges;
        all_edges.kind = CoverSpec::Kind::FreeQuotient;
        all_edges.free_rank = static_cast<int>(g.edges.size());
        int gen = 1;
        for (const auto& e : g.edges) all_edges.words[e.name] = {gen++};
        CHECK(graph_systole_essential(g, all_edges) == doctest::Approx(sys));
    }
}

TEST_CASE("congruence family scan")
{
    auto scan = sl2_family_scan({3, 5, 7, 11, 13});
    REQUIRE(scan.rows.size() == 5);
    CHECK(scan.rows[0].k == 24);
    CHECK(scan.rows[0].sys == 3);
    CHECK(scan.rows[4].k == 13 * (13 * 13 - 1));
    for (size_t i = 0; i < scan.rows.size(); ++i) {
        if (i) CHECK(scan.rows[i].sys >= scan.rows[i - 1].sys);
        CHECK(scan.rows[i].vol == doctest::Approx(2.0 * scan.rows[i].k));
        CHECK(scan.rows[i].ratio ==
              doctest::Approx(scan.rows[i].vol / scan.rows[i].sys));
    }
    CHECK(scan.fit_c > 0.0);

    // every ratio within a factor 3 of the best-fit C k / log k envelope
    double C = 0.0;
    for (const auto& r : scan.rows)
        C = std::max(C, r.ratio * std::log(static_cast<double>(r.k)) / r.k);
    for (const auto& r : scan.rows) {
        double envelope = C * r.k / std::log(static_cast<double>(r.k));
        CHECK(r.ratio >= envelope / 3.0);
        CHECK(r.ratio <= envelope * 3.0);
    }
}

TEST_CASE("tail estimator for stabilized growth")
{
    std::vector<std::pair<int, double>> samples;
    for (int k = 2; k <= 40; ++k)
        samples.push_back({k, k / std::pow(std::log(k), 2.0)});
    GrowthProfile h{false, 2};
    CHECK(stabilized_seminorm(samples, h) == doctest::Approx(1.0).epsilon(1e-12));

    std::vector<std::pair<int, double>> zero = {{2, 0}, {3, 0}, {4, 0}, {5, 0}};
    CHECK(stabilized_seminorm(zero, h) == 0.0);

    // homogeneity
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(0.1, 5.0);
    std::vector<std::pair<int, double>> rnd, scaled;
    double lambda = 2.75;
    for (int k = 2; k <= 12; ++k) {
        double v = u(rng);
        rnd.push_back({k, v});
        scaled.push_back({k, lambda * v});
    }
    CHECK(stabilized_seminorm(scaled, h) ==
          doctest::Approx(lambda * stabilized_seminorm(rnd, h)));

    CHECK_THROWS_AS(stabilized_seminorm({{2, 1.0}, {3, 1.0}}, h), std::invalid_argument);
    CHECK_THROWS_AS(stabilized_seminorm({{1, 1.0}, {2, 1.0}, {3, 1.0}, {4, 1.0}}, h),
                    std::invalid_argument);

    // the scan pipeline feeds a finite positive estimate
    auto scan = sl2_family_scan({3, 5, 7, 11, 13});
    std::vector<std::pair<int, double>> rho;
    for (const auto& r : scan.rows) rho.push_back({static_cast<int>(r.k), r.ratio});
    GrowthProfile klogk{false, 1};
    double est = stabilized_seminorm(rho, klogk);
    CHECK(est > 0.0);
    CHECK(std::isfinite(est));
}
