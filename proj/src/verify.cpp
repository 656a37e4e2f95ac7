#include "entx/verify.hpp"

#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

#include "entx/delta_complex.hpp"
#include "entx/entropy.hpp"
#include "entx/free_product.hpp"
#include "entx/l1norm.hpp"
#include "entx/permutahedron.hpp"
#include "entx/systole.hpp"

namespace entx {

bool VerifyReport::all_passed() const
{
    for (const auto& c : checks)
        if (!c.passed) return false;
    return true;
}

CsvTable VerifyReport::table() const
{
    CsvTable t;
    t.header = {"suite", "check", "status", "detail"};
    for (const auto& c : checks)
        t.rows.push_back({c.suite, c.name, c.passed ? "pass" : "fail", c.detail});
    return t;
}

namespace {

class Recorder {
public:
    Recorder(VerifyReport& report, std::string suite) : report_(report), suite_(std::move(suite)) {}

    void check(const std::string& name, bool ok, const std::string& detail = "")
    {
        report_.checks.push_back({suite_, name, ok, detail});
    }

    // guarded evaluation: an exception is a failure, not a crash
    template <typename F>
    void run(const std::string& name, F&& body)
    {
        try {
            body();
        } catch (const std::exception& e) {
            check(name + ": exception", false, e.what());
        }
    }

private:
    VerifyReport& report_;
    std::string suite_;
};

MetricGraph random_rank_graph(std::mt19937& rng)
{
    std::uniform_int_distribution<int> nv(1, 3);
    std::uniform_int_distribution<int> rank(2, 4);
    std::uniform_real_distribution<double> len(0.5, 2.0);
    int v = nv(rng);
    int r = rank(rng);
    MetricGraph g;
    g.num_vertices = v;
    int id = 0;
    std::uniform_int_distribution<int> pick(0, v - 1);
    for (int i = 1; i < v; ++i) {
        std::uniform_int_distribution<int> parent(0, i - 1);
        g.edges.push_back({"t" + std::to_string(id++), parent(rng), i, len(rng)});
    }
    for (int i = 0; i < r; ++i)
        g.edges.push_back({"x" + std::to_string(id++), pick(rng), pick(rng), len(rng)});
    return g;
}

FactorModel cyclic_factor(int n)
{
    CoverSpec spec;
    spec.kind = CoverSpec::Kind::FiniteQuotient;
    spec.degree = n;
    std::vector<int> rot(n);
    for (int i = 0; i < n; ++i) rot[i] = (i + 1) % n;
    spec.perms["a"] = rot;
    return FactorModel::build(make_circle_graph(), spec);
}

void entropy_suite(VerifyReport& report, uint32_t seed)
{
    Recorder rec(report, "entropy");
    rec.run("stock values", [&] {
        struct Row {
            const char* name;
            MetricGraph g;
            double want;
        };
        std::vector<Row> rows = {{"figure-8", make_figure8(), std::log(3.0)},
                                 {"theta", make_theta(), std::log(2.0)},
                                 {"wedge-3", make_wedge_of_circles(3), std::log(5.0)},
                                 {"circle", make_circle_graph(), 0.0}};
        for (auto& r : rows) {
            double got = entropy_perron(r.g).value;
            rec.check(std::string(r.name) + " exact", std::abs(got - r.want) <= 1e-9,
                      csv_real(got));
        }
    });
    rec.run("scaling law", [&] {
        MetricGraph g = make_figure8();
        double h = entropy_perron(g).value;
        double h2 = entropy_perron(scaled(g, 2.5)).value;
        rec.check("ent(lambda G) = ent(G)/lambda", std::abs(h2 - h / 2.5) <= 1e-9,
                  csv_real(h2 - h / 2.5));
        double om1 = h * g.total_length();
        double om2 = h2 * scaled(g, 2.5).total_length();
        rec.check("Omega scale invariant", std::abs(om1 - om2) <= 1e-9, csv_real(om1 - om2));
    });
    rec.run("covering law", [&] {
        MetricGraph g = make_figure8();
        MetricGraph c = cyclic_cover(g, "a", 3);
        rec.check("3-fold cover entropy equal",
                  std::abs(entropy_perron(c).value - entropy_perron(g).value) <= 1e-9,
                  csv_real(entropy_perron(c).value));
        rec.check("3-fold cover length tripled",
                  std::abs(c.total_length() - 3.0 * g.total_length()) <= 1e-12,
                  csv_real(c.total_length()));
    });
    rec.run("orbit-count brackets", [&] {
        std::mt19937 rng(seed);
        int contained = 0;
        const int trials = 8;
        for (int i = 0; i < trials; ++i) {
            MetricGraph g = random_rank_graph(rng);
            double h = entropy_perron(g).value;
            EntropyEstimate est = entropy_orbit_count(g, CoverSpec::trivial());
            if (est.lower <= h && h <= est.upper) ++contained;
        }
        rec.check("bracket contains Perron value", contained == trials,
                  std::to_string(contained) + "/" + std::to_string(trials));
    });
}

void dumbbell_suite(VerifyReport& report, uint32_t)
{
    Recorder rec(report, "dumbbell");
    rec.run("cyclic-cyclic closed form", [&] {
        FactorModel z3 = cyclic_factor(3);
        for (double d : {1.0, 2.0, 4.0}) {
            double h = dumbbell_entropy_exact(make_dumbbell(z3, z3, d));
            double want = std::log(2.0) / (1.0 + 2.0 * d);
            rec.check("closed form d=" + csv_real(d), std::abs(h - want) <= 1e-9, csv_real(h));
        }
    });
    rec.run("balanced sandwich", [&] {
        CoverSpec trivial;
        FactorModel fig8 = FactorModel::build(make_figure8(), trivial);
        std::vector<double> ds = {1.0, 2.0, 4.0, 16.0};
        auto rows = additivity_report(fig8, fig8, ds);
        double prev = 1e300;
        bool above = true, decreasing = true, gaps_ok = true;
        for (const auto& r : rows) {
            above = above && r.h_d >= r.alpha - 1e-9;
            decreasing = decreasing && r.h_d <= prev + 1e-12;
            gaps_ok = gaps_ok && r.gap >= -1e-9;
            prev = r.h_d;
        }
        rec.check("h(d) >= alpha", above, "");
        rec.check("h(d) non-increasing", decreasing, "");
        rec.check("gaps nonnegative", gaps_ok, "");
        rec.check("h(16) within 10% of alpha",
                  rows.back().h_d - rows.back().alpha < 0.1 * rows.back().alpha,
                  csv_real(rows.back().h_d - rows.back().alpha));
    });
    rec.run("ball counts below the analytic bound", [&] {
        FactorModel z3 = cyclic_factor(3);
        DumbbellModel model = make_dumbbell(z3, z3, 1.0);
        bool ok = true;
        for (double t : {2.5, 3.5, 4.5, 6.0}) {
            double count = static_cast<double>(exact_ball_count(model, t));
            double bound = analytic_ball_bound(model, t, 0.3, 3.0, 1.0);
            ok = ok && count <= bound;
        }
        rec.check("count <= bound", ok, "");
    });
}

void l1_suite(VerifyReport& report, uint32_t seed)
{
    Recorder rec(report, "l1");
    auto fundamental = [](const DeltaComplex& X) {
        auto r = check_pseudomanifold(X);
        if (!r.fundamental_cycle) throw std::runtime_error("no fundamental cycle");
        return *r.fundamental_cycle;
    };
    auto norm_problem = [](const DeltaComplex& X, const Chain& c) {
        NormProblem p;
        p.X = &X;
        p.degree = c.degree();
        p.cycle = c;
        return p;
    };
    rec.run("fundamental norms", [&] {
        auto torus = make_torus();
        auto tres = l1_lp(norm_problem(torus, fundamental(torus)));
        rec.check("torus value 2", tres.value == Rat(2), csv_rational(tres.value));
        rec.check("torus dual certificate",
                  dual_certificate_check(tres, norm_problem(torus, fundamental(torus))), "");
        auto genus2 = make_genus2_surface();
        rec.check("genus-2 value 6",
                  l1_lp(norm_problem(genus2, fundamental(genus2))).value == Rat(6), "");
        auto pillow = make_pillow();
        rec.check("pillow value 2",
                  l1_lp(norm_problem(pillow, fundamental(pillow))).value == Rat(2), "");
        NormProblem ip = norm_problem(torus, fundamental(torus));
        ip.ring = Ring::Integers;
        rec.check("torus integral value 2", l1_ilp(ip).value == Rat(2), "");
    });
    rec.run("corrupted dual rejected", [&] {
        auto torus = make_torus();
        auto res = l1_lp(norm_problem(torus, fundamental(torus)));
        auto bad = res;
        if (bad.certificate.empty()) throw std::runtime_error("missing certificate");
        bad.certificate.begin()->second += Rat(1, 7);
        rec.check("checker flags the corruption",
                  !dual_certificate_check(bad, norm_problem(torus, fundamental(torus))), "");
    });
    rec.run("boundary norm bound", [&] {
        auto torus = make_torus();
        auto genus2 = make_genus2_surface();
        std::mt19937 rng(seed + 1);
        std::uniform_int_distribution<int> num(-6, 6);
        bool ok = true;
        for (int trial = 0; trial < 1000; ++trial) {
            const DeltaComplex& X = trial % 2 ? torus : genus2;
            Chain z(2);
            for (const auto& s : X.simplices(2)) z.set(s.id, Rat(num(rng), 1 + trial % 3));
            ok = ok && boundary(z, X).l1_norm() <= Rat(3) * z.l1_norm();
        }
        rec.check("norm of the boundary <= (m+2) norm", ok, "");
    });
    rec.run("homogeneity and triangle inequality", [&] {
        auto torus = make_torus();
        auto h1 = homology_rank(torus, 1);
        std::mt19937 rng(seed + 2);
        std::uniform_int_distribution<int> coeff(-3, 3);
        bool ok = true;
        for (int trial = 0; trial < 10; ++trial) {
            Chain c1(1), c2(1);
            for (const auto& b : h1.cycle_basis) {
                Chain s1 = b, s2 = b;
                s1 *= Rat(coeff(rng));
                s2 *= Rat(coeff(rng), 2);
                c1 += s1;
                c2 += s2;
            }
            Rat v1 = l1_lp(norm_problem(torus, c1)).value;
            Rat v2 = l1_lp(norm_problem(torus, c2)).value;
            ok = ok && l1_lp(norm_problem(torus, c1 + c2)).value <= v1 + v2;
            Chain sc = c1;
            sc *= Rat(5, 2);
            ok = ok && l1_lp(norm_problem(torus, sc)).value == Rat(5, 2) * v1;
        }
        rec.check("exact seminorm axioms", ok, "");
    });
    rec.run("top-simplex counts", [&] {
        rec.check("circle", kappa_of_cycle(make_circle()) == 1, "");
        rec.check("torus", kappa_of_cycle(make_torus()) == 2, "");
    });
}

void tomei_suite(VerifyReport& report, uint32_t)
{
    Recorder rec(report, "tomei");
    rec.run("face counts", [&] {
        bool ok = true;
        for (int m = 1; m <= 4; ++m) {
            auto P = build_permutahedron(m);
            long long fac = 1;
            for (int i = 2; i <= m + 1; ++i) fac *= i;
            ok = ok && static_cast<long long>(P.vertices.size()) == fac &&
                 static_cast<long long>(P.facet_masks.size()) == (1LL << (m + 1)) - 2 && P.simple;
        }
        rec.check("vertices, facets, simplicity for m=1..4", ok, "");
    });
    rec.run("volumes", [&] {
        rec.check("v1", std::abs(permutahedron_volume(1) - std::sqrt(2.0)) <= 1e-9, "");
        rec.check("v2", std::abs(permutahedron_volume(2) - 3.0 * std::sqrt(3.0)) <= 1e-9, "");
        rec.check("v3", std::abs(permutahedron_volume(3) - 32.0) <= 1e-9, "");
        rec.check("quotient volume m=2",
                  std::abs(tomei_volume(2) - 12.0 * std::sqrt(3.0)) <= 1e-9, "");
    });
    rec.run("quotient topology", [&] {
        std::vector<long long> want = {0, 0, -2, 0};
        for (int m = 1; m <= 3; ++m) {
            auto T = build_tomei(m);
            rec.check("Euler characteristic m=" + std::to_string(m), T.euler == want[m],
                      std::to_string(T.euler));
            std::map<int, int> deg;
            for (auto [a, b] : T.dual_edges) {
                ++deg[a];
                ++deg[b];
            }
            bool regular = static_cast<int>(deg.size()) == (1 << m);
            for (auto [s, d] : deg) regular = regular && d == (1 << (m + 1)) - 2;
            rec.check("dual graph regular m=" + std::to_string(m), regular, "");
            rec.check("gluing involution m=" + std::to_string(m),
                      T.gluing_involution_ok && T.two_cells_per_facet_ok, "");
        }
    });
    rec.run("constants pipeline", [&] {
        auto r1 = constants_report(2, 30.0);
        auto r2 = constants_report(2, 30.0);
        rec.check("deterministic",
                  r1.v_m == r2.v_m && r1.ent.value == r2.ent.value && r1.c_prime == r2.c_prime &&
                      r1.c_factorial == r2.c_factorial && r1.c_subdivision == r2.c_subdivision,
                  csv_real(r1.c_prime));
        rec.check("C'2 positive finite", r1.c_prime > 0 && std::isfinite(r1.c_prime),
                  csv_real(r1.c_prime));
        rec.check("factor ratio 1/27",
                  std::abs(r1.c_factorial / r1.c_subdivision - 1.0 / 27.0) <= 1e-15, "");
    });
}

void systole_suite(VerifyReport& report, uint32_t)
{
    Recorder rec(report, "systole");
    rec.run("congruence family", [&] {
        auto scan = sl2_family_scan({3, 5, 7, 11, 13});
        rec.check("first kernel systole 3", scan.rows.at(0).sys == 3,
                  std::to_string(scan.rows.at(0).sys));
        bool mono = true, vol_ok = true;
        for (size_t i = 0; i < scan.rows.size(); ++i) {
            if (i) mono = mono && scan.rows[i].sys >= scan.rows[i - 1].sys;
            vol_ok = vol_ok && scan.rows[i].vol == 2.0 * scan.rows[i].k;
        }
        rec.check("systole nondecreasing", mono, "");
        rec.check("volume is index x base volume", vol_ok, "");
        rec.check("log fit slope positive", scan.fit_c > 0, csv_real(scan.fit_c));
        double C = 0.0;
        for (const auto& r : scan.rows)
            C = std::max(C, r.ratio * std::log(static_cast<double>(r.k)) / r.k);
        bool envelope = true;
        for (const auto& r : scan.rows) {
            double e = C * r.k / std::log(static_cast<double>(r.k));
            envelope = envelope && r.ratio >= e / 3.0 && r.ratio <= e * 3.0;
        }
        rec.check("ratio within factor 3 of the envelope", envelope, csv_real(C));
    });
    rec.run("nested kernels", [&] {
        rec.check("mod 9 kernel systole >= mod 3",
                  cayley_systole(make_sl2_mod(9), SubgroupSpec::kernel()) >=
                      cayley_systole(make_sl2_mod(3), SubgroupSpec::kernel()),
                  "");
    });
    rec.run("tail estimator", [&] {
        std::vector<std::pair<int, double>> samples;
        for (int k = 2; k <= 40; ++k) samples.push_back({k, k / std::pow(std::log(k), 2.0)});
        double est = stabilized_seminorm(samples, GrowthProfile{false, 2});
        rec.check("exact profile gives 1", std::abs(est - 1.0) <= 1e-12, csv_real(est));
    });
    rec.run("stabilizing top counts", [&] {
        std::vector<std::pair<int, Rat>> flat;
        for (int n = 1; n <= 6; ++n) flat.push_back({n, Rat(1)});
        auto seq = fekete_estimate(flat);
        rec.check("constant sequence stabilizes to min sample",
                  seq.estimate == Rat(1, 6) && seq.subadditive_on_samples, "");
    });
}

} // namespace

VerifyReport run_verify_suite(const std::string& name, uint32_t seed)
{
    VerifyReport report;
    bool all = name == "all";
    bool known = all;
    if (all || name == "entropy") entropy_suite(report, seed), known = true;
    if (all || name == "dumbbell") dumbbell_suite(report, seed), known = true;
    if (all || name == "l1") l1_suite(report, seed), known = true;
    if (all || name == "tomei") tomei_suite(report, seed), known = true;
    if (all || name == "systole") systole_suite(report, seed), known = true;
    if (!known) throw std::invalid_argument("verify: unknown suite " + name);
    return report;
}

} // namespace entx
