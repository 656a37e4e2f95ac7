// Command-line front end: entropy, dumbbell, l1norm, tomei, systole, verify.
// Exit codes: 0 success, 1 usage or input error, 2 invariant failure.
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "entx/csv.hpp"
#include "entx/delta_complex.hpp"
#include "entx/entropy.hpp"
#include "entx/free_product.hpp"
#include "entx/l1norm.hpp"
#include "entx/permutahedron.hpp"
#include "entx/systole.hpp"
#include "entx/verify.hpp"

namespace {

using namespace entx;

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_or_print(const CsvTable& table, const std::string& out)
{
    if (out.empty())
        std::cout << to_csv(table);
    else
        export_csv(table, out);
}

FactorModel named_factor(const std::string& name, uint64_t budget)
{
    if (name.rfind("z", 0) == 0 && name.size() > 1) {
        int n = std::stoi(name.substr(1));
        CoverSpec spec;
        spec.kind = CoverSpec::Kind::FiniteQuotient;
        spec.degree = n;
        std::vector<int> rot(n);
        for (int i = 0; i < n; ++i) rot[i] = (i + 1) % n;
        spec.perms["a"] = rot;
        return FactorModel::build(make_circle_graph(), spec, budget);
    }
    if (name == "fig8") return FactorModel::build(make_figure8(), CoverSpec::trivial(), budget);
    if (name == "theta") return FactorModel::build(make_theta(), CoverSpec::trivial(), budget);
    throw CLI::ValidationError("--factors", "unknown factor " + name + " (use zN, fig8, theta)");
}

int run(int argc, char** argv)
{
    CLI::App app{"volume entropy, l1 norms, and tiling constants for metric graphs"};
    app.require_subcommand(1);

    uint32_t seed = 1;
    uint64_t budget = 2'000'000;
    std::string out;
    app.add_option("--seed", seed, "seed for randomized checks");
    app.add_option("--budget", budget, "state budget for cover expansions")
        ->check(CLI::PositiveNumber);
    app.add_option("--out", out, "write CSV here instead of stdout");

    // entropy
    auto* entropy_cmd = app.add_subcommand("entropy", "volume entropy of a metric graph");
    std::string graph_path, cover_path;
    double t_max = 25.0;
    entropy_cmd->add_option("--graph", graph_path, "graph file")->required();
    entropy_cmd->add_option("--cover", cover_path, "cover spec file (default: universal cover)");
    entropy_cmd->add_option("--t-max", t_max, "orbit-count horizon");

    // dumbbell
    auto* dumbbell_cmd = app.add_subcommand("dumbbell", "entropy additivity across a bridge");
    std::string factors = "fig8,fig8";
    std::vector<double> d_list = {1.0, 2.0, 4.0, 8.0, 16.0};
    dumbbell_cmd->add_option("--factors", factors, "pair like z3,z3 or fig8,fig8");
    dumbbell_cmd->add_option("--d", d_list, "bridge half-lengths");

    // l1norm
    auto* l1_cmd = app.add_subcommand("l1norm", "minimal l1 norm of a cycle");
    std::string complex_path, cycle_path, ring = "rational";
    bool use_fundamental = false;
    l1_cmd->add_option("--complex", complex_path, "complex file")->required();
    l1_cmd->add_option("--cycle", cycle_path, "cycle file: lines `simplex-id coefficient`");
    l1_cmd->add_flag("--fundamental", use_fundamental, "use the fundamental cycle");
    l1_cmd->add_option("--ring", ring, "rational or integer")
        ->check(CLI::IsMember({"rational", "integer"}));

    // tomei
    auto* tomei_cmd = app.add_subcommand("tomei", "tiling constants report");
    int tomei_m = 2;
    double tomei_t_max = 30.0;
    tomei_cmd->add_option("--m", tomei_m, "dimension")->check(CLI::Range(1, 3));
    tomei_cmd->add_option("--t-max", tomei_t_max, "entropy horizon");

    // systole
    auto* systole_cmd = app.add_subcommand("systole", "systolic growth of subgroup families");
    std::string group = "free:2", family = "sl2modp:3,5,7,11,13";
    int sys_m = 1;
    systole_cmd->add_option("--group", group, "only free:2 is supported");
    systole_cmd->add_option("--family", family, "sl2modp:p1,p2,...");
    systole_cmd->add_option("--m", sys_m, "normalizing exponent");

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "run the invariant suites");
    std::string suite = "all";
    verify_cmd->add_option("suite", suite, "entropy|dumbbell|l1|tomei|systole|all");

    // let --seed/--budget/--out appear after the subcommand as well
    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*entropy_cmd) {
            MetricGraph g = parse_graph(read_file(graph_path));
            CoverSpec spec =
                cover_path.empty() ? CoverSpec::trivial() : parse_cover_spec(read_file(cover_path));
            EntropyEstimate est = entropy_relative(g, spec);
            CsvTable t;
            t.header = {"value", "lower", "upper", "method", "horizon"};
            t.rows.push_back({csv_real(est.value), csv_real(est.lower), csv_real(est.upper),
                              est.method == EntropyEstimate::Method::Perron ? "perron"
                                                                           : "orbit-count",
                              csv_real(est.horizon)});
            std::cout << "entropy " << csv_real(est.value) << " bracket ["
                      << csv_real(est.lower) << ", " << csv_real(est.upper) << "]\n";
            if (!out.empty()) export_csv(t, out);
            (void)t_max;
        } else if (*dumbbell_cmd) {
            auto comma = factors.find(',');
            if (comma == std::string::npos)
                throw CLI::ValidationError("--factors", "expected two comma-separated names");
            FactorModel f1 = named_factor(factors.substr(0, comma), budget);
            FactorModel f2 = named_factor(factors.substr(comma + 1), budget);
            auto rows = additivity_report(f1, f2, d_list);
            CsvTable t;
            t.header = {"d", "alpha", "h_d", "gap"};
            for (const auto& r : rows)
                t.rows.push_back(
                    {csv_real(r.d), csv_real(r.alpha), csv_real(r.h_d), csv_real(r.gap)});
            write_or_print(t, out);
        } else if (*l1_cmd) {
            DeltaComplex X = parse_complex(read_file(complex_path));
            NormProblem p;
            p.X = &X;
            p.ring = ring == "integer" ? Ring::Integers : Ring::Rationals;
            if (use_fundamental != cycle_path.empty())
                throw CLI::ValidationError("--cycle", "give exactly one of --cycle/--fundamental");
            if (use_fundamental) {
                auto rep = check_pseudomanifold(X);
                if (!rep.fundamental_cycle)
                    throw std::runtime_error("complex has no fundamental cycle");
                p.cycle = *rep.fundamental_cycle;
            } else {
                std::istringstream in(read_file(cycle_path));
                std::vector<std::pair<int, std::string>> entries;
                int id;
                std::string coeff;
                while (in >> id >> coeff) entries.push_back({id, coeff});
                if (entries.empty()) throw std::runtime_error("cycle file is empty");
                p.cycle = Chain(X.simplex_dim(entries.front().first));
                for (const auto& [sid, c] : entries) p.cycle.set(sid, parse_rational(c));
            }
            p.degree = p.cycle.degree();
            NormResult res = p.ring == Ring::Integers ? l1_ilp(p) : l1_lp(p);
            std::cout << "l1 norm " << csv_rational(res.value) << " (" << res.proof_tag << ")\n";
            CsvTable t;
            t.header = {"value", "proof", "minimizer-support"};
            t.rows.push_back({csv_rational(res.value), res.proof_tag,
                              std::to_string(res.minimizer.support_size())});
            if (!out.empty()) export_csv(t, out);
        } else if (*tomei_cmd) {
            ConstantReport r = constants_report(tomei_m, tomei_t_max);
            CsvTable t;
            t.header = {"m", "v_m", "ent", "ent_lower", "ent_upper",
                        "c_prime", "c_factorial", "c_subdivision"};
            t.rows.push_back({std::to_string(r.m), csv_real(r.v_m), csv_real(r.ent.value),
                              csv_real(r.ent.lower), csv_real(r.ent.upper), csv_real(r.c_prime),
                              csv_real(r.c_factorial), csv_real(r.c_subdivision)});
            write_or_print(t, out);
        } else if (*systole_cmd) {
            if (group != "free:2")
                throw CLI::ValidationError("--group", "only free:2 is supported");
            if (family.rfind("sl2modp:", 0) != 0)
                throw CLI::ValidationError("--family", "expected sl2modp:p1,p2,...");
            std::vector<int> primes;
            std::istringstream in(family.substr(8));
            for (std::string tok; std::getline(in, tok, ',');) primes.push_back(std::stoi(tok));
            SystoleScan scan = sl2_family_scan(primes, sys_m);
            CsvTable t;
            t.header = {"k", "sys", "vol", "ratio", "fit_c"};
            for (const auto& r : scan.rows)
                t.rows.push_back({std::to_string(r.k), std::to_string(r.sys), csv_real(r.vol),
                                  csv_real(r.ratio), csv_real(scan.fit_c)});
            write_or_print(t, out);
        } else if (*verify_cmd) {
            VerifyReport report = run_verify_suite(suite, seed);
            write_or_print(report.table(), out);
            if (!report.all_passed()) {
                std::cerr << "verify: invariant failure\n";
                return 2;
            }
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    return run(argc, argv);
}
