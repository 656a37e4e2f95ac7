#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "entx/csv.hpp"
#include "entx/delta_complex.hpp"
#include "entx/metric_graph.hpp"

using namespace entx;
namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

fs::path work_dir()
{
    static fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "entx-cli-test";
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

RunResult run_cli(const std::string& args)
{
    fs::path out = work_dir() / "stdout.txt";
    fs::path err = work_dir() / "stderr.txt";
    std::string cmd = std::string(ENTX_CLI_PATH) + " " + args + " > " + out.string() + " 2> " +
                      err.string();
    int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

fs::path write_file(const std::string& name, const std::string& text)
{
    fs::path p = work_dir() / name;
    std::ofstream(p, std::ios::binary) << text;
    return p;
}

} // namespace

TEST_CASE("csv serialization rules")
{
    CsvTable t;
    t.header = {"a", "b"};
    t.rows.push_back({"1/3", "plain"});
    t.rows.push_back({"has,comma", "has\"quote"});
    std::string text = to_csv(t);
    CHECK(text == "a,b\n1/3,plain\n\"has,comma\",\"has\"\"quote\"\n");
    CHECK(csv_rational(Rat(1, 3)) == "1/3");
    CHECK(csv_real(0.5) == "0.5");
    CHECK(csv_real(1.0 / 3.0) == "0.333333333333");

    CsvTable empty;
    CHECK_THROWS_AS(to_csv(empty), std::invalid_argument);
    CsvTable ragged;
    ragged.header = {"a", "b"};
    ragged.rows.push_back({"only-one"});
    CHECK_THROWS_AS(to_csv(ragged), std::invalid_argument);
}

TEST_CASE("entropy subcommand")
{
    auto graph = write_file("fig8.graph", export_graph(make_figure8()));
    auto r = run_cli("entropy --graph " + graph.string());
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("1.09861228") != std::string::npos);

    CHECK(run_cli("entropy --graph /nonexistent.graph").exit_code == 1);
    CHECK(run_cli("nonsense-subcommand").exit_code == 1);
    CHECK(run_cli("").exit_code == 1); // a subcommand is required
}

TEST_CASE("l1norm subcommand")
{
    auto complex = write_file("torus.complex", export_complex(make_torus()));
    auto r = run_cli("l1norm --complex " + complex.string() + " --fundamental");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("l1 norm 2") != std::string::npos);

    auto integral =
        run_cli("l1norm --complex " + complex.string() + " --fundamental --ring integer");
    CHECK(integral.exit_code == 0);
    CHECK(integral.out.find("l1 norm 2") != std::string::npos);
    CHECK(integral.out.find("ilp") != std::string::npos);

    auto cycle = write_file("torus.cycle", "4 1\n5 -1\n");
    auto from_file = run_cli("l1norm --complex " + complex.string() + " --cycle " +
                             cycle.string());
    CHECK(from_file.exit_code == 0);
    CHECK(from_file.out.find("l1 norm 2") != std::string::npos);

    // exactly one cycle source must be given
    CHECK(run_cli("l1norm --complex " + complex.string()).exit_code == 1);
}

TEST_CASE("tomei subcommand writes the constants table")
{
    fs::path out = work_dir() / "tomei.csv";
    auto r = run_cli("tomei --m 1 --out " + out.string());
    CHECK(r.exit_code == 0);
    std::ifstream in(out);
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    CHECK(header == "m,v_m,ent,ent_lower,ent_upper,c_prime,c_factorial,c_subdivision");
    CHECK(row.find("1,1.41421356237,0") == 0);
}

TEST_CASE("systole subcommand")
{
    auto r = run_cli("systole --family sl2modp:3,5");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("k,sys,vol,ratio,fit_c") == 0);
    CHECK(r.out.find("24,3,48,16,") != std::string::npos);
    CHECK(r.out.find("120,") != std::string::npos);

    CHECK(run_cli("systole --family weird:3").exit_code == 1);
    CHECK(run_cli("systole --group free:3").exit_code == 1);
}

TEST_CASE("dumbbell subcommand")
{
    auto r = run_cli("dumbbell --factors z3,z3 --d 1");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("d,alpha,h_d,gap") == 0);
    CHECK(r.out.find("0.231049060186") != std::string::npos); // log 2 / 3

    CHECK(run_cli("dumbbell --factors z3").exit_code == 1);
    CHECK(run_cli("dumbbell --factors z3,unknown").exit_code == 1);
}

TEST_CASE("verify subcommand and determinism")
{
    CHECK(run_cli("verify l1").exit_code == 0);
    CHECK(run_cli("verify nosuch").exit_code == 1);

    fs::path a = work_dir() / "verify-a.csv";
    fs::path b = work_dir() / "verify-b.csv";
    CHECK(run_cli("verify all --seed 7 --out " + a.string()).exit_code == 0);
    CHECK(run_cli("verify all --seed 7 --out " + b.string()).exit_code == 0);
    auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    std::string ta = slurp(a);
    CHECK(!ta.empty());
    CHECK(ta == slurp(b));
    CHECK(ta.find("fail") == std::string::npos);
}
