#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "sobograd/io.hpp"

namespace fs = std::filesystem;
using namespace sobograd;

namespace {

const std::string kCli = SOBOGRAD_CLI_PATH;

fs::path work_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "sobograd_cli_test";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

int run(const std::string& args) {
    const std::string cmd = kCli + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("ground run converges, writes artifacts, and reruns byte-identically") {
    const fs::path out = work_dir() / "ground_a";
    REQUIRE(run("ground --case a --method fes --grid 32 --tol 1e-5 --out " + out.string()) ==
            0);
    CHECK(fs::exists(out / "trace.csv"));
    CHECK(fs::exists(out / "final.sgf"));
    CHECK(fs::exists(out / "report.json"));

    // Steepest-descent energies are non-increasing.
    std::ifstream trace(out / "trace.csv");
    std::string line;
    std::getline(trace, line);
    CHECK(line == "iter,energy,residual,norm,mu,wall_ms");
    double prev = std::numeric_limits<double>::infinity();
    while (std::getline(trace, line)) {
        const auto c1 = line.find(','), c2 = line.find(',', c1 + 1);
        const double energy = std::stod(line.substr(c1 + 1, c2 - c1 - 1));
        CHECK(energy <= prev + 1e-12);
        prev = energy;
    }

    const auto state = read_snapshot((out / "final.sgf").string());
    REQUIRE(state.size() == 1);
    CHECK(state.front().grid->dim(0) == 32);

    // report.json holds the fully resolved config; rerunning from it
    // reproduces the trace byte for byte.
    const fs::path out2 = work_dir() / "ground_a_rerun";
    REQUIRE(run("ground --config " + (out / "report.json").string() + " --out " +
                out2.string()) == 0);
    CHECK(slurp(out / "trace.csv") == slurp(out2 / "trace.csv"));
}

TEST_CASE("free-energy methods without lambda or a named case are a usage error") {
    CHECK(run("ground --method fes --grid 32 --out " + (work_dir() / "x").string()) == 1);
}

TEST_CASE("unknown config keys are rejected") {
    const fs::path cfg = work_dir() / "bad.ini";
    std::ofstream(cfg) << "[problem]\nbogus_key = 1\n";
    CHECK(run("ground --case a --method fes --grid 16 --config " + cfg.string() + " --out " +
              (work_dir() / "y").string()) == 1);
}

TEST_CASE("excited run reaches the error-functional target and reports norms") {
    const fs::path out = work_dir() / "excited_dipole";
    REQUIRE(run("excited --family dipole --mu-u 0.52 --mu-w 0.44 --grid 16 --tol 1e-9 "
                "--out " +
                out.string()) == 0);
    const auto report = nlohmann::json::parse(slurp(out / "report.json"));
    CHECK(report["converged"].get<bool>());
    CHECK(report["diagnostics"]["F"].get<double>() <= 1e-9);
    CHECK(report["diagnostics"]["N_u"].get<double>() > 10.0);
    CHECK(report["diagnostics"]["N_w"].get<double>() > 10.0);
    const auto state = read_snapshot((out / "final.sgf").string());
    CHECK(state.size() == 2);
}

TEST_CASE("excited run without preconditioning stalls and exits 2") {
    const fs::path out = work_dir() / "excited_raw";
    CHECK(run("excited --family dipole --mu-u 0.52 --mu-w 0.44 --grid 16 --tol 1e-10 "
              "--raw-gradient --max-iter 300 --out " +
              out.string()) == 2);
}

TEST_CASE("refine requires at least two stages") {
    CHECK(run("refine --family vortex --grids 32 --out " + (work_dir() / "r1").string()) ==
          1);
}

TEST_CASE("refine writes per-stage outputs and a summary") {
    const fs::path out = work_dir() / "refine_dipole";
    REQUIRE(run("refine --family dipole --mu-u 0.52 --mu-w 0.44 --grids 16,32 --out " +
                out.string()) == 0);
    CHECK(fs::exists(out / "stage0" / "trace.csv"));
    CHECK(fs::exists(out / "stage1" / "final.sgf"));
    const auto summary = nlohmann::json::parse(slurp(out / "summary.json"));
    CHECK(summary["converged"].get<bool>());
    REQUIRE(summary["stages"].size() == 2);
    CHECK(summary["stages"][0]["n"].get<int>() == 16);
    CHECK(summary["stages"][1]["n"].get<int>() == 32);
    CHECK(summary["stages"][1]["converged"].get<bool>());
}

TEST_CASE("benchmark rejects unknown suites") {
    CHECK(run("benchmark --suite nope") == 1);
}

TEST_CASE("inspect round trip, csv export, and CRC rejection") {
    const fs::path snap = work_dir() / "state.sgf";
    auto grid = make_grid({16, 16}, {8.0, 8.0});
    ComplexField f(grid);
    for (std::size_t i = 0; i < f.samples.size(); ++i)
        f.samples[i] = Complex(0.1 * double(i % 7), 0.05 * double(i % 3));
    write_snapshot(snap.string(), {f});

    const fs::path stats = work_dir() / "stats.txt";
    REQUIRE(run("inspect --in " + snap.string() + " --format ascii-stats --out " +
                stats.string()) == 0);
    const std::string text = slurp(stats);
    CHECK(text.find("component 0: N = ") != std::string::npos);

    const fs::path csv = work_dir() / "state.csv";
    REQUIRE(run("inspect --in " + snap.string() + " --format csv --out " + csv.string()) ==
            0);
    std::ifstream in(csv);
    std::string header;
    std::getline(in, header);
    CHECK(header == "component,x,y,density,phase");

    // Flip one payload byte: the CRC check must reject the file.
    std::string bytes = slurp(snap);
    bytes[bytes.size() / 2] ^= 0x01;
    std::ofstream(snap, std::ios::binary).write(bytes.data(), bytes.size());
    CHECK(run("inspect --in " + snap.string() + " --format ascii-stats") == 1);
}
