#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "sobograd/io.hpp"

using namespace sobograd;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("sobograd-test-" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

ComplexField random_field(const GridPtr& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    ComplexField f(g);
    for (auto& v : f.samples) v = Complex(gauss(rng), gauss(rng));
    return f;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("snapshot round trip is bit exact") {
    TempDir tmp;
    auto g = make_grid({8, 6}, {4.0, 3.0}, {-2.0, 0.5});
    std::vector<ComplexField> comps{random_field(g, 1), random_field(g, 2)};
    const std::string path = (tmp.path / "f.sgf").string();
    write_snapshot(path, comps);
    auto back = read_snapshot(path);
    REQUIRE(back.size() == 2);
    for (int c = 0; c < 2; ++c) {
        CHECK(back[c].grid->same_layout(*g));
        CHECK(back[c].grid->length(0) == 4.0);
        CHECK(back[c].grid->origin(1) == 0.5);
        for (std::size_t i = 0; i < comps[c].samples.size(); ++i)
            CHECK(back[c].samples[i] == comps[c].samples[i]);
    }
    // re-serialization is byte-identical
    const std::string path2 = (tmp.path / "g.sgf").string();
    write_snapshot(path2, back);
    CHECK(slurp(path) == slurp(path2));
}

TEST_CASE("snapshot corruption is detected") {
    TempDir tmp;
    auto g = make_grid({4, 4}, {2.0, 2.0});
    const std::string path = (tmp.path / "f.sgf").string();
    write_snapshot(path, {random_field(g, 3)});

    std::string bytes = slurp(path);
    // flip one payload byte
    std::string corrupted = bytes;
    corrupted[bytes.size() / 2] ^= 0x40;
    std::ofstream(tmp.path / "bad.sgf", std::ios::binary) << corrupted;
    CHECK_THROWS(read_snapshot((tmp.path / "bad.sgf").string()));

    // bad magic
    std::string badmagic = bytes;
    badmagic[0] = 'X';
    std::ofstream(tmp.path / "magic.sgf", std::ios::binary) << badmagic;
    CHECK_THROWS(read_snapshot((tmp.path / "magic.sgf").string()));

    // truncation
    std::ofstream(tmp.path / "trunc.sgf", std::ios::binary) << bytes.substr(0, bytes.size() - 7);
    CHECK_THROWS(read_snapshot((tmp.path / "trunc.sgf").string()));

    // trailing garbage
    std::ofstream(tmp.path / "extra.sgf", std::ios::binary) << (bytes + "zz");
    CHECK_THROWS(read_snapshot((tmp.path / "extra.sgf").string()));

    CHECK_THROWS(read_snapshot((tmp.path / "missing.sgf").string()));
}

TEST_CASE("RunConfig ini parsing, round trip, unknown keys") {
    const std::string text =
        "# leading comment\n"
        "[grid]\n"
        "n = 64\n"
        "length = 16.0\n"
        "\n"
        "[problem]\n"
        "case = b\n"
        "g = 100\n"
        "rotating = true\n"
        "; another comment\n"
        "[method]\n"
        "name = fes\n";
    RunConfig cfg = RunConfig::parse_ini(text);
    CHECK(cfg.get_long("grid", "n", 0) == 64);
    CHECK(cfg.get_double("grid", "length", 0.0) == 16.0);
    CHECK(cfg.get("problem", "case", "?") == "b");
    CHECK(cfg.get_double("problem", "g", 0.0) == 100.0);
    CHECK(cfg.get_bool("problem", "rotating", false));
    CHECK(cfg.get("method", "name", "?") == "fes");
    CHECK(cfg.get("method", "absent", "dflt") == "dflt");
    CHECK_FALSE(cfg.has("method", "absent"));
    // every key has been touched
    CHECK_NOTHROW(cfg.reject_unknown_keys());

    RunConfig again = RunConfig::parse_ini(cfg.to_ini());
    CHECK(again.sections() == cfg.sections());

    RunConfig untouched = RunConfig::parse_ini("[grid]\nmystery = 1\n");
    CHECK_THROWS(untouched.reject_unknown_keys());
}

TEST_CASE("RunConfig accepts the report.json shape") {
    TempDir tmp;
    RunConfig cfg;
    cfg.set_long("grid", "n", 32);
    cfg.set_double("grid", "length", 16.0);
    cfg.set("problem", "case", "a");
    cfg.set("method", "name", "fes");

    const std::string ini_path = (tmp.path / "run.ini").string();
    std::ofstream(ini_path) << cfg.to_ini();
    RunConfig from_ini = RunConfig::parse_file(ini_path);
    CHECK(from_ini.sections() == cfg.sections());

    ConvergenceReport rep;
    rep.converged = true;
    rep.iterations = 3;
    TraceRow row;
    row.iter = 0;
    row.energy = 1.5;
    row.residual = 0.25;
    row.norms = {1.0};
    row.mu = 0.75;
    rep.trace.push_back(row);
    const std::string json_path = (tmp.path / "report.json").string();
    write_report_json(json_path, rep, cfg);
    RunConfig from_json = RunConfig::parse_file(json_path);
    CHECK(from_json.sections() == cfg.sections());
}

TEST_CASE("trace csv format and determinism") {
    TempDir tmp;
    ConvergenceReport rep;
    for (int i = 0; i < 3; ++i) {
        TraceRow row;
        row.iter = i;
        row.energy = 10.0 / (i + 1);
        row.residual = 1.0 / (i + 1);
        row.norms = {1.0, 2.0};
        row.mu = 0.5;
        row.wall_ms = 7.0 * i;  // varies run to run in real life
        rep.trace.push_back(row);
    }
    const std::string p1 = (tmp.path / "a.csv").string();
    const std::string p2 = (tmp.path / "b.csv").string();
    write_trace_csv(p1, rep, true);
    rep.trace[1].wall_ms = 1234.0;
    write_trace_csv(p2, rep, true);
    CHECK(slurp(p1) == slurp(p2));  // deterministic mode masks wall clock

    std::ifstream in(p1);
    std::string header;
    std::getline(in, header);
    CHECK(header == "iter,energy,residual,norm,mu,wall_ms");
    std::string line;
    int rows = 0;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 3);
}
