#include "cq/cli.hpp"

#include "common.hpp"

#include <cstdio>
#include <doctest.h>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

using namespace cq;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("cq-test-" + std::to_string(std::rand()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

fs::path write_file(const TempDir& dir, const std::string& name, const std::string& text) {
    fs::path p = dir.path / name;
    std::ofstream(p) << text;
    return p;
}

std::string slurp(const fs::path& p) {
    std::ostringstream out;
    out << std::ifstream(p).rdbuf();
    return out.str();
}

}  // namespace

TEST_CASE("load_config reads every field and keeps defaults elsewhere") {
    TempDir dir;
    fs::path p = write_file(dir, "config.json", R"({
        "dim": 3,
        "operator": {"name": "proj_ball", "params": {"r": 2.0}},
        "scheme": "CqMann",
        "mode": "MonotoneCQ",
        "schedules": {"alpha": "const:0.5"},
        "x0": [1.0, 2.0, 3.0],
        "tol": 1e-6,
        "max_iter": 500,
        "seed": 11,
        "cn_star": "ball:4"
    })");
    RunConfig c = load_config(p.string());
    CHECK(c.dim == 3);
    CHECK(c.op == "proj_ball");
    CHECK(c.op_params.at("r") == 2.0);
    CHECK(c.mode == "MonotoneCQ");
    CHECK(c.alpha == "const:0.5");
    REQUIRE(c.x0.has_value());
    CHECK(c.x0->size() == 3);
    CHECK(c.tol == 1e-6);
    CHECK(c.max_iter == 500);
    REQUIRE(c.seed.has_value());
    CHECK(*c.seed == 11);
    CHECK(c.cn_star == "ball:4");
    CHECK(c.beta.empty());
    CHECK(c.x0_radius == 3.0);
}

TEST_CASE("load_config rejects missing files and malformed JSON") {
    TempDir dir;
    CHECK_THROWS_AS(load_config((dir.path / "absent.json").string()), ConfigError);
    fs::path bad = write_file(dir, "bad.json", "{not json");
    CHECK_THROWS_AS(load_config(bad.string()), ConfigError);
}

TEST_CASE("cmd_run writes the run artifacts and exits 0 on convergence") {
    TempDir dir;
    RunConfig c;
    c.op = "reflection";
    c.x0 = {2.0, 3.0};
    c.out_dir = dir.path.string();
    std::ostringstream log;
    CHECK(cmd_run(c, log) == kExitConverged);

    std::string csv = slurp(dir.path / "run.csv");
    CHECK(csv.rfind("# cq-run-csv v1", 0) == 0);

    auto summary = nlohmann::json::parse(slurp(dir.path / "summary.json"));
    CHECK(summary.at("terminal") == "Converged");
    std::vector<double> limit = summary.at("limit");
    REQUIRE(limit.size() == 2);
    CHECK(limit[0] == doctest::Approx(2.0));
    CHECK(limit[1] == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("cmd_run maps terminals and bad configs to exit codes") {
    TempDir dir;
    RunConfig c;
    c.op = "rotation";
    c.op_params = {{"theta", 1.0}};
    c.x0 = {2.0, 1.0};
    c.tol = 1e-12;
    c.max_iter = 3;
    c.out_dir = dir.path.string();
    std::ostringstream log;
    CHECK(cmd_run(c, log) == kExitMaxIterations);

    // Config problems surface as ConfigError; main maps them to exit code 1.
    RunConfig bad;
    bad.dim = 0;
    bad.x0 = {1.0, 2.0};
    CHECK_THROWS_AS(cmd_run(bad, log), ConfigError);

    RunConfig mismatch;
    mismatch.op = "scale";
    mismatch.op_params = {{"a", -2.0}};
    mismatch.scheme = "CqMann";  // nonexpansive scheme on a strict pc operator
    mismatch.x0 = {1.0, 1.0};
    CHECK_THROWS(cmd_run(mismatch, log));
}

TEST_CASE("a seeded random start is reproducible") {
    TempDir a, b;
    RunConfig c;
    c.op = "reflection";
    c.seed = 21;
    std::ostringstream log;
    c.out_dir = a.path.string();
    REQUIRE(cmd_run(c, log) == kExitConverged);
    c.out_dir = b.path.string();
    REQUIRE(cmd_run(c, log) == kExitConverged);
    CHECK(slurp(a.path / "run.csv") == slurp(b.path / "run.csv"));

    RunConfig unseeded;
    unseeded.op = "reflection";
    unseeded.out_dir = a.path.string();
    CHECK_THROWS_AS(cmd_run(unseeded, log), ConfigError);  // random x0 needs a seed
}

TEST_CASE("cmd_verify runs the suites and rejects unknown names") {
    std::ostringstream log;
    CHECK(cmd_verify("operators", 7, 0.0, log) == 0);
    CHECK(log.str().find("PASS") != std::string::npos);
    CHECK(cmd_verify("lemmas", 7, -1.0, log) == kExitVerifyFailed);
    CHECK_THROWS_AS(cmd_verify("nonsense", 7, 0.0, log), ConfigError);
}

TEST_CASE("cmd_compare writes compare.csv and agrees across modes") {
    TempDir dir;
    RunConfig c;
    c.op = "reflection";
    c.x0 = {1.5, -2.5};
    c.out_dir = dir.path.string();
    std::ostringstream log;
    CHECK(cmd_compare(c, log) == 0);
    CHECK(slurp(dir.path / "compare.csv").rfind("# cq-compare-csv v1", 0) == 0);
}
