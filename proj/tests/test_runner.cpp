#include "tensorcalc/runner.hpp"

#include <catch2/catch.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace tensorcalc;
namespace fs = std::filesystem;

namespace {

fs::path make_temp_dir(const std::string& tag) {
    fs::path dir = fs::temp_directory_path() / ("tensorcalc_test_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("published table reproduction statistics", "[runner]") {
    const runner::Example21Result res = runner::run_example21();
    // The published table is reproducible only up to its own input rounding
    // and the identity-tensor gap on the (i,4,i,4) diagonals; these counts
    // pin that verified state.
    CHECK(res.matched_strict == 5);
    CHECK(res.matched_loose == 23);
    CHECK(res.errata.size() == 19);
    CHECK_FALSE(res.pass);
    CHECK(res.checks[0].pass); // dual computation routes agree
    CHECK(res.checks[1].pass); // f(x) = x sanity
    // exactly one entry carries the missing -6 flag in the sampled blocks
    int flagged = 0;
    for (const auto& e : res.errata) {
        if (e.find("misses the -6") != std::string::npos) ++flagged;
    }
    CHECK(flagged == 1);
}

TEST_CASE("reduction demonstration checks", "[runner]") {
    runner::RunConfig cfg;
    cfg.seed = 20240817ULL;

    SECTION("default ranks pass every check") {
        const runner::Example51Result res = runner::run_example51(cfg);
        CHECK(res.pass);
        CHECK(res.solve.cost.full_elements == 46656);
        CHECK(res.solve.cost.core_elements == 11664);
        CHECK(res.solve.cost.ratio == Approx(4.0));
        CHECK(res.solve.error_fro < 1e-6);
    }
    SECTION("full ranks are numerically exact") {
        cfg.ranks = {6, 6};
        const runner::Example51Result res = runner::run_example51(cfg);
        CHECK(res.solve.error_fro < 1e-12);
    }
    SECTION("starved ranks degrade the planted run") {
        const double err3 = runner::run_example51(cfg).solve.error_fro;
        cfg.ranks = {1, 1};
        const double err1 = runner::run_example51(cfg).solve.error_fro;
        CHECK(err1 > err3);
    }
}

TEST_CASE("solve command reproduces the first-order exponential", "[runner]") {
    const fs::path dir = make_temp_dir("solve");

    // dX/dt = -A0 X as a multi-time system with scalar time
    Xoshiro256 rng(317);
    const std::size_t p = 3;
    DenseTensor a0 = random_tensor(rng, {p, p});
    DenseTensor gen({1, p, 1, p, 1});
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t k = 0; k < p; ++k) gen(0, i, 0, k, 0) = -a0(i, k);
    DenseTensor x0({p, 1});
    for (std::size_t i = 0; i < p; ++i) x0(i, 0) = rng.uniform(-1.0, 1.0);

    save_tensor_json((dir / "gen.json").string(), gen);
    save_tensor_json((dir / "x0.json").string(), x0);
    save_tensor_json((dir / "dir.json").string(), DenseTensor({1}, {1.0}));
    json problem;
    problem["generator"] = "gen.json";
    problem["x0"] = "x0.json";
    problem["direction"] = "dir.json";
    problem["method"] = "exact";
    problem["step"] = 0.01;
    problem["steps"] = 100;
    save_json_file((dir / "problem.json").string(), problem);

    runner::RunConfig cfg;
    cfg.out_dir = dir.string();
    std::ostringstream sink;
    REQUIRE(runner::cmd_solve((dir / "problem.json").string(), cfg, sink) == 0);

    // last CSV row against exp(-A0) x0
    const DenseTensor expect = mat_mul(matrix_exp(-1.0 * a0), x0);
    std::istringstream csv(slurp(dir / "trajectory.csv"));
    std::string line, last;
    std::getline(csv, line);
    CHECK(line == "s,x11,x21,x31");
    while (std::getline(csv, line)) {
        if (!line.empty()) last = line;
    }
    std::vector<double> row;
    std::stringstream ls(last);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    REQUIRE(row.size() == 1 + p);
    CHECK(row[0] == Approx(1.0));
    for (std::size_t i = 0; i < p; ++i) CHECK(row[1 + i] == Approx(expect(i, 0)).margin(1e-10));

    fs::remove_all(dir);
}

TEST_CASE("reduce command emits orthonormal factors", "[runner]") {
    const fs::path dir = make_temp_dir("reduce");
    const ReductionDemo demo = make_reduction_demo(99);
    save_tensor_json((dir / "tensor.json").string(), demo.generator);

    runner::RunConfig cfg;
    cfg.out_dir = dir.string();
    std::ostringstream sink;
    REQUIRE(runner::cmd_reduce((dir / "tensor.json").string(), {5, 6}, {3, 3}, cfg, sink) == 0);

    const json report = load_json_file((dir / "reduce_report.json").string());
    CHECK(report["core_elements"].get<std::size_t>() == 11664);
    for (const auto& f : report["factors"]) {
        CHECK(f["orthonormality_defect"].get<double>() < 1e-10);
    }
    CHECK(report["reconstruction_error"].get<double>() < 1e-10);
    const DenseTensor core = load_tensor_json((dir / "core.json").string());
    CHECK(core.shape() == Shape{6, 6, 6, 6, 3, 3});

    fs::remove_all(dir);
}

TEST_CASE("reports are byte-identical under a fixed seed with stamping off", "[runner]") {
    const fs::path d1 = make_temp_dir("det1");
    const fs::path d2 = make_temp_dir("det2");
    std::ostringstream sink;
    for (const fs::path& d : {d1, d2}) {
        runner::RunConfig cfg;
        cfg.seed = 4242;
        cfg.stamp = false;
        cfg.out_dir = d.string();
        runner::cmd_example51(cfg, sink);
        runner::cmd_verify("thm3.2", cfg, sink);
    }
    CHECK(slurp(d1 / "example51_report.json") == slurp(d2 / "example51_report.json"));
    CHECK(slurp(d1 / "verify_report.json") == slurp(d2 / "verify_report.json"));
    CHECK(!slurp(d1 / "example51_report.json").empty());
    fs::remove_all(d1);
    fs::remove_all(d2);
}

TEST_CASE("problems accept inline tensors and binary references", "[runner]") {
    const fs::path dir = make_temp_dir("inline");
    const std::size_t p = 2;
    DenseTensor gen({1, p, 1, p, 1}); // decoupled scalar rates -1 and -2
    gen(0, 0, 0, 0, 0) = -1.0;
    gen(0, 1, 0, 1, 0) = -2.0;
    save_tensor_binary((dir / "gen.tnsr").string(), gen);

    json problem;
    problem["generator"] = "gen.tnsr";
    problem["x0"] = json::object({{"shape", {p, 1}}, {"data", {1.0, 1.0}}});
    problem["direction"] = json::object({{"shape", {1}}, {"data", {1.0}}});
    problem["method"] = "exact";
    problem["step"] = 0.1;
    problem["steps"] = 10;
    save_json_file((dir / "problem.json").string(), problem);

    runner::RunConfig cfg;
    cfg.out_dir = dir.string();
    std::ostringstream sink;
    REQUIRE(runner::cmd_solve((dir / "problem.json").string(), cfg, sink) == 0);

    // decoupled scalar modes: x1(1) = e^{-1}, x2(1) = e^{-2}
    std::istringstream csv(slurp(dir / "trajectory.csv"));
    std::string line, last;
    while (std::getline(csv, line)) {
        if (!line.empty()) last = line;
    }
    std::stringstream ls(last);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    CHECK(row[1] == Approx(std::exp(-1.0)).epsilon(1e-10));
    CHECK(row[2] == Approx(std::exp(-2.0)).epsilon(1e-10));
    fs::remove_all(dir);
}

TEST_CASE("pair certification verdicts", "[runner]") {
    const fs::path dir = make_temp_dir("pair");
    json pair;
    pair["A"] = json::object({{"shape", {2, 2}}, {"data", {0.0, 1.0, -1.0, -1.0}}});
    pair["P"] = json::object({{"shape", {2, 2}}, {"data", {1.5, 0.5, 0.5, 1.0}}});
    save_json_file((dir / "pair.json").string(), pair);
    std::ostringstream out;
    const json verdict = runner::certify_pair((dir / "pair.json").string(), out);
    CHECK(verdict["stable"].get<bool>());
    CHECK(out.str().find("STABLE") != std::string::npos);

    pair["P"] = json::object({{"shape", {2, 2}}, {"data", {1.0, 0.0, 0.0, -1.0}}});
    save_json_file((dir / "pair.json").string(), pair);
    std::ostringstream out2;
    const json verdict2 = runner::certify_pair((dir / "pair.json").string(), out2);
    CHECK_FALSE(verdict2["stable"].get<bool>());

    save_json_file((dir / "nopair.json").string(), json::object());
    CHECK_THROWS_WITH(runner::certify_pair((dir / "nopair.json").string(), out2),
                      Catch::Contains("$.A"));
    fs::remove_all(dir);
}

TEST_CASE("method names parse and reject", "[runner]") {
    CHECK(runner::method_from_string("euler") == Method::Euler);
    CHECK(runner::method_from_string("rk4") == Method::Rk4);
    CHECK(runner::method_from_string("exact") == Method::Exact);
    CHECK_THROWS_AS(runner::method_from_string("leapfrog"), std::runtime_error);
}

TEST_CASE("problem loading errors carry field paths", "[runner]") {
    const fs::path dir = make_temp_dir("problem_errors");
    runner::RunConfig cfg;

    json incomplete;
    incomplete["x0"] = json::object({{"shape", {1}}, {"data", {1.0}}});
    save_json_file((dir / "p.json").string(), incomplete);
    CHECK_THROWS_WITH(runner::load_problem((dir / "p.json").string(), cfg),
                      Catch::Contains("$.generator"));

    std::ofstream((dir / "broken.json")) << "{ not json";
    CHECK_THROWS_WITH(runner::load_problem((dir / "broken.json").string(), cfg),
                      Catch::Contains("parse error"));

    CHECK_THROWS_AS(verify::run_suite("nope", 1), verify::UnknownSuite);
    fs::remove_all(dir);
}
