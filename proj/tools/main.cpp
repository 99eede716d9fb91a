// tensorcalc command-line interface: verification suites, the two published
// reproductions, and file-driven solve/reduce runs.

#include "tensorcalc/runner.hpp"

#include "CLI11.hpp"

#include <exception>
#include <iostream>
#include <string>
#include <vector>

namespace {

struct CliOptions {
    tensorcalc::runner::RunConfig cfg;
    std::string stamp = "on";
    std::string method = "euler";
    std::string suite = "all";
    std::string input;
    std::vector<std::size_t> modes;
    std::vector<std::size_t> ranks = {3, 3};
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"tensorcalc: dense tensor calculus, derivative identities and "
                 "tensor ODE reduction"};
    app.require_subcommand(1);
    app.fallthrough();

    CliOptions opt;
    app.add_option("--seed", opt.cfg.seed, "PRNG seed for all randomized checks");
    app.add_option("--out", opt.cfg.out_dir, "directory for report and data files");
    app.add_option("--stamp", opt.stamp, "on|off: include timestamps and wall times in reports")
        ->check(CLI::IsMember({"on", "off"}));

    std::string pair_path;
    CLI::App* verify = app.add_subcommand("verify", "run a named verification suite");
    verify->add_option("--suite", opt.suite, "suite name or 'all'");
    verify->add_option("--pair", pair_path,
                       "JSON file {\"A\":tensor,\"P\":tensor}: print its stability certificate");

    CLI::App* ex21 = app.add_subcommand(
        "example21", "reproduce the published 3x4x3x4 tensor polynomial table");
    (void)ex21;

    CLI::App* ex51 = app.add_subcommand(
        "example51", "run the planted 6-order model-reduction demonstration");
    ex51->add_option("--ranks", opt.ranks, "target ranks for the two trailing modes")
        ->expected(2)->delimiter(',');
    ex51->add_option("--step", opt.cfg.step, "integrator step size");
    ex51->add_option("--steps", opt.cfg.steps, "number of integrator steps");
    ex51->add_option("--method", opt.method, "euler|rk4|exact")
        ->check(CLI::IsMember({"euler", "rk4", "exact"}));

    CLI::App* solve = app.add_subcommand("solve", "integrate a problem JSON along its direction ray");
    solve->add_option("--input", opt.input, "problem JSON path")->required();
    solve->add_option("--step", opt.cfg.step, "integrator step size");
    solve->add_option("--steps", opt.cfg.steps, "number of integrator steps");
    solve->add_option("--method", opt.method, "euler|rk4|exact")
        ->check(CLI::IsMember({"euler", "rk4", "exact"}));

    CLI::App* reduce = app.add_subcommand("reduce", "partial Tucker decomposition of a tensor file");
    reduce->add_option("--input", opt.input, "tensor JSON (or .tnsr binary) path")->required();
    reduce->add_option("--modes", opt.modes, "1-based modes to reduce")->required()->delimiter(',');
    reduce->add_option("--ranks", opt.ranks, "target rank per mode")->required()->delimiter(',');

    CLI::App* rsolve = app.add_subcommand(
        "reduce-solve", "reduce a problem JSON and integrate both systems");
    rsolve->add_option("--input", opt.input, "problem JSON path")->required();
    rsolve->add_option("--ranks", opt.ranks, "target ranks for the two trailing modes")->expected(2)->delimiter(',');
    rsolve->add_option("--step", opt.cfg.step, "integrator step size");
    rsolve->add_option("--steps", opt.cfg.steps, "number of integrator steps");
    rsolve->add_option("--method", opt.method, "euler|rk4|exact")
        ->check(CLI::IsMember({"euler", "rk4", "exact"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    opt.cfg.stamp = (opt.stamp == "on");
    opt.cfg.ranks = opt.ranks;
    try {
        opt.cfg.method = tensorcalc::runner::method_from_string(opt.method);
        if (verify->parsed()) {
            return tensorcalc::runner::cmd_verify(opt.suite, opt.cfg, std::cout, pair_path);
        }
        if (ex21->parsed()) return tensorcalc::runner::cmd_example21(opt.cfg);
        if (ex51->parsed()) return tensorcalc::runner::cmd_example51(opt.cfg);
        if (solve->parsed()) return tensorcalc::runner::cmd_solve(opt.input, opt.cfg);
        if (reduce->parsed()) {
            return tensorcalc::runner::cmd_reduce(opt.input, opt.modes, opt.ranks, opt.cfg);
        }
        if (rsolve->parsed()) return tensorcalc::runner::cmd_reduce_solve(opt.input, opt.cfg);
    } catch (const tensorcalc::verify::UnknownSuite& e) {
        std::cerr << "error: " << e.what() << "\nknown suites:";
        for (const auto& n : tensorcalc::verify::suite_names()) std::cerr << " " << n;
        std::cerr << " all\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
