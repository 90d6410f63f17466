// Command-line front end: problem sweeps, the divergence-rate table, and the
// per-instance invariant suite. See README for the config format.

#include <CLI11.hpp>
#include <iostream>

#include "opsplit/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"opsplit: three-operator splitting methods and their certificates"};
    app.require_subcommand(1);

    std::string config_path;
    auto* run_cmd = app.add_subcommand("run", "run a method/problem sweep from a JSON config");
    run_cmd->add_option("--config", config_path, "path to the sweep config JSON")->required();

    double gamma = 1.0, mu = 1.0;
    std::vector<double> omegas;
    auto* ce_cmd = app.add_subcommand(
        "counterexample", "predicted vs measured FDRF divergence rates on the 2-d instance");
    ce_cmd->add_option("--gamma", gamma, "step size")->required();
    ce_cmd->add_option("--mu", mu, "Lipschitz constant of C")->required();
    ce_cmd->add_option("--omega", omegas, "rotation angles in (0, pi)")
        ->required()
        ->delimiter(',');

    std::string spec;
    std::uint64_t seed = 1;
    auto* val_cmd = app.add_subcommand("validate", "run the invariant suite on one instance");
    val_cmd->add_option("spec", spec, "problem JSON path or builder:NAME:k=v,... spec")->required();
    val_cmd->add_option("--seed", seed, "seed for the randomized checks");

    CLI11_PARSE(app, argc, argv);

    if (*run_cmd) return opsplit::cmd_run(config_path, std::cout, std::cerr);
    if (*ce_cmd) return opsplit::cmd_counterexample(gamma, mu, omegas, std::cout, std::cerr);
    if (*val_cmd) return opsplit::cmd_validate(spec, seed, std::cout, std::cerr);
    return 2;
}
