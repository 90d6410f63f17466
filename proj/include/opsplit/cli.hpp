#pragma once

#include <filesystem>
#include <iosfwd>

#include "opsplit/problems.hpp"
#include "opsplit/run.hpp"

namespace opsplit {

/// Batch sweep description, mirrored by the JSON config file.
struct SweepConfig {
    std::vector<Method> methods;
    std::vector<std::string> problems;  // file paths or "builder:NAME:k=v,..."
    std::vector<double> gammas;         // empty: per-method default
    std::vector<double> betas;          // empty: default (FRDR only)
    long long max_iter = 10000;
    double tol = 1e-8;
    double blowup = 1e12;
    std::uint64_t seed = 1;
    std::string init = "zeros";  // or "ones"
    double je_alpha = 1.0;
    std::filesystem::path output_dir = "out";
};

/// Parse a config JSON document; throws ConfigError naming the offending key.
SweepConfig parse_sweep_config(const std::string& bytes);
SweepConfig load_sweep_config(const std::filesystem::path& path);

/// Materialize a problem from a file path or a builder spec of the form
///   builder:counterexample:gamma=1,mu=1,omega=0.1
///   builder:condition_i:dim=10,kappa=1,mu=1[,seed=N]
///   builder:condition_ii:m=3,base_dim=4,mu=1[,seed=N]
///   builder:random:dim=8,mu=1[,seed=N]
/// `fallback_seed` fills a missing seed argument.
ProblemInstance problem_from_spec(const std::string& spec, std::uint64_t fallback_seed);

/// Run the sweep: one trace CSV per (method, problem, gamma[, beta]) cell
/// plus summary.json in the output directory. Returns 0 when every run
/// completes (Diverged and MaxIter are results, not failures), nonzero on a
/// Failed run, config error, or I/O error. OPSPLIT_SEED overrides the config
/// seed.
int cmd_run(const std::filesystem::path& config_path, std::ostream& out, std::ostream& err);

/// Print the divergence-rate table: omega, predicted |lambda|^2, measured squared
/// growth ratio of a 200-iteration FDRF run (geometric mean over the last 100
/// iterations), and the absolute difference.
int cmd_counterexample(double gamma, double mu, const std::vector<double>& omegas,
                       std::ostream& out, std::ostream& err);

/// Run the invariant suite on one instance and print one PASS/FAIL line per
/// check; nonzero exit on any failure.
int cmd_validate(const std::string& spec, std::uint64_t seed, std::ostream& out, std::ostream& err);

}  // namespace opsplit
