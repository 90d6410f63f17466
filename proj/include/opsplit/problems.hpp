#pragma once

#include <cstdint>
#include <filesystem>

#include "opsplit/problem_instance.hpp"

namespace opsplit {

/// Parameters of the FDRF divergence counterexample.
struct CounterexampleParams {
    double gamma = 1.0;
    double mu = 1.0;
    double omega = 0.1;  // in (0, pi)
};

/// The 2-d divergence instance: A given only through J_{gamma A} = 0,
/// B skew with off-diagonal cot(omega/2)/gamma, C skew with off-diagonal mu.
/// The unique zero of A + B + C is the origin, recorded as the solution.
ProblemInstance build_counterexample(const CounterexampleParams& p);

/// Instance for the cocoercive-B convergence regime: B is a quadratic
/// gradient with lambda_max(Q) = 1/kappa (exactly kappa-cocoercive), C is
/// skew scaled to Lipschitz constant mu, A is random monotone affine with the
/// offset shifted so a drawn point solves the inclusion.
ProblemInstance build_condition_i(Eigen::Index dim, double kappa, double mu, std::uint64_t seed);

/// Instance for the subspace regime on H^m: B = N_V for the consensus
/// subspace, C = P_V C1 P_V scaled to composite Lipschitz constant mu, A is
/// blockwise random monotone affine shifted to plant a consensus solution.
ProblemInstance build_condition_ii_consensus(int m, Eigen::Index base_dim, double mu,
                                             std::uint64_t seed);

/// Generic instance: A, B random monotone affine, C random skew scaled to mu,
/// solution planted by offset shift. No cocoercivity or subspace structure.
ProblemInstance build_random_general(Eigen::Index dim, double mu, std::uint64_t seed);

/// Serialize to the versioned JSON schema (see README); bit-exact round trip
/// on all coordinates.
std::string save(const ProblemInstance& p);
/// Parse; throws SchemaViolation naming the offending field path.
ProblemInstance load(const std::string& bytes);

void save_file(const std::filesystem::path& path, const ProblemInstance& p);
ProblemInstance load_file(const std::filesystem::path& path);

}  // namespace opsplit
