#pragma once

#include <cstdint>

#include "opsplit/problem_instance.hpp"

namespace opsplit {

/// Outcome of one named invariant check.
struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Worst slack of the injectivity bound for Id - gamma C over random pairs:
///   ||(x - g Cx) - (y - g Cy)|| - (1 - g mu) ||x - y||.
/// Nonnegative (within 1e-10) for every mu-Lipschitz monotone C and
/// gamma in (0, 1/mu).
double injectivity_worst_slack(const OperatorSpec& C, double mu, double gamma, int n_pairs,
                           std::uint64_t seed);

/// Worst slack of the averagedness inequality for J_{gamma B} with B
/// kappa-cocoercive:
///   ||x-y||^2 - (1 + 2 kappa/gamma) ||(Id-J)x - (Id-J)y||^2 - ||Jx - Jy||^2.
double averagedness_worst_slack(const OperatorSpec& B, double kappa, double gamma, int n_pairs,
                           std::uint64_t seed);

/// Worst slack of ||x-y|| - ||J_{gamma A}x - J_{gamma A}y|| (resolvent
/// nonexpansiveness) over random pairs.
double nonexpansiveness_worst_slack(const OperatorSpec& A, double gamma, int n_pairs,
                                    std::uint64_t seed);

/// Worst violation of J_{gamma A}((Id + gamma A) x) = x over random x
/// (single-valued A only).
double resolvent_inverse_worst_error(const OperatorSpec& A, double gamma, int n_points,
                                     std::uint64_t seed);

/// Worst (most negative) monotonicity inner product <x - y, Fx - Fy> over
/// random pairs, normalized by ||x - y||^2 (forward-evaluable F only).
double monotonicity_worst(const OperatorSpec& F, int n_pairs, std::uint64_t seed);

/// Run the full invariant suite on one instance: structural operator
/// invariants, Lipschitz-bound tightness, monotonicity spot checks,
/// the forward-map injectivity bound on C, resolvent averagedness on B when
/// kappa is declared, resolvent
/// properties, the declared solution, and the fixed-point encoding through a
/// computed fixed point when T is affine.
std::vector<CheckResult> validate_instance(const ProblemInstance& p, std::uint64_t seed);

}  // namespace opsplit
