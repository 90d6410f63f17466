#pragma once

#include <optional>
#include <string>
#include <vector>

#include "opsplit/operator_spec.hpp"

namespace opsplit {

/// Lipschitz constant mu of C and, when known, the cocoercivity constant
/// kappa of B.
struct LipschitzData {
    double mu = 1.0;
    std::optional<double> kappa;
};

/// A certified primal-dual solution pair: u in Ax and -u in (B+C)x.
struct SolutionPair {
    Point x;
    Point u;
};

/// An instance of the three-operator inclusion 0 in Ax + Bx + Cx.
///
/// Construct via make_problem() which checks the cross-field invariants
/// (dimensions agree, mu is a valid Lipschitz bound for C, any declared
/// solution passes the resolvent-identity check to 1e-8).
struct ProblemInstance {
    Eigen::Index dim = 0;
    OperatorSpec A = OperatorSpec::zero(1);
    OperatorSpec B = OperatorSpec::zero(1);
    OperatorSpec C = OperatorSpec::zero(1);
    LipschitzData lip;
    std::optional<SolutionPair> known_solution;
    std::vector<std::string> tags;

    bool has_tag(const std::string& t) const;
    /// First tag, or "untagged".
    std::string tag() const;
};

ProblemInstance make_problem(OperatorSpec A, OperatorSpec B, OperatorSpec C, LipschitzData lip,
                             std::optional<SolutionPair> known_solution = std::nullopt,
                             std::vector<std::string> tags = {});

/// A step size at which op's resolvent can be evaluated: the designated gamma
/// for ResolventOnly operators, otherwise the supplied preference.
double usable_resolvent_gamma(const OperatorSpec& op, double preferred);

/// Residual of the resolvent-identity characterization u in Ax, namely
/// || J_{gamma A}(x + gamma u) - x ||, at a usable gamma.
double selection_residual(const OperatorSpec& A, const Point& x, const Point& u);

/// Max of the two resolvent-identity residuals certifying (x, u) as a
/// primal-dual solution: u in Ax and -u in (B+C)x.
double solution_residual(const OperatorSpec& A, const OperatorSpec& B, const OperatorSpec& C,
                         const SolutionPair& s);

}  // namespace opsplit
