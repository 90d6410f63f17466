#include "opsplit/problem_instance.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace opsplit {

bool ProblemInstance::has_tag(const std::string& t) const {
    return std::find(tags.begin(), tags.end(), t) != tags.end();
}

std::string ProblemInstance::tag() const { return tags.empty() ? "untagged" : tags.front(); }

double usable_resolvent_gamma(const OperatorSpec& op, double preferred) {
    if (op.kind() == OperatorSpec::Kind::ResolventOnly && !op.resolvent_is_projector())
        return op.designated_gamma();
    return preferred;
}

double selection_residual(const OperatorSpec& A, const Point& x, const Point& u) {
    const double g = usable_resolvent_gamma(A, 1.0);
    return (resolvent(A, g, x + g * u) - x).norm();
}

double solution_residual(const OperatorSpec& A, const OperatorSpec& B, const OperatorSpec& C,
                         const SolutionPair& s) {
    const double res_a = selection_residual(A, s.x, s.u);
    // -u - Cx must be a selection of B at x.
    const double res_b = selection_residual(B, s.x, -s.u - forward(C, s.x));
    return std::max(res_a, res_b);
}

ProblemInstance make_problem(OperatorSpec A, OperatorSpec B, OperatorSpec C, LipschitzData lip,
                             std::optional<SolutionPair> known_solution,
                             std::vector<std::string> tags) {
    const Eigen::Index d = A.dim();
    if (B.dim() != d || C.dim() != d)
        throw DimensionMismatch("problem operators have inconsistent dimensions");
    if (!(lip.mu > 0.0)) throw InvariantViolation("lip.mu must be positive");
    if (lip.kappa && !(*lip.kappa > 0.0)) throw InvariantViolation("lip.kappa must be positive");
    if (!C.forward_evaluable() && C.kind() != OperatorSpec::Kind::NormalConeSubspace)
        throw InvariantViolation("C must be forward-evaluable");

    // mu must bound C's Lipschitz constant; for affine forward maps that is
    // the largest singular value of the linear part.
    if (auto parts = affine_forward_parts(C)) {
        const double smax = parts->M.jacobiSvd().singularValues()(0);
        if (lip.mu < smax - 1e-10)
            throw InvariantViolation("lip.mu=" + std::to_string(lip.mu) +
                                     " understates C's Lipschitz constant " + std::to_string(smax));
    }

    if (known_solution) {
        if (known_solution->x.dim() != d || known_solution->u.dim() != d)
            throw DimensionMismatch("known solution dimension differs from problem");
        const double res = solution_residual(A, B, C, *known_solution);
        if (res > 1e-8)
            throw NotASolution("declared solution fails the resolvent-identity check, residual=" +
                               std::to_string(res));
    }

    ProblemInstance p;
    p.dim = d;
    p.A = std::move(A);
    p.B = std::move(B);
    p.C = std::move(C);
    p.lip = lip;
    p.known_solution = std::move(known_solution);
    p.tags = std::move(tags);
    return p;
}

}  // namespace opsplit
