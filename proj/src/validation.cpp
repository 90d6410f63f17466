#include "opsplit/validation.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <sstream>

#include "opsplit/analysis.hpp"
#include "opsplit/core_ops.hpp"
#include "rng.hpp"

namespace opsplit {

double injectivity_worst_slack(const OperatorSpec& C, double mu, double gamma, int n_pairs,
                           std::uint64_t seed) {
    detail::Rng rng(seed);
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_pairs; ++i) {
        const Point x(rng.gaussian_vector(C.dim()));
        const Point y(rng.gaussian_vector(C.dim()));
        if ((x - y).norm() == 0.0) continue;
        const double lhs = ((x - gamma * forward(C, x)) - (y - gamma * forward(C, y))).norm();
        worst = std::min(worst, lhs - (1.0 - gamma * mu) * (x - y).norm());
    }
    return worst;
}

double averagedness_worst_slack(const OperatorSpec& B, double kappa, double gamma, int n_pairs,
                           std::uint64_t seed) {
    detail::Rng rng(seed);
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_pairs; ++i) {
        const Point x(rng.gaussian_vector(B.dim()));
        const Point y(rng.gaussian_vector(B.dim()));
        const Point jx = resolvent(B, gamma, x);
        const Point jy = resolvent(B, gamma, y);
        const double rhs = (x - y).squared_norm() -
                           (1.0 + 2.0 * kappa / gamma) * ((x - jx) - (y - jy)).squared_norm();
        worst = std::min(worst, rhs - (jx - jy).squared_norm());
    }
    return worst;
}

double nonexpansiveness_worst_slack(const OperatorSpec& A, double gamma, int n_pairs,
                                    std::uint64_t seed) {
    detail::Rng rng(seed);
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_pairs; ++i) {
        const Point x(rng.gaussian_vector(A.dim()));
        const Point y(rng.gaussian_vector(A.dim()));
        worst = std::min(worst, (x - y).norm() -
                                    (resolvent(A, gamma, x) - resolvent(A, gamma, y)).norm());
    }
    return worst;
}

double resolvent_inverse_worst_error(const OperatorSpec& A, double gamma, int n_points,
                                     std::uint64_t seed) {
    detail::Rng rng(seed);
    double worst = 0.0;
    for (int i = 0; i < n_points; ++i) {
        const Point x(rng.gaussian_vector(A.dim()));
        const Point lifted = x + gamma * forward(A, x);
        worst = std::max(worst, (resolvent(A, gamma, lifted) - x).norm());
    }
    return worst;
}

double monotonicity_worst(const OperatorSpec& F, int n_pairs, std::uint64_t seed) {
    detail::Rng rng(seed);
    double worst = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_pairs; ++i) {
        const Point x(rng.gaussian_vector(F.dim()));
        const Point y(rng.gaussian_vector(F.dim()));
        const double nn = (x - y).squared_norm();
        if (nn == 0.0) continue;
        worst = std::min(worst, (x - y).dot(forward(F, x) - forward(F, y)) / nn);
    }
    return worst;
}

namespace {

std::string fmt(double v) {
    std::ostringstream ss;
    ss.precision(3);
    ss << std::scientific << v;
    return ss.str();
}

void structural_checks(const char* label, const OperatorSpec& op, std::vector<CheckResult>& out) {
    using Kind = OperatorSpec::Kind;
    switch (op.kind()) {
        case Kind::Skew: {
            const double dev = (op.matrix() + op.matrix().transpose()).norm();
            const double tol = 1e-12 * std::max(1.0, op.matrix().norm());
            out.push_back({std::string("structural: ") + label + " skew symmetry", dev <= tol,
                           "||M + M^T||_F = " + fmt(dev)});
            break;
        }
        case Kind::NormalConeSubspace: {
            const auto& P = op.matrix();
            const double dev = std::max((P * P - P).cwiseAbs().maxCoeff(),
                                        (P - P.transpose()).cwiseAbs().maxCoeff());
            out.push_back({std::string("structural: ") + label + " projector identity", dev <= 1e-12,
                           "max deviation " + fmt(dev)});
            break;
        }
        case Kind::QuadraticGradient: {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(op.matrix());
            const double lmin = es.eigenvalues().minCoeff();
            out.push_back({std::string("structural: ") + label + " PSD quadratic gradient",
                           lmin >= -1e-10, "lambda_min(Q) = " + fmt(lmin)});
            break;
        }
        case Kind::Affine: {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(op.matrix() +
                                                              op.matrix().transpose());
            const double lmin = es.eigenvalues().minCoeff();
            out.push_back({std::string("structural: ") + label + " monotone affine", lmin >= -1e-10,
                           "lambda_min(M + M^T) = " + fmt(lmin)});
            break;
        }
        default:
            break;
    }
}

}  // namespace

std::vector<CheckResult> validate_instance(const ProblemInstance& p, std::uint64_t seed) {
    std::vector<CheckResult> out;
    const double mu = p.lip.mu;

    structural_checks("A", p.A, out);
    structural_checks("B", p.B, out);
    structural_checks("C", p.C, out);

    if (auto parts = affine_forward_parts(p.C)) {
        const double smax = parts->M.jacobiSvd().singularValues()(0);
        out.push_back({"lipschitz: mu bounds ||C||", mu >= smax - 1e-10,
                       "mu = " + fmt(mu) + ", sigma_max = " + fmt(smax)});
    }

    const auto monotone_check = [&](const char* label, const OperatorSpec& op) {
        if (!op.forward_evaluable()) return;
        const double worst = monotonicity_worst(op, 100, seed + 1);
        out.push_back({std::string("monotonicity: ") + label, worst >= -1e-10,
                       "min <dx, dF>/||dx||^2 = " + fmt(worst)});
    };
    monotone_check("A", p.A);
    monotone_check("B", p.B);
    monotone_check("C", p.C);

    if (p.C.forward_evaluable()) {
        const double g = 0.9 / mu;
        const double slack = injectivity_worst_slack(p.C, mu, g, 100, seed + 2);
        out.push_back({"injectivity bound for Id - gamma C", slack >= -1e-10,
                       "worst slack " + fmt(slack) + " at gamma = " + fmt(g)});
    }

    if (p.lip.kappa && p.B.has_resolvent()) {
        const double slack = averagedness_worst_slack(p.B, *p.lip.kappa, 0.7, 100, seed + 3);
        out.push_back(
            {"averagedness of the cocoercive resolvent", slack >= -1e-10, "worst slack " + fmt(slack)});
    }

    const auto resolvent_checks = [&](const char* label, const OperatorSpec& op) {
        if (!op.has_resolvent()) return;
        const double g = usable_resolvent_gamma(op, 1.0);
        const double slack = nonexpansiveness_worst_slack(op, g, 100, seed + 4);
        out.push_back({std::string("resolvent nonexpansive: ") + label, slack >= -1e-10,
                       "worst slack " + fmt(slack)});
        if (op.forward_evaluable()) {
            const double err = resolvent_inverse_worst_error(op, g, 100, seed + 5);
            out.push_back({std::string("resolvent inverts Id + gamma op: ") + label, err <= 1e-10,
                           "worst error " + fmt(err)});
        }
    };
    resolvent_checks("A", p.A);
    resolvent_checks("B", p.B);

    if (p.known_solution) {
        const double res = solution_residual(p.A, p.B, p.C, *p.known_solution);
        out.push_back({"declared solution satisfies the inclusion", res <= 1e-8,
                       "resolvent-identity residual " + fmt(res)});
        if (dist_to_zero_supported(p)) {
            const double d0 = dist_to_zero(p, p.known_solution->x);
            out.push_back({"dist_to_zero vanishes at the solution", d0 <= 1e-8, "value " + fmt(d0)});
        }
    }

    // Fixed-point encoding through a computed fixed point (T affine for every
    // operator family here).
    if (p.A.has_resolvent() && p.B.has_resolvent() && p.C.forward_evaluable()) {
        const double g = usable_resolvent_gamma(p.A, std::min(0.9 / mu, 1.0));
        try {
            const Point z_fix = fixed_point_of_T(p.A, p.B, p.C, g);
            const double res = check_fixed_point_encoding(p.A, p.B, p.C, g, z_fix);
            out.push_back({"fixed-point encoding", res <= 1e-8,
                           "inclusion residual " + fmt(res) + " at gamma = " + fmt(g)});
        } catch (const Error& e) {
            out.push_back({"fixed-point encoding", false, e.what()});
        }
    }

    return out;
}

}  // namespace opsplit
