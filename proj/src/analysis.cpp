#include "opsplit/analysis.hpp"

#include <cmath>

namespace opsplit {

double pd_norm_sq(const PDNorm& n, const Point& x, const Point& u) {
    if (!(n.gamma > 0.0) || !(n.beta > 0.0) || !(n.gamma < n.beta))
        throw InvalidMetric("pd norm requires 0 < gamma < beta, got gamma=" +
                            std::to_string(n.gamma) + ", beta=" + std::to_string(n.beta));
    return (1.0 / n.gamma) * x.squared_norm() - 2.0 * x.dot(u) + n.beta * u.squared_norm();
}

LyapunovRecord lyapunov(const ProblemInstance& p, const PDNorm& n, const FRDRState& s_prev,
                        const FRDRState& s_curr, const FRDRState& s_next) {
    if (!p.known_solution) throw NotASolution("lyapunov requires a certified solution pair");
    const SolutionPair& star = *p.known_solution;
    if (solution_residual(p.A, p.B, p.C, star) > 1e-8)
        throw NotASolution("stored solution pair fails the resolvent-identity check");

    const Point c_prev = forward(p.C, s_prev.x);
    const Point c_curr = forward(p.C, s_curr.x);
    const Point c_next = forward(p.C, s_next.x);

    const auto pd_diff = [&](const FRDRState& a, const FRDRState& b) {
        return pd_norm_sq(n, a.x - b.x, a.u - b.u);
    };
    const auto pd_to_star = [&](const FRDRState& a) {
        return pd_norm_sq(n, a.x - star.x, a.u - star.u);
    };

    const double v_curr =
        pd_to_star(s_curr) + 0.5 * pd_diff(s_curr, s_prev) + 2.0 * (c_curr - c_prev).dot(star.x - s_curr.x);
    const double v_next =
        pd_to_star(s_next) + 0.5 * pd_diff(s_next, s_curr) + 2.0 * (c_next - c_curr).dot(star.x - s_next.x);
    const double s_n = 0.5 * pd_diff(s_curr, s_next) + 0.5 * pd_diff(s_curr, s_prev);

    const double c =
        (n.beta - n.gamma - 2.0 * p.lip.mu * n.gamma * n.beta) / (2.0 * (n.beta - n.gamma));

    LyapunovRecord rec;
    rec.V = v_curr;
    rec.S = s_n;
    rec.decrease_slack = v_curr - v_next - c * s_n;
    return rec;
}

Point apply_T(const OperatorSpec& A, const OperatorSpec& B, const OperatorSpec& C, double gamma,
              const Point& z) {
    if (!(gamma > 0.0)) throw DomainError("apply_T: gamma must be positive");
    const Point jb = resolvent(B, gamma, z);
    const Point inner = resolvent(A, gamma, 2.0 * jb - z - gamma * forward(C, jb));
    return (inner - gamma * forward(C, inner)) + z - (jb - gamma * forward(C, jb));
}

AffineMap assemble_T(const OperatorSpec& A, const OperatorSpec& B, const OperatorSpec& C,
                     double gamma) {
    const Eigen::Index d = A.dim();
    AffineMap m;
    m.t = apply_T(A, B, C, gamma, Point::zeros(d)).vec();
    m.M.resize(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(d);
        e(i) = 1.0;
        m.M.col(i) = apply_T(A, B, C, gamma, Point(std::move(e))).vec() - m.t;
    }
    return m;
}

Point fixed_point_of_T(const OperatorSpec& A, const OperatorSpec& B, const OperatorSpec& C,
                       double gamma) {
    const AffineMap m = assemble_T(A, B, C, gamma);
    const Eigen::Index d = m.M.rows();
    const Eigen::MatrixXd S = Eigen::MatrixXd::Identity(d, d) - m.M;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(S);
    Eigen::VectorXd z = lu.solve(m.t);
    if (!z.allFinite() || (S * z - m.t).norm() > 1e-8 * std::max(1.0, m.t.norm()))
        throw SingularSystem("fixed_point_of_T: I - T is numerically singular (Fix(T) not unique?)");
    return Point(std::move(z));
}

double check_fixed_point_encoding(const OperatorSpec& A, const OperatorSpec& B,
                                  const OperatorSpec& C, double gamma, const Point& z_fix) {
    const double drift = (apply_T(A, B, C, gamma, z_fix) - z_fix).norm();
    if (drift > 1e-8)
        throw NotAFixedPoint("||Tz - z|| = " + std::to_string(drift) + " exceeds 1e-8");

    const Point x = resolvent(B, gamma, z_fix);
    const Point cx = forward(C, x);
    const Point a = (1.0 / gamma) * ((2.0 * x - z_fix - gamma * cx) - x);
    const Point b = (1.0 / gamma) * (z_fix - x);

    // The selections must satisfy the resolvent identities at x itself.
    const double mis_a = (resolvent(A, gamma, x + gamma * a) - x).norm();
    const double mis_b = (resolvent(B, gamma, x + gamma * b) - x).norm();
    if (mis_a > 1e-7 || mis_b > 1e-7)
        throw NotAFixedPoint("constructed selections fail the resolvent identities (residuals " +
                             std::to_string(mis_a) + ", " + std::to_string(mis_b) + ")");

    return (a + b + cx).norm();
}

double counterexample_growth(double gamma, double mu, double omega) {
    if (!(omega > 0.0) || !(omega < M_PI))
        throw DomainError("counterexample_growth: omega must lie in (0, pi)");
    if (!(gamma > 0.0) || !(mu > 0.0))
        throw DomainError("counterexample_growth: gamma and mu must be positive");
    const double v = std::cos(omega / 2.0) + gamma * mu * std::sin(omega / 2.0);
    return v * v;
}

double measure_growth_ratio(const ProblemInstance& p, double gamma, const Point& z0,
                            int total_iters, int window_start) {
    if (total_iters <= window_start || window_start < 0)
        throw DomainError("measure_growth_ratio: need 0 <= window_start < total_iters");
    if (!(z0.norm() > 0.0)) throw DomainError("measure_growth_ratio: z0 must be nonzero");

    SolverConfig cfg;
    cfg.gamma = gamma;
    FDRFState s{Point(z0.vec() / z0.norm())};
    double log_sum = 0.0;
    int count = 0;
    for (int n = 0; n < total_iters; ++n) {
        const StepReport r = fdrf_step(p.A, p.B, p.C, cfg, s);
        const auto& z_next = std::get<FDRFState>(r.state_next).z;
        const double ratio = z_next.norm();  // previous iterate is unit norm
        if (n >= window_start) {
            log_sum += std::log(ratio);
            ++count;
        }
        if (!(ratio > 0.0)) throw DomainError("measure_growth_ratio: iterate collapsed to zero");
        s.z = Point(z_next.vec() / ratio);
    }
    return std::exp(log_sum / count);
}

}  // namespace opsplit
