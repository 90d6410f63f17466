#include "opsplit/solvers.hpp"

#include <algorithm>
#include <cmath>

namespace opsplit {

namespace {

double need_gamma(const SolverConfig& cfg) {
    if (!cfg.gamma) throw ConfigError("gamma is not set; call resolve_config() or set it explicitly");
    if (!(*cfg.gamma > 0.0)) throw ConfigError("gamma must be positive");
    return *cfg.gamma;
}

double need_beta(const SolverConfig& cfg) {
    if (!cfg.beta) throw ConfigError("beta is not set; call resolve_config() or set it explicitly");
    if (!(*cfg.beta > 0.0)) throw ConfigError("beta must be positive");
    return *cfg.beta;
}

}  // namespace

StepReport dr_step(const OperatorSpec& A, const OperatorSpec& B, const SolverConfig& cfg,
                   const DRState& s) {
    const double g = need_gamma(cfg);
    const Point x = resolvent(B, g, s.z);
    const Point y = resolvent(A, g, 2.0 * x - s.z);
    StepReport r;
    r.state_next = DRState{s.z + y - x};
    r.residual = (y - x).norm();
    r.aux_points = {{"x", x}, {"y", y}};
    r.c_evals = 0;
    return r;
}

StepReport fbf_step(const OperatorSpec& A, const OperatorSpec& C, const SolverConfig& cfg,
                    const FBFState& s) {
    const double g = need_gamma(cfg);
    const Point cx = forward(C, s.x);
    const Point y = resolvent(A, g, s.x - g * cx);
    const Point cy = forward(C, y);
    StepReport r;
    r.state_next = FBFState{y - g * (cy - cx)};
    r.residual = (y - s.x).norm();
    r.aux_points = {{"x", std::get<FBFState>(r.state_next).x}, {"y", y}};
    r.c_evals = 2;
    return r;
}

StepReport frb_step(const OperatorSpec& A, const OperatorSpec& C, const SolverConfig& cfg,
                    const FRBState& s) {
    const double g = need_gamma(cfg);
    const Point cx = forward(C, s.x);
    const Point x_next = resolvent(A, g, s.x - g * (2.0 * cx - s.c_prev));
    StepReport r;
    r.residual = (x_next - s.x).norm();
    r.aux_points = {{"x", x_next}};
    r.state_next = FRBState{x_next, s.x, cx};
    r.c_evals = 1;
    return r;
}

StepReport fdrf_step(const OperatorSpec& A, const OperatorSpec& B, const OperatorSpec& C,
                     const SolverConfig& cfg, const FDRFState& s) {
    const double g = need_gamma(cfg);
    const Point x = resolvent(B, g, s.z);
    const Point cx = forward(C, x);
    const Point y = resolvent(A, g, 2.0 * x - s.z - g * cx);
    const Point cy = forward(C, y);
    StepReport r;
    r.state_next = FDRFState{s.z + y - x - g * (cy - cx)};
    r.residual = (x - y).norm();
    r.aux_points = {{"x", x}, {"y", y}};
    r.c_evals = 2;
    return r;
}

StepReport frdr_step(const OperatorSpec& A, const OperatorSpec& B, const OperatorSpec& C,
                     const SolverConfig& cfg, const FRDRState& s) {
    const double g = need_gamma(cfg);
    const double b = need_beta(cfg);
    const Point cx = forward(C, s.x);
    const Point x_next = resolvent(B, g, s.x - g * s.u - g * (2.0 * cx - s.c_prev));
    const Point y_next = resolvent(A, b, 2.0 * x_next - s.x + b * s.u);
    const Point u_next = s.u + (1.0 / b) * (2.0 * x_next - s.x - y_next);
    StepReport r;
    r.residual = (x_next - s.x).norm() + b * (u_next - s.u).norm();
    r.aux_points = {{"x", x_next}, {"y", y_next}};
    r.state_next = FRDRState{x_next, s.x, u_next, cx};
    r.c_evals = 1;
    return r;
}

StepReport cp_pd_step(const OperatorSpec& A, const OperatorSpec& B, const OperatorSpec& C,
                      const SolverConfig& cfg, const CPState& s) {
    const double g = need_gamma(cfg);
    const Point cx = forward(C, s.x);
    const Point xbar = resolvent(B, g, s.x - g * (cx + s.u));
    const Point y = resolvent(A, 1.0 / g, s.x + (1.0 / g) * s.u);
    const Point cxbar = forward(C, xbar);
    const Point x_next = xbar - g * (cxbar - cx) - (g * g) * (s.x - y);
    const Point u_next = s.u + g * (xbar - y);
    StepReport r;
    r.residual = (xbar - y).norm() + (x_next - s.x).norm();
    r.aux_points = {{"x", x_next}, {"xbar", xbar}, {"y", y}};
    r.state_next = CPState{x_next, u_next};
    r.c_evals = 2;
    return r;
}

StepReport mt_pd_step(const OperatorSpec& A, const OperatorSpec& B, const OperatorSpec& C,
                      const SolverConfig& cfg, const MTPDState& s) {
    const double g = need_gamma(cfg);
    const Point cx = forward(C, s.x);
    const Point x_next =
        resolvent(B, g, s.x - g * (2.0 * cx - s.c_prev + 2.0 * s.u - s.u_prev));
    const Point y_next = resolvent(A, 1.0 / g, 2.0 * s.x - s.x_prev + (1.0 / g) * s.u);
    const Point u_next = s.u + g * (2.0 * s.x - s.x_prev - y_next);
    StepReport r;
    r.residual = (x_next - s.x).norm() + (u_next - s.u).norm();
    r.aux_points = {{"x", x_next}, {"y", y_next}};
    r.state_next = MTPDState{x_next, s.x, u_next, s.u, cx};
    r.c_evals = 1;
    return r;
}

StepReport ba_fpif_step(const OperatorSpec& A, const OperatorSpec& B, const OperatorSpec& C,
                        const SolverConfig& cfg, const BAState& s) {
    const double g = need_gamma(cfg);
    const bool identity_proj = B.kind() == OperatorSpec::Kind::Zero;
    if (!identity_proj && B.kind() != OperatorSpec::Kind::NormalConeSubspace)
        throw NotSupported("ba_fpif_step requires B to be a subspace normal cone (or Zero for V = H)");

    const auto proj = [&](const Point& p) -> Point {
        return identity_proj ? p : Point(B.matrix() * p.vec());
    };
    // Q = J_{gB} C J_{gB} = P C P.
    const auto Q = [&](const Point& p) -> Point { return proj(forward(C, proj(p))); };

    const Point qz = Q(s.z);
    const Point x_next = resolvent(A, g, s.z - g * qz);
    const Point y_next = proj(2.0 * x_next - s.z + g * qz) - x_next + s.z - g * qz;
    // Tseng-style correction: re-evaluate at the new point, reuse qz for the
    // old one (the display's trailing iterate index reads as z_n; the literal
    // z_{n+1} form would cancel the correction identically for affine C and
    // lose the method's FBF reduction).
    const Point z_next = y_next - g * (Q(y_next) - qz);
    StepReport r;
    r.residual = (x_next - y_next).norm();
    r.aux_points = {{"x", x_next}, {"y", y_next}};
    r.state_next = BAState{z_next};
    r.c_evals = 2;
    return r;
}

StepReport je_ps_step(const OperatorSpec& A, const OperatorSpec& B, const OperatorSpec& C,
                      const SolverConfig& cfg, const AlphaRule& alpha, const JEState& s) {
    const double g = need_gamma(cfg);
    const Point xa = resolvent(A, g, s.z + g * s.wA);
    const Point xb = resolvent(B, g, s.z + g * s.wB);
    const Point xc = s.z - g * (forward(C, s.z) - s.wC);
    const JEAux aux{xa, xb, xc};
    const double a = alpha ? alpha(s.z, aux) : 1.0;
    if (!(a > 0.0) || !std::isfinite(a))
        throw InvalidAlpha("alpha_n must be positive and finite, got " + std::to_string(a));
    const Point z_next =
        s.z - (a / (g * g)) * (3.0 * s.z - xa - xb - g * forward(C, xc) + g * (s.wA + s.wB + s.wC));
    const Point wA_next = s.wA - a * (xa - xc);
    const Point wB_next = s.wB - a * (xb - xc);
    const Point wC_next = -wA_next - wB_next;
    StepReport r;
    r.residual = (z_next - s.z).norm() + (wA_next - s.wA).norm() + (wB_next - s.wB).norm();
    r.aux_points = {{"x", z_next}, {"xa", xa}, {"xb", xb}, {"xc", xc}};
    r.state_next = JEState{z_next, wA_next, wB_next, wC_next};
    r.c_evals = 2;
    return r;
}

const char* method_name(Method m) {
    switch (m) {
        case Method::DR: return "dr";
        case Method::FBF: return "fbf";
        case Method::FRB: return "frb";
        case Method::FDRF: return "fdrf";
        case Method::FRDR: return "frdr";
        case Method::CP_PD: return "cp_pd";
        case Method::MT_PD: return "mt_pd";
        case Method::BA_FPIF: return "ba_fpif";
        case Method::JE_PS: return "je_ps";
    }
    return "?";
}

std::optional<Method> method_from_name(const std::string& name) {
    std::string n;
    for (char c : name) n.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (n == "dr") return Method::DR;
    if (n == "fbf") return Method::FBF;
    if (n == "frb") return Method::FRB;
    if (n == "fdrf") return Method::FDRF;
    if (n == "frdr") return Method::FRDR;
    if (n == "cp_pd" || n == "cp") return Method::CP_PD;
    if (n == "mt_pd" || n == "mt") return Method::MT_PD;
    if (n == "ba_fpif" || n == "ba") return Method::BA_FPIF;
    if (n == "je_ps" || n == "je") return Method::JE_PS;
    return std::nullopt;
}

bool method_uses_beta(Method m) { return m == Method::FRDR; }

SolverState filled_state(Method m, const ProblemInstance& p, double fill) {
    const Eigen::Index d = p.dim;
    const Point v(Eigen::VectorXd::Constant(d, fill));
    const Point z0 = Point::zeros(d);
    // Primal iterates take the fill; dual and auxiliary variables start at 0.
    switch (m) {
        case Method::DR: return DRState{v};
        case Method::FBF: return FBFState{v};
        case Method::FRB: return FRBState{v, v, forward(p.C, v)};
        case Method::FDRF: return FDRFState{v};
        case Method::FRDR: return FRDRState{v, v, z0, forward(p.C, v)};
        case Method::CP_PD: return CPState{v, z0};
        case Method::MT_PD: return MTPDState{v, v, z0, z0, forward(p.C, v)};
        case Method::BA_FPIF: return BAState{v};
        case Method::JE_PS: return JEState{v, z0, z0, z0};
    }
    throw ConfigError("unknown method");
}

SolverState default_state(Method m, const ProblemInstance& p) { return filled_state(m, p, 0.0); }
SolverState ones_state(Method m, const ProblemInstance& p) { return filled_state(m, p, 1.0); }

namespace {

struct NormVisitor {
    double operator()(const DRState& s) const { return s.z.norm(); }
    double operator()(const FBFState& s) const { return s.x.norm(); }
    double operator()(const FRBState& s) const { return s.x.norm(); }
    double operator()(const FDRFState& s) const { return s.z.norm(); }
    double operator()(const FRDRState& s) const {
        return std::sqrt(s.x.squared_norm() + s.u.squared_norm());
    }
    double operator()(const CPState& s) const {
        return std::sqrt(s.x.squared_norm() + s.u.squared_norm());
    }
    double operator()(const MTPDState& s) const {
        return std::sqrt(s.x.squared_norm() + s.u.squared_norm());
    }
    double operator()(const BAState& s) const { return s.z.norm(); }
    double operator()(const JEState& s) const {
        return std::sqrt(s.z.squared_norm() + s.wA.squared_norm() + s.wB.squared_norm() +
                         s.wC.squared_norm());
    }
};

}  // namespace

double state_norm(const SolverState& s) { return std::visit(NormVisitor{}, s); }

bool state_matches(Method m, const SolverState& s) {
    switch (m) {
        case Method::DR: return std::holds_alternative<DRState>(s);
        case Method::FBF: return std::holds_alternative<FBFState>(s);
        case Method::FRB: return std::holds_alternative<FRBState>(s);
        case Method::FDRF: return std::holds_alternative<FDRFState>(s);
        case Method::FRDR: return std::holds_alternative<FRDRState>(s);
        case Method::CP_PD: return std::holds_alternative<CPState>(s);
        case Method::MT_PD: return std::holds_alternative<MTPDState>(s);
        case Method::BA_FPIF: return std::holds_alternative<BAState>(s);
        case Method::JE_PS: return std::holds_alternative<JEState>(s);
    }
    return false;
}

SolverConfig resolve_config(Method m, const ProblemInstance& p, SolverConfig cfg) {
    const double mu = p.lip.mu;
    if (method_uses_beta(m) && !cfg.beta) cfg.beta = 1.0;
    if (!cfg.gamma) {
        switch (m) {
            case Method::DR:
                cfg.gamma = 1.0;
                break;
            case Method::FBF:
                cfg.gamma = 0.99 / mu;
                break;
            case Method::FRB:
                cfg.gamma = 0.49 / mu;
                break;
            case Method::FDRF:
                if (p.lip.kappa)
                    cfg.gamma = 0.99 * std::min(*p.lip.kappa, std::sqrt(2.0 / 3.0) / mu);
                else
                    cfg.gamma = 0.99 / mu;
                break;
            case Method::FRDR:
                cfg.gamma = 0.99 * *cfg.beta / (1.0 + 2.0 * mu * *cfg.beta);
                break;
            case Method::CP_PD:
            case Method::MT_PD:
                // No step rule is stated for the primal-dual comparisons; use
                // a conservative fraction of 1/mu.
                cfg.gamma = 0.1 / mu;
                break;
            case Method::BA_FPIF:
                cfg.gamma = 0.99 / mu;
                break;
            case Method::JE_PS:
                cfg.gamma = 1.0;
                break;
        }
    }
    return cfg;
}

std::vector<std::string> step_size_warnings(Method m, const ProblemInstance& p,
                                            const SolverConfig& cfg) {
    std::vector<std::string> w;
    if (!cfg.gamma) return w;
    const double g = *cfg.gamma;
    const double mu = p.lip.mu;
    const auto warn = [&](const std::string& msg) { w.push_back(msg); };
    switch (m) {
        case Method::FBF:
            if (g >= 1.0 / mu) warn("fbf: gamma outside (0, 1/mu)");
            break;
        case Method::FRB:
            if (g >= 0.5 / mu) warn("frb: gamma outside (0, 1/(2 mu))");
            break;
        case Method::FRDR: {
            const double b = cfg.beta.value_or(1.0);
            if (g >= b) warn("frdr: beta <= gamma (product metric not positive definite)");
            if (g >= b / (1.0 + 2.0 * mu * b)) warn("frdr: gamma outside (0, beta/(1+2 mu beta))");
            break;
        }
        case Method::FDRF: {
            if (p.lip.kappa) {
                const double k = *p.lip.kappa;
                // Condition (i): gamma < mu^{-1} / sqrt(1 + gamma/(2 kappa)).
                if (g * g * mu * mu * (1.0 + g / (2.0 * k)) >= 1.0)
                    warn("fdrf: gamma outside the cocoercive-B convergence range");
            } else if (p.B.kind() == OperatorSpec::Kind::NormalConeSubspace) {
                if (g >= 1.0 / mu) warn("fdrf: gamma outside (0, 1/mu) for the subspace case");
            }
            // No convergence range exists in general (divergence is possible).
            break;
        }
        default:
            break;
    }
    return w;
}

StepReport step(Method m, const ProblemInstance& p, const SolverConfig& cfg, const SolverState& s,
                const AlphaRule& alpha) {
    const auto bad_state = [&]() -> StepReport {
        throw ConfigError(std::string("state tag does not match method ") + method_name(m));
    };
    switch (m) {
        case Method::DR:
            if (auto* st = std::get_if<DRState>(&s)) return dr_step(p.A, p.B, cfg, *st);
            return bad_state();
        case Method::FBF:
            if (auto* st = std::get_if<FBFState>(&s)) return fbf_step(p.A, p.C, cfg, *st);
            return bad_state();
        case Method::FRB:
            if (auto* st = std::get_if<FRBState>(&s)) return frb_step(p.A, p.C, cfg, *st);
            return bad_state();
        case Method::FDRF:
            if (auto* st = std::get_if<FDRFState>(&s)) return fdrf_step(p.A, p.B, p.C, cfg, *st);
            return bad_state();
        case Method::FRDR:
            if (auto* st = std::get_if<FRDRState>(&s)) return frdr_step(p.A, p.B, p.C, cfg, *st);
            return bad_state();
        case Method::CP_PD:
            if (auto* st = std::get_if<CPState>(&s)) return cp_pd_step(p.A, p.B, p.C, cfg, *st);
            return bad_state();
        case Method::MT_PD:
            if (auto* st = std::get_if<MTPDState>(&s)) return mt_pd_step(p.A, p.B, p.C, cfg, *st);
            return bad_state();
        case Method::BA_FPIF:
            if (auto* st = std::get_if<BAState>(&s)) return ba_fpif_step(p.A, p.B, p.C, cfg, *st);
            return bad_state();
        case Method::JE_PS:
            if (auto* st = std::get_if<JEState>(&s)) return je_ps_step(p.A, p.B, p.C, cfg, alpha, *st);
            return bad_state();
    }
    throw ConfigError("unknown method");
}

}  // namespace opsplit
