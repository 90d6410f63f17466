#include "opsplit/run.hpp"

#include <chrono>

#include "opsplit/core_ops.hpp"

namespace opsplit {

const char* status_name(RunStatus s) {
    switch (s) {
        case RunStatus::Converged: return "Converged";
        case RunStatus::Diverged: return "Diverged";
        case RunStatus::MaxIter: return "MaxIter";
        case RunStatus::Failed: return "Failed";
    }
    return "?";
}

namespace {

std::optional<Point> primal_candidate(const SolverState& s, const ProblemInstance& p, double gamma) {
    // The natural solution candidate attached to a raw state: the x iterate
    // where the state holds one, else the backward image of z.
    if (auto* st = std::get_if<FBFState>(&s)) return st->x;
    if (auto* st = std::get_if<FRBState>(&s)) return st->x;
    if (auto* st = std::get_if<FRDRState>(&s)) return st->x;
    if (auto* st = std::get_if<CPState>(&s)) return st->x;
    if (auto* st = std::get_if<MTPDState>(&s)) return st->x;
    if (auto* st = std::get_if<DRState>(&s)) return resolvent(p.B, gamma, st->z);
    if (auto* st = std::get_if<FDRFState>(&s)) return resolvent(p.B, gamma, st->z);
    if (auto* st = std::get_if<JEState>(&s)) return st->z;
    return std::nullopt;  // BA: no cheap candidate before the first step
}

}  // namespace

RunTrace run(Method m, const ProblemInstance& p, const SolverConfig& cfg0, SolverState init,
             const RunHooks& hooks) {
    const SolverConfig cfg = resolve_config(m, p, cfg0);
    if (!state_matches(m, init))
        throw ConfigError(std::string("initial state tag does not match method ") + method_name(m));
    if (!(cfg.tol > 0.0)) throw ConfigError("tol must be positive");
    if (!(cfg.blowup > 0.0)) throw ConfigError("blowup must be positive");
    if (cfg.max_iter <= 0) throw ConfigError("max_iter must be positive");

    RunTrace trace;
    trace.method = method_name(m);
    trace.problem_tag = p.tag();
    trace.warnings = step_size_warnings(m, p, cfg);
    trace.gamma = *cfg.gamma;
    trace.beta = method_uses_beta(m) ? *cfg.beta : 0.0;

    const bool dist_ok = hooks.record_dist && dist_to_zero_supported(p);
    const bool lyap_ok = hooks.record_lyapunov && m == Method::FRDR && p.known_solution &&
                         *cfg.gamma < trace.beta;
    const PDNorm pd{*cfg.gamma, trace.beta};

    const auto t0 = std::chrono::steady_clock::now();
    const auto elapsed_ns = [&]() {
        return std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() -
                                                                    t0)
            .count();
    };
    const auto record_dist_at = [&](TraceRow& row, const std::optional<Point>& x) {
        if (dist_ok && x) row.dist_to_zero = dist_to_zero(p, *x);
    };

    const double init_norm = state_norm(init);
    const double blowup_at = cfg.blowup * (1.0 + init_norm);

    TraceRow row0;
    row0.iter = 0;
    row0.iterate_norm = init_norm;
    record_dist_at(row0, primal_candidate(init, p, *cfg.gamma));
    row0.cum_c_evals = 0;
    row0.wall_ns = elapsed_ns();
    trace.rows.push_back(std::move(row0));

    // For the Lyapunov hook: V_n and S_n at row n need states n-1, n, n+1, so
    // row n is back-filled once state n+1 exists. Row 0 uses the synthetic
    // predecessor (x_prev, u_0) encoded in the initial state.
    SolverState state = std::move(init);
    std::optional<FRDRState> lyap_prev;
    if (lyap_ok) {
        const auto& s0 = std::get<FRDRState>(state);
        lyap_prev = FRDRState{s0.x_prev, s0.x_prev, s0.u, s0.c_prev};
    }

    trace.status = RunStatus::MaxIter;
    long long cum_c = 0;
    for (long long n = 1; n <= cfg.max_iter; ++n) {
        StepReport rep;
        try {
            rep = step(m, p, cfg, state, hooks.alpha);
        } catch (const Error& e) {
            trace.status = RunStatus::Failed;
            trace.error = e.what();
            break;
        }

        if (lyap_ok) {
            const auto& prev = std::get<FRDRState>(state);
            const auto& next = std::get<FRDRState>(rep.state_next);
            const LyapunovRecord rec = lyapunov(p, pd, *lyap_prev, prev, next);
            trace.rows.back().V = rec.V;
            trace.rows.back().S = rec.S;
            lyap_prev = prev;
        }

        cum_c += rep.c_evals;
        state = std::move(rep.state_next);

        TraceRow row;
        row.iter = n;
        row.residual = rep.residual;
        row.iterate_norm = state_norm(state);
        const auto it = rep.aux_points.find("x");
        record_dist_at(row, it == rep.aux_points.end() ? std::nullopt
                                                       : std::optional<Point>(it->second));
        row.cum_c_evals = cum_c;
        row.wall_ns = elapsed_ns();
        trace.rows.push_back(std::move(row));
        trace.iters = n;

        if (rep.residual <= cfg.tol) {
            trace.status = RunStatus::Converged;
            break;
        }
        if (trace.rows.back().iterate_norm >= blowup_at) {
            trace.status = RunStatus::Diverged;
            break;
        }
    }

    trace.final_state = std::move(state);
    return trace;
}

}  // namespace opsplit
