#pragma once

#include "opsplit/analysis.hpp"
#include "opsplit/solvers.hpp"

namespace opsplit {

enum class RunStatus { Converged, Diverged, MaxIter, Failed };

const char* status_name(RunStatus s);

/// One per-iteration record. Row 0 describes the initial state (no residual).
/// Optional fields stay empty where a quantity is not applicable to the
/// method or problem.
struct TraceRow {
    long long iter = 0;
    std::optional<double> residual;
    double iterate_norm = 0.0;
    std::optional<double> dist_to_zero;
    std::optional<double> V;
    std::optional<double> S;
    long long cum_c_evals = 0;
    long long wall_ns = 0;  // elapsed since run start
};

struct RunTrace {
    std::string method;
    std::string problem_tag;
    RunStatus status = RunStatus::MaxIter;
    long long iters = 0;
    std::vector<TraceRow> rows;  // size iters + 1
    std::vector<std::string> warnings;
    std::string error;  // set when status == Failed
    SolverState final_state;
    double gamma = 0.0;
    double beta = 0.0;  // 0 when unused
};

struct RunHooks {
    /// Record dist_to_zero per row where the problem supports it.
    bool record_dist = true;
    /// Record V_n / S_n per row for FRDR runs on problems with a certified
    /// solution (requires gamma < beta).
    bool record_lyapunov = true;
    /// Projective-splitting step length; constant 1 when unset.
    AlphaRule alpha;
};

/// Iterate `m` from `init` until the step residual falls to cfg.tol
/// (Converged), the live-iterate norm reaches cfg.blowup * (1 + ||init||)
/// (Diverged), or cfg.max_iter steps elapse (MaxIter). Step errors terminate
/// the run with status Failed and the message attached. Unset step sizes are
/// resolved to the per-method defaults first; out-of-range step sizes are
/// recorded as warnings, never errors.
RunTrace run(Method m, const ProblemInstance& p, const SolverConfig& cfg, SolverState init,
             const RunHooks& hooks = {});

}  // namespace opsplit
