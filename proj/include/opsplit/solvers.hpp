#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>

#include "opsplit/problem_instance.hpp"

namespace opsplit {

/// Step sizes and stopping thresholds shared by all iterations. gamma/beta
/// left unset are filled per method by resolve_config().
struct SolverConfig {
    std::optional<double> gamma;
    std::optional<double> beta;  // FRDR only
    long long max_iter = 1000;
    double tol = 1e-8;
    double blowup = 1e12;
};

// Per-method iterate bundles. Cached c_prev fields always hold C applied to
// the stored previous primal point.

struct DRState {
    Point z;
};
struct FBFState {
    Point x;
};
struct FRBState {
    Point x;
    Point x_prev;
    Point c_prev;  // C x_prev
};
struct FDRFState {
    Point z;
};
struct FRDRState {
    Point x;
    Point x_prev;
    Point u;
    Point c_prev;  // C x_prev
};
struct CPState {
    Point x;
    Point u;
};
struct MTPDState {
    Point x;
    Point x_prev;
    Point u;
    Point u_prev;
    Point c_prev;  // C x_prev
};
struct BAState {
    Point z;
};
struct JEState {
    Point z;
    Point wA;
    Point wB;
    Point wC;
};

using SolverState =
    std::variant<DRState, FBFState, FRBState, FDRFState, FRDRState, CPState, MTPDState, BAState, JEState>;

/// Output of one state transition.
struct StepReport {
    SolverState state_next;
    double residual = 0.0;
    std::map<std::string, Point> aux_points;
    int c_evals = 0;
};

/// Caller-supplied projective-splitting step-length rule alpha_n > 0. The
/// intermediate points of the current step are provided for rules that need
/// them.
struct JEAux {
    Point xa, xb, xc;
};
using AlphaRule = std::function<double(const Point& z, const JEAux& aux)>;

// --- iterations ---
// Each step is a pure function (state in, report out); resolvent errors
// propagate. Residuals are method-native and vanish exactly at fixed points.

/// Douglas-Rachford:
///   x+ = J_{gB} z;  y+ = J_{gA}(2x+ - z);  z+ = z + y+ - x+.
StepReport dr_step(const OperatorSpec& A, const OperatorSpec& B, const SolverConfig& cfg,
                   const DRState& s);

/// Tseng's forward-backward-forward:
///   y+ = J_{gA}(x - g Cx);  x+ = y+ - g (Cy+ - Cx).
StepReport fbf_step(const OperatorSpec& A, const OperatorSpec& C, const SolverConfig& cfg,
                    const FBFState& s);

/// Malitsky-Tam forward-reflected-backward:
///   x+ = J_{gA}(x - g (2Cx - Cx_prev)).
StepReport frb_step(const OperatorSpec& A, const OperatorSpec& C, const SolverConfig& cfg,
                    const FRBState& s);

/// Forward-Douglas-Rachford-forward:
///   x+ = J_{gB} z;  y+ = J_{gA}(2x+ - z - g Cx+);
///   z+ = z + y+ - x+ - g (Cy+ - Cx+).
StepReport fdrf_step(const OperatorSpec& A, const OperatorSpec& B, const OperatorSpec& C,
                     const SolverConfig& cfg, const FDRFState& s);

/// Forward-reflected-Douglas-Rachford:
///   x+ = J_{gB}(x - g u - g (2Cx - Cx_prev));
///   y+ = J_{bA}(2x+ - x + b u);  u+ = u + (1/b)(2x+ - x - y+).
StepReport frdr_step(const OperatorSpec& A, const OperatorSpec& B, const OperatorSpec& C,
                     const SolverConfig& cfg, const FRDRState& s);

/// Combettes-Pesquet primal-dual (FBF on the primal-dual system).
StepReport cp_pd_step(const OperatorSpec& A, const OperatorSpec& B, const OperatorSpec& C,
                      const SolverConfig& cfg, const CPState& s);

/// Malitsky-Tam primal-dual (FRB on the primal-dual system).
StepReport mt_pd_step(const OperatorSpec& A, const OperatorSpec& B, const OperatorSpec& C,
                      const SolverConfig& cfg, const MTPDState& s);

/// Briceno-Arias forward-partial inverse-forward. B must be a subspace
/// normal cone (J_{gB} = P_V); Zero is accepted as V = H.
StepReport ba_fpif_step(const OperatorSpec& A, const OperatorSpec& B, const OperatorSpec& C,
                        const SolverConfig& cfg, const BAState& s);

/// Johnstone-Eckstein projective splitting with caller-supplied alpha_n.
StepReport je_ps_step(const OperatorSpec& A, const OperatorSpec& B, const OperatorSpec& C,
                      const SolverConfig& cfg, const AlphaRule& alpha, const JEState& s);

// --- method dispatch ---

enum class Method { DR, FBF, FRB, FDRF, FRDR, CP_PD, MT_PD, BA_FPIF, JE_PS };

const char* method_name(Method m);
std::optional<Method> method_from_name(const std::string& name);
bool method_uses_beta(Method m);

/// Default all-zeros initial state (x_prev = x0, c_prev = C x0).
SolverState default_state(Method m, const ProblemInstance& p);
/// All-ones primal start with the same cache conventions.
SolverState ones_state(Method m, const ProblemInstance& p);
/// Initial state with the primal iterates set to `fill`; dual and auxiliary
/// variables start at zero, caches at their consistent values.
SolverState filled_state(Method m, const ProblemInstance& p, double fill);

/// Norm of the live iterate variables (caches excluded); drives the
/// divergence test in the run driver.
double state_norm(const SolverState& s);

/// Whether the state's tag belongs to the method.
bool state_matches(Method m, const SolverState& s);

/// Fill unset gamma/beta with the per-method defaults drawn from the
/// theorem step-size ranges (see README), using the problem's mu/kappa.
SolverConfig resolve_config(Method m, const ProblemInstance& p, SolverConfig cfg);

/// Human-readable warnings for step sizes outside the convergence ranges
/// stated by the theorems; empty when in range or no range is known.
std::vector<std::string> step_size_warnings(Method m, const ProblemInstance& p,
                                            const SolverConfig& cfg);

/// Dispatch one step of `m` on a matching state; throws ConfigError on a
/// method/state tag mismatch.
StepReport step(Method m, const ProblemInstance& p, const SolverConfig& cfg, const SolverState& s,
                const AlphaRule& alpha = {});

}  // namespace opsplit
