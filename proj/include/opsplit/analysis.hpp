#pragma once

#include "opsplit/solvers.hpp"

namespace opsplit {

/// Parameters of the product-space inner product
///   <(x,u),(y,v)> = (1/gamma)<x,y> - <x,v> - <y,u> + beta <u,v>,
/// positive definite exactly when gamma < beta.
struct PDNorm {
    double gamma;
    double beta;
};

/// Squared product-space norm (1/gamma)|x|^2 - 2<x,u> + beta |u|^2.
/// Throws InvalidMetric when gamma >= beta.
double pd_norm_sq(const PDNorm& n, const Point& x, const Point& u);

/// Measured Lyapunov quantities along one FRDR step window.
struct LyapunovRecord {
    double V = 0.0;               // V_n
    double S = 0.0;               // S_n
    double decrease_slack = 0.0;  // V_n - V_{n+1} - c S_n, c = (b-g-2 mu g b)/(2(b-g))
};

/// Evaluate V_n, S_n and the decrease slack from three consecutive FRDR
/// states (n-1, n, n+1). The problem must carry a certified solution pair
/// (throws NotASolution otherwise); C is re-evaluated at the stored iterates
/// rather than trusting the state caches.
LyapunovRecord lyapunov(const ProblemInstance& p, const PDNorm& n, const FRDRState& s_prev,
                        const FRDRState& s_curr, const FRDRState& s_next);

/// The FDRF fixed-point map
///   T = (Id - g C) J_{gA} (2 J_{gB} - Id - g C J_{gB}) + Id - (Id - g C) J_{gB};
/// one FDRF step is z+ = Tz.
Point apply_T(const OperatorSpec& A, const OperatorSpec& B, const OperatorSpec& C, double gamma,
              const Point& z);

/// z |-> Mz + t representation of an affine map.
struct AffineMap {
    Eigen::MatrixXd M;
    Eigen::VectorXd t;
};

/// Assemble T as a matrix-plus-offset by probing the basis vectors. Only
/// meaningful when every operator leg is affine (which holds for all the
/// operator families here); the result is exact up to rounding.
AffineMap assemble_T(const OperatorSpec& A, const OperatorSpec& B, const OperatorSpec& C,
                     double gamma);

/// The unique fixed point of an affine T via the linear solve (I - M) z = t.
/// Throws SingularSystem when Fix(T) is not a single point.
Point fixed_point_of_T(const OperatorSpec& A, const OperatorSpec& B, const OperatorSpec& C,
                       double gamma);

/// Certify the fixed-point encoding zer(A+B+C) = J_{gB}(Fix T) at z_fix:
/// requires ||T z_fix - z_fix|| <= 1e-8 (NotAFixedPoint otherwise), extracts
/// the constructive selections a = ((2x - z - g Cx) - x)/g in Ax and
/// b = (z - x)/g in Bx for x = J_{gB} z_fix, verifies both through the
/// resolvent identities, and returns the inclusion residual ||a + b + Cx||.
double check_fixed_point_encoding(const OperatorSpec& A, const OperatorSpec& B,
                                  const OperatorSpec& C, double gamma, const Point& z_fix);

/// Squared spectral radius (cos(w/2) + g mu sin(w/2))^2 of the divergence
/// counterexample's T matrix. Throws DomainError for omega outside (0, pi).
double counterexample_growth(double gamma, double mu, double omega);

/// Per-iteration growth ratio ||z_{n+1}||/||z_n|| of an FDRF run, reported as
/// the geometric mean over steps [window_start, total_iters). The iterate is
/// renormalized after each step so arbitrarily fast growth can be measured
/// without overflow (the ratio is scale-invariant for these linear
/// instances).
double measure_growth_ratio(const ProblemInstance& p, double gamma, const Point& z0,
                            int total_iters, int window_start);

}  // namespace opsplit
