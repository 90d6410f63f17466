#pragma once

#include "opsplit/problem_instance.hpp"

namespace opsplit {

/// Computable inclusion residual of x as a candidate zero of A + B + C.
///
/// With a single-valued A (Zero/Affine/Skew/QuadraticGradient) the value is
///
///     || x - J_{g B}( x - g (Ax + Cx) ) || / g,        g = 1,
///
/// which vanishes exactly at zeros of the sum. When A is set-valued
/// (ResolventOnly) and B is single-valued, the FDRF-native residual from one
/// fixed-point-map evaluation at the lifted point z = x + g Bx is used
/// instead:
///
///     || x - J_{g A}( x - g (Bx + Cx) ) ||,            g = A's designated gamma.
///
/// Throws NotSupported when neither form is computable.
double dist_to_zero(const ProblemInstance& problem, const Point& x);

/// Whether dist_to_zero is computable for this problem.
bool dist_to_zero_supported(const ProblemInstance& problem);

}  // namespace opsplit
