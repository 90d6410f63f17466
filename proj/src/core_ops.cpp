#include "opsplit/core_ops.hpp"

namespace opsplit {

namespace {

bool single_valued(const OperatorSpec& op) { return op.forward_evaluable(); }

}  // namespace

bool dist_to_zero_supported(const ProblemInstance& p) {
    if (single_valued(p.A)) return p.B.has_resolvent() && single_valued(p.C);
    if (p.A.kind() == OperatorSpec::Kind::ResolventOnly)
        return single_valued(p.B) && single_valued(p.C);
    return false;
}

double dist_to_zero(const ProblemInstance& p, const Point& x) {
    if (x.dim() != p.dim) throw DimensionMismatch("dist_to_zero: point dimension differs from problem");
    if (single_valued(p.A)) {
        const double g = 1.0;
        const Point drift = forward(p.A, x) + forward(p.C, x);
        return (x - resolvent(p.B, g, x - g * drift)).norm() / g;
    }
    if (p.A.kind() == OperatorSpec::Kind::ResolventOnly && single_valued(p.B)) {
        // One evaluation of the FDRF fixed-point map at z = x + g Bx: the
        // J_{gB} leg returns x itself, so only the A-leg mismatch remains.
        const double g = usable_resolvent_gamma(p.A, 1.0);
        const Point drift = forward(p.B, x) + forward(p.C, x);
        return (x - resolvent(p.A, g, x - g * drift)).norm();
    }
    throw NotSupported("dist_to_zero: no computable residual for this operator combination");
}

}  // namespace opsplit
