#ifndef STABCERT_BOUNDS_HPP
#define STABCERT_BOUNDS_HPP

#include <cstddef>
#include <vector>

#include "stabcert/integrate.hpp"

namespace stabcert {

/// Affine one-step divergence bound:
///   ||Phi(x) - Phi(y)|| <= multiplier * ||x - y|| + offset.
struct StepBound {
    double multiplier = 1.0;  // >= 1
    double offset = 0.0;      // >= 0; zero iff jump_M == 0
};

/// Affine N-step divergence bound (a, b) obtained by composing the
/// one-step bound: a = multiplier^N, b = geometric sum of the offsets.
struct PropagationBound {
    double a = 1.0;
    double b = 0.0;
    std::size_t n_steps = 0;
    double dt = 0.0;
    IntegratorKind kind = IntegratorKind::RK4;
    bool overflowed = false;  // a or b saturated to +inf; bound is vacuous
};

/// Exponential-stability triple: ||phi(t, t0, x0)|| <= k ||x0|| e^{-lambda (t-t0)}
/// for all ||x0|| <= r0.
struct StabilityParams {
    double k = 1.0;       // >= 1
    double lambda = 1.0;  // > 0, 1/seconds
    double r0 = 1.0;      // > 0
};

/// The RK4 step-size surrogate
///   alpha = dt * (1 + L dt/2 + (L dt)^2/6 + (L dt)^3/24),
/// evaluated in Horner form at full precision. Rounding alpha before use
/// visibly corrupts the N-step bounds (see propagation_bound), so it is
/// never truncated here.
double alpha(double lipschitz_L, double dt);

StepBound step_bound(double lipschitz_L, double jump_M, double dt, IntegratorKind kind);

/// Closed-form (a, b) for n_steps compositions of the one-step bound.
/// Saturates to +inf (flagged) instead of erroring on overflow.
PropagationBound propagation_bound(double lipschitz_L, double jump_M, double dt,
                                   std::size_t n_steps, IntegratorKind kind);

/// 2 k r0 e^{-lambda T}: the worst-case distance of two trajectories that
/// both start in the r0-ball, after time T.
double exponential_bound(const StabilityParams& params, double time_T);

/// sqrt(2 k r0 e^{-lambda T} a dist + 2 k r0 e^{-lambda T} b): geometric
/// mean of the affine and exponential bounds.
double sqrt_bound(const StabilityParams& params, const PropagationBound& pb, double time_T,
                  double dist);

/// Left-hand side of the delta-sampling slope condition,
/// k_E * sqrt_bound(params, pb, T, delta). The k_E factor is always kept;
/// with k_E = 1 it reduces to the bare square-root bound.
double slope_condition_lhs(double k_E, const StabilityParams& params,
                           const PropagationBound& pb, double time_T, double delta);

/// One row of the bounds table emitted by the `bounds` CLI subcommand.
struct BoundsTableRow {
    double T;
    double a;
    double b;
    double exp_bound;
    double sqrt_a_term;  // 2 k r0 e^{-lambda T} * a
    double sqrt_b_term;  // 2 k r0 e^{-lambda T} * b
};

std::vector<BoundsTableRow> bounds_table(double lipschitz_L, double jump_M, double dt,
                                         IntegratorKind kind, const StabilityParams& params,
                                         const std::vector<double>& time_grid);

}  // namespace stabcert

#endif
