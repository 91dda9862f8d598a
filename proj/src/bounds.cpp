#include "stabcert/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace stabcert {

double alpha(double lipschitz_L, double dt) {
    if (lipschitz_L < 0.0) throw std::invalid_argument("alpha: L must be nonnegative");
    if (dt <= 0.0) throw std::invalid_argument("alpha: dt must be positive");
    const double z = lipschitz_L * dt;
    return dt * (1.0 + z * (1.0 / 2.0 + z * (1.0 / 6.0 + z * (1.0 / 24.0))));
}

StepBound step_bound(double lipschitz_L, double jump_M, double dt, IntegratorKind kind) {
    if (jump_M < 0.0) throw std::invalid_argument("step_bound: M must be nonnegative");
    if (kind == IntegratorKind::Euler)
        return {1.0 + lipschitz_L * dt, dt * jump_M};
    const double a = alpha(lipschitz_L, dt);
    return {1.0 + lipschitz_L * a, a * jump_M};
}

PropagationBound propagation_bound(double lipschitz_L, double jump_M, double dt,
                                   std::size_t n_steps, IntegratorKind kind) {
    const StepBound sb = step_bound(lipschitz_L, jump_M, dt, kind);
    PropagationBound pb;
    pb.n_steps = n_steps;
    pb.dt = dt;
    pb.kind = kind;
    if (n_steps == 0) return pb;

    pb.a = std::pow(sb.multiplier, static_cast<double>(n_steps));
    if (sb.multiplier > 1.0)
        pb.b = sb.offset * (pb.a - 1.0) / (sb.multiplier - 1.0);
    else
        pb.b = static_cast<double>(n_steps) * sb.offset;
    pb.overflowed = std::isinf(pb.a) || std::isinf(pb.b);
    return pb;
}

double exponential_bound(const StabilityParams& params, double time_T) {
    if (time_T < 0.0) throw std::invalid_argument("exponential_bound: T must be nonnegative");
    return 2.0 * params.k * params.r0 * std::exp(-params.lambda * time_T);
}

double sqrt_bound(const StabilityParams& params, const PropagationBound& pb, double time_T,
                  double dist) {
    if (dist < 0.0) throw std::invalid_argument("sqrt_bound: dist must be nonnegative");
    const double e = exponential_bound(params, time_T);
    return std::sqrt(e * pb.a * dist + e * pb.b);
}

double slope_condition_lhs(double k_E, const StabilityParams& params,
                           const PropagationBound& pb, double time_T, double delta) {
    if (k_E <= 0.0) throw std::invalid_argument("slope_condition_lhs: k_E must be positive");
    return k_E * sqrt_bound(params, pb, time_T, delta);
}

std::vector<BoundsTableRow> bounds_table(double lipschitz_L, double jump_M, double dt,
                                         IntegratorKind kind, const StabilityParams& params,
                                         const std::vector<double>& time_grid) {
    std::vector<BoundsTableRow> rows;
    rows.reserve(time_grid.size());
    for (double T : time_grid) {
        const auto n = static_cast<std::size_t>(std::llround(T / dt));
        const PropagationBound pb = propagation_bound(lipschitz_L, jump_M, dt, n, kind);
        const double e = exponential_bound(params, T);
        rows.push_back({T, pb.a, pb.b, e, e * pb.a, e * pb.b});
    }
    return rows;
}

}  // namespace stabcert
