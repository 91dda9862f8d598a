#include "stabcert/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "stabcert/errors.hpp"
#include "stabcert/parallel.hpp"
#include "stabcert/rng.hpp"

namespace stabcert {

namespace {

Vec draw_initial_state(SplitMix64& rng, int dim, double r0, bool outer_shell) {
    const double radius = outer_shell ? rng.uniform(0.9 * r0, r0)
                                      : r0 * std::pow(rng.next_double(), 1.0 / dim);
    if (dim == 1) return {rng.next_double() < 0.5 ? -radius : radius};
    Vec dir(dim);
    double n = 0.0;
    do {
        for (int i = 0; i < dim; i += 2) {
            const double u1 = std::max(rng.next_double(), 1e-300);
            const double u2 = rng.next_double();
            const double r = std::sqrt(-2.0 * std::log(u1));
            dir[i] = r * std::cos(2.0 * M_PI * u2);
            if (i + 1 < dim) dir[i + 1] = r * std::sin(2.0 * M_PI * u2);
        }
        n = norm2(dir);
    } while (n == 0.0);
    for (double& v : dir) v *= radius / n;
    return dir;
}

}  // namespace

EnvelopeReport monte_carlo_envelope(const SystemModel& model, const StabilityParams& params,
                                    std::size_t n_traj, double dt, std::size_t n_steps,
                                    std::uint64_t seed, int threads) {
    if (n_traj == 0) throw std::invalid_argument("monte_carlo_envelope: n_traj must be >= 1");

    EnvelopeReport report;
    report.n_traj = n_traj;
    report.dt = dt;
    report.chatter_floor = 2.0 * model.jump_M * dt;

    std::vector<std::uint8_t> violated(n_traj, 0);
    std::vector<double> margins(n_traj, std::numeric_limits<double>::infinity());

    std::vector<double> decay(n_steps + 1);
    for (std::size_t s = 0; s <= n_steps; ++s)
        decay[s] = std::exp(-params.lambda * static_cast<double>(s) * dt);

    // Per-trajectory RNG streams make the outcome a pure function of
    // (seed, j); the per-time profile is merged by max, so the worker
    // count cannot change any reported number.
    const auto n_workers =
        std::min<std::size_t>(resolve_thread_count(threads), std::max<std::size_t>(n_traj, 1));
    std::vector<std::vector<double>> profiles(n_workers,
                                              std::vector<double>(n_steps + 1, 0.0));
    parallel_for(n_workers, threads, [&](std::size_t w) {
        std::vector<double>& profile = profiles[w];
        const std::size_t lo = n_traj * w / n_workers;
        const std::size_t hi = n_traj * (w + 1) / n_workers;
        Stepper stepper(model.dim);
        for (std::size_t j = lo; j < hi; ++j) {
            SplitMix64 rng = SplitMix64::substream(seed, j);
            Vec x = draw_initial_state(rng, model.dim, params.r0, j % 2 == 0);
            const double n0 = norm2(x);
            double margin = std::numeric_limits<double>::infinity();
            bool bad = false;
            for (std::size_t s = 0; s <= n_steps; ++s) {
                const double nx = norm2(x);
                const double envelope = params.k * n0 * decay[s] + report.chatter_floor;
                margin = std::min(margin, envelope - nx);
                if (nx > envelope) bad = true;
                profile[s] = std::max(profile[s], nx);
                if (s < n_steps) stepper.step(model, x, dt, IntegratorKind::RK4);
            }
            violated[j] = bad ? 1 : 0;
            margins[j] = margin;
        }
    });

    report.max_norm_profile.assign(n_steps + 1, 0.0);
    for (const auto& profile : profiles)
        for (std::size_t s = 0; s <= n_steps; ++s)
            report.max_norm_profile[s] = std::max(report.max_norm_profile[s], profile[s]);

    report.envelope_profile.resize(n_steps + 1);
    for (std::size_t s = 0; s <= n_steps; ++s)
        report.envelope_profile[s] = params.k * params.r0 * decay[s] + report.chatter_floor;

    report.violations = 0;
    report.worst_margin = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n_traj; ++j) {
        report.violations += violated[j];
        report.worst_margin = std::min(report.worst_margin, margins[j]);
    }
    return report;
}

FittedParams fit_exponential_params(const std::vector<Trajectory>& trajectories, double safety,
                                    double chatter_floor) {
    if (trajectories.empty())
        throw std::invalid_argument("fit_exponential_params: no trajectories");
    if (safety <= 0.0 || safety > 1.0)
        throw std::invalid_argument("fit_exponential_params: safety must be in (0, 1]");

    std::size_t len = 0;
    for (const auto& t : trajectories) len = std::max(len, t.states.size());
    if (len < 2) throw NoDecayError("fit_exponential_params: trajectories too short");
    const double dt = trajectories.front().dt;

    // Upper envelope of the normalized norms and of the raw norms.
    std::vector<double> ratio(len, 0.0), max_norm(len, 0.0);
    bool any_usable = false;
    for (const auto& t : trajectories) {
        const double n0 = norm2(t.states.front());
        for (std::size_t s = 0; s < t.states.size(); ++s) {
            const double n = norm2(t.states[s]);
            max_norm[s] = std::max(max_norm[s], n);
            if (n0 > 0.0) {
                ratio[s] = std::max(ratio[s], n / n0);
                any_usable = true;
            }
        }
    }
    if (!any_usable) throw NoDecayError("fit_exponential_params: all initial states are zero");

    // Pre-chatter window: stop where the ensemble max norm first sinks
    // below 5x the chatter floor (or at the first vanishing ratio).
    std::size_t window = len;
    for (std::size_t s = 0; s < len; ++s) {
        if (max_norm[s] < 5.0 * chatter_floor || ratio[s] <= 0.0) {
            window = s;
            break;
        }
    }
    if (window < 2) throw NoDecayError("fit_exponential_params: pre-chatter window too short");

    double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
    for (std::size_t s = 0; s < window; ++s) {
        const double t = static_cast<double>(s) * dt;
        const double y = std::log(ratio[s]);
        st += t;
        sy += y;
        stt += t * t;
        sty += t * y;
    }
    const double n = static_cast<double>(window);
    const double denom = n * stt - st * st;
    const double slope = (n * sty - st * sy) / denom;
    const double intercept = (sy - slope * st) / n;
    if (slope >= 0.0)
        throw NoDecayError("fit_exponential_params: envelope slope is nonnegative");

    FittedParams fit;
    fit.lambda_fit = -slope;
    fit.k_fit = std::max(std::exp(intercept), 1.0);
    fit.window_steps = window;
    fit.params.k = fit.k_fit / safety;
    fit.params.lambda = fit.lambda_fit * safety;
    double r0 = 0.0;
    for (const auto& t : trajectories) r0 = std::max(r0, norm2(t.states.front()));
    fit.params.r0 = r0;  // the ball the data actually came from
    return fit;
}

}  // namespace stabcert
