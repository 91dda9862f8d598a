#ifndef STABCERT_ESTIMATE_HPP
#define STABCERT_ESTIMATE_HPP

#include <cstdint>
#include <vector>

#include "stabcert/bounds.hpp"
#include "stabcert/dynamics.hpp"
#include "stabcert/integrate.hpp"

namespace stabcert {

/// Outcome of stress-testing the exponential envelope
/// ||phi(t)|| <= k ||x0|| e^{-lambda t} + chatter_floor
/// against an ensemble of simulated trajectories. A fixed-step integrator
/// orbits a discontinuous equilibrium at amplitude ~||f|| dt, so a floor
/// of 2 M dt is added before counting violations.
struct EnvelopeReport {
    std::size_t n_traj = 0;
    std::size_t violations = 0;       // trajectories that exceeded the envelope
    double worst_margin = 0.0;        // min over steps of envelope - ||x||
    double chatter_floor = 0.0;
    std::vector<double> max_norm_profile;  // per-step max ||x|| over the ensemble
    std::vector<double> envelope_profile;  // k r0 e^{-lambda t} + floor per step
    double dt = 0.0;
};

/// Draws n_traj initial states in the r0-ball (half the draws biased to
/// the outer shell [0.9 r0, r0] where the envelope is tightest) and checks
/// the envelope at every step. Deterministic for a given (seed, n_traj)
/// regardless of thread count (per-trajectory counter RNG).
EnvelopeReport monte_carlo_envelope(const SystemModel& model, const StabilityParams& params,
                                    std::size_t n_traj, double dt, std::size_t n_steps,
                                    std::uint64_t seed, int threads = 0);

/// Heuristic (k, lambda) candidate from simulated data: least-squares line
/// through log(||phi(t)|| / ||x0||) of the ensemble's upper envelope, cut
/// off where the ensemble max norm first drops below 5x the chatter floor.
/// The fit is then margined: k inflated by 1/safety, lambda deflated by
/// safety. NOT a certificate input unless the caller opts in.
struct FittedParams {
    StabilityParams params;   // margined values
    double k_fit = 0.0;       // raw fit, before margins
    double lambda_fit = 0.0;
    std::size_t window_steps = 0;
};

FittedParams fit_exponential_params(const std::vector<Trajectory>& trajectories, double safety,
                                    double chatter_floor = 0.0);

}  // namespace stabcert

#endif
