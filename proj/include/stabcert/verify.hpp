#ifndef STABCERT_VERIFY_HPP
#define STABCERT_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "stabcert/bounds.hpp"
#include "stabcert/dynamics.hpp"
#include "stabcert/energy.hpp"
#include "stabcert/integrate.hpp"
#include "stabcert/sample.hpp"

namespace stabcert {

enum class Verdict { ForwardInvariant, Inconclusive, Falsified };

std::string to_string(Verdict v);

struct VerificationConfig {
    double dt = 0.01;
    std::size_t n_steps = 100;
    double delta = 0.1;
    StabilityParams params;
    IntegratorKind kind = IntegratorKind::RK4;
    int adapt_limit = 8;

    int threads = 0;                  // 0 = hardware concurrency
    std::size_t grid_cap = 10'000'000;
    bool strict_pitch = false;
    double guard_factor = 10.0;

    double horizon_T() const { return static_cast<double>(n_steps) * dt; }
};

struct AdaptationEvent {
    std::string change;  // e.g. "n_steps: 100 -> 200"
    std::string reason;
};

struct VerificationReport {
    Verdict verdict = Verdict::Inconclusive;
    double gamma = 0.0;
    double condition_lhs = 0.0;
    double max_energy = 0.0;
    Vec argmax_sample;

    std::vector<Vec> samples;            // the delta-grid actually used
    std::vector<double> sample_energies; // terminal energies, same order

    std::vector<AdaptationEvent> adaptation_trace;
    std::vector<std::string> caveat_flags;

    VerificationConfig used_config;  // parameters of the final round
    double used_ell = 0.0;
};

/// gamma = ell - max(sample energies); may be negative.
double compute_gamma(double ell, const std::vector<double>& sample_energies);

/// Algorithm: build the delta-grid over {E <= ell}, propagate every sample
/// n_steps, compare gamma = ell - max E against the slope-condition bound.
/// ForwardInvariant iff gamma > 0 and the bound <= gamma; Falsified iff a
/// sample's terminal energy exceeds ell (hard counterexample, reported);
/// otherwise the config is adapted (see adapt_and_retry) for up to
/// adapt_limit rounds before settling on Inconclusive.
VerificationReport check_invariance(const SystemModel& model, const VerificationConfig& cfg,
                                    const EnergyForm& form);

/// Deterministic adaptation schedule for an Inconclusive round: while the
/// slope condition is the blocker, double n_steps first and halve delta on
/// alternate rounds (longer horizons shrink the bound faster than tighter
/// sampling); when gamma <= 0, shrink ell by 10% once. Returns the config
/// unchanged once report.adaptation_trace has adapt_limit entries.
VerificationConfig adapt_and_retry(const VerificationConfig& cfg,
                                   const VerificationReport& report, const EnergyForm& form,
                                   double* new_ell);

/// Margin matrix gamma - condition_lhs over a grid of horizons (given as
/// step counts) and sample-set sizes. delta is implied by the sample count
/// through the 1-D pitch relation delta = reach / (n_samp - 1).
struct SweepResult {
    std::vector<std::size_t> step_grid;
    std::vector<std::size_t> sample_counts;
    std::vector<double> deltas;                 // per sample count
    std::vector<std::vector<double>> margins;   // [sample_count][step]
};

SweepResult sweep(const SystemModel& model, const VerificationConfig& cfg,
                  const EnergyForm& form, const std::vector<std::size_t>& step_grid,
                  const std::vector<std::size_t>& sample_counts);

}  // namespace stabcert

#endif
