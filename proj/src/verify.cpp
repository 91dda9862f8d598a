#include "stabcert/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "stabcert/errors.hpp"
#include "stabcert/parallel.hpp"

namespace stabcert {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::ForwardInvariant: return "ForwardInvariant";
        case Verdict::Inconclusive: return "Inconclusive";
        case Verdict::Falsified: return "Falsified";
    }
    return "?";
}

double compute_gamma(double ell, const std::vector<double>& sample_energies) {
    if (sample_energies.empty())
        throw std::invalid_argument("compute_gamma: no sample energies");
    double max_e = sample_energies.front();
    for (double e : sample_energies) {
        if (!std::isfinite(e)) throw NonFiniteError("compute_gamma: non-finite energy");
        max_e = std::max(max_e, e);
    }
    return ell - max_e;
}

namespace {

std::string format_change(double from, double to) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%g -> %g", from, to);
    return buf;
}

void add_caveat(std::vector<std::string>& flags, const std::string& flag) {
    if (std::find(flags.begin(), flags.end(), flag) == flags.end()) flags.push_back(flag);
}

// One round of Algorithm: sample, simulate, compare. Fills everything in
// the report except verdict/adaptation.
void run_round(const SystemModel& model, const VerificationConfig& cfg, const EnergyForm& form,
               VerificationReport& rep) {
    SampleGrid grid = delta_grid(form, cfg.delta, cfg.grid_cap, cfg.strict_pitch);
    rep.samples = std::move(grid.points);
    rep.sample_energies.assign(rep.samples.size(), 0.0);

    std::vector<std::uint8_t> diverged(rep.samples.size(), 0);
    parallel_for(rep.samples.size(), cfg.threads, [&](std::size_t i) {
        bool div = false;
        const Vec terminal = propagate_terminal(model, rep.samples[i], cfg.dt, cfg.n_steps,
                                                cfg.kind, cfg.guard_factor, &div);
        rep.sample_energies[i] = energy(form, terminal);
        diverged[i] = div ? 1 : 0;
    });
    const auto n_diverged =
        static_cast<std::size_t>(std::count(diverged.begin(), diverged.end(), 1));
    if (n_diverged > 0)
        add_caveat(rep.caveat_flags, "divergence guard tripped for " +
                                         std::to_string(n_diverged) + " sample(s)");

    std::size_t argmax = 0;
    for (std::size_t i = 1; i < rep.sample_energies.size(); ++i)
        if (rep.sample_energies[i] > rep.sample_energies[argmax]) argmax = i;
    rep.max_energy = rep.sample_energies[argmax];
    rep.argmax_sample = rep.samples[argmax];
    rep.gamma = form.level_ell() - rep.max_energy;

    const PropagationBound pb =
        propagation_bound(model.lipschitz_L, model.jump_M, cfg.dt, cfg.n_steps, cfg.kind);
    if (pb.overflowed) add_caveat(rep.caveat_flags, "bound vacuous (a or b overflowed)");
    // The slope condition is sample-independent, so it is evaluated once
    // per round rather than inside the per-sample loop.
    rep.condition_lhs =
        slope_condition_lhs(form.k_E(), cfg.params, pb, cfg.horizon_T(), cfg.delta);

    rep.used_config = cfg;
    rep.used_ell = form.level_ell();
}

}  // namespace

VerificationConfig adapt_and_retry(const VerificationConfig& cfg,
                                   const VerificationReport& report, const EnergyForm& form,
                                   double* new_ell) {
    *new_ell = form.level_ell();
    if (static_cast<int>(report.adaptation_trace.size()) >= cfg.adapt_limit) return cfg;

    VerificationConfig next = cfg;
    if (report.gamma > 0.0) {
        // Slope condition is the blocker. Horizon first, sampling second.
        std::size_t cond_rounds = 0;
        for (const auto& ev : report.adaptation_trace)
            if (ev.change.rfind("ell", 0) != 0) ++cond_rounds;
        if (cond_rounds % 2 == 0)
            next.n_steps = cfg.n_steps * 2;
        else
            next.delta = cfg.delta / 2.0;
    } else {
        bool ell_already_shrunk = false;
        for (const auto& ev : report.adaptation_trace)
            if (ev.change.rfind("ell", 0) == 0) ell_already_shrunk = true;
        if (ell_already_shrunk) return cfg;  // stop: shrink ell only once
        *new_ell = form.level_ell() * 0.9;
    }
    return next;
}

VerificationReport check_invariance(const SystemModel& model, const VerificationConfig& cfg,
                                    const EnergyForm& form) {
    if (cfg.dt <= 0.0 || cfg.delta <= 0.0 || cfg.n_steps == 0)
        throw std::invalid_argument("check_invariance: dt, delta and n_steps must be positive");
    if (static_cast<std::size_t>(model.dim) != form.dim())
        throw std::invalid_argument("check_invariance: model and energy form dimensions differ");
    VerificationReport rep;
    VerificationConfig cur = cfg;
    EnergyForm cur_form = form;

    if (cfg.params.k * cfg.params.r0 > 1.0)
        add_caveat(rep.caveat_flags,
                   "k*r0 > 1: energy slope bound uses k_E beyond its unit-ball premise");
    if (form.level_ell() > 0.5 * form.k_E() * cfg.params.r0 * cfg.params.r0)
        add_caveat(rep.caveat_flags,
                   "ell > k_E*r0^2/2: samples may start outside the stability ball");

    for (int round = 0;; ++round) {
        run_round(model, cur, cur_form, rep);

        if (rep.max_energy > cur_form.level_ell()) {
            rep.verdict = Verdict::Falsified;
            return rep;
        }
        if (rep.gamma > 0.0 && rep.condition_lhs <= rep.gamma) {
            rep.verdict = Verdict::ForwardInvariant;
            return rep;
        }

        double new_ell = cur_form.level_ell();
        const VerificationConfig next = adapt_and_retry(cur, rep, cur_form, &new_ell);
        AdaptationEvent ev;
        if (next.n_steps != cur.n_steps) {
            ev.change = "n_steps: " + std::to_string(cur.n_steps) + " -> " +
                        std::to_string(next.n_steps);
            ev.reason = "gamma positive but slope condition failed; longer horizon";
        } else if (next.delta != cur.delta) {
            ev.change = "delta: " + format_change(cur.delta, next.delta);
            ev.reason = "gamma positive but slope condition failed; tighter sampling";
        } else if (new_ell != cur_form.level_ell()) {
            ev.change = "ell: " + format_change(cur_form.level_ell(), new_ell);
            ev.reason = "gamma not positive; smaller candidate set";
        } else {
            rep.verdict = Verdict::Inconclusive;
            return rep;  // adapt limit reached (or schedule exhausted)
        }
        rep.adaptation_trace.push_back(ev);
        cur = next;
        cur_form = cur_form.with_level(new_ell);
    }
}

SweepResult sweep(const SystemModel& model, const VerificationConfig& cfg,
                  const EnergyForm& form, const std::vector<std::size_t>& step_grid,
                  const std::vector<std::size_t>& sample_counts) {
    if (step_grid.empty() || sample_counts.empty())
        throw std::invalid_argument("sweep: grids must be nonempty");

    SweepResult result;
    result.step_grid = step_grid;
    result.sample_counts = sample_counts;

    const double reach = std::sqrt(2.0 * form.level_ell() / form.k_min());
    for (std::size_t n_samp : sample_counts) {
        if (n_samp < 2) throw std::invalid_argument("sweep: sample counts must be >= 2");
        const double delta = reach / static_cast<double>(n_samp - 1);
        result.deltas.push_back(delta);

        SampleGrid grid = delta_grid(form, delta, cfg.grid_cap, cfg.strict_pitch);
        std::vector<double> row;
        row.reserve(step_grid.size());
        for (std::size_t n_steps : step_grid) {
            std::vector<double> energies(grid.points.size(), 0.0);
            parallel_for(grid.points.size(), cfg.threads, [&](std::size_t i) {
                const Vec terminal = propagate_terminal(model, grid.points[i], cfg.dt, n_steps,
                                                        cfg.kind, cfg.guard_factor);
                energies[i] = energy(form, terminal);
            });
            const double gamma = compute_gamma(form.level_ell(), energies);
            const double T = static_cast<double>(n_steps) * cfg.dt;
            const PropagationBound pb =
                propagation_bound(model.lipschitz_L, model.jump_M, cfg.dt, n_steps, cfg.kind);
            const double lhs = slope_condition_lhs(form.k_E(), cfg.params, pb, T, delta);
            row.push_back(gamma - lhs);
        }
        result.margins.push_back(std::move(row));
    }
    return result;
}

}  // namespace stabcert
