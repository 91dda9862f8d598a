#ifndef STABCERT_INTEGRATE_HPP
#define STABCERT_INTEGRATE_HPP

#include <ostream>
#include <string>
#include <vector>

#include "stabcert/dynamics.hpp"
#include "stabcert/linalg.hpp"

namespace stabcert {

enum class IntegratorKind { Euler, RK4 };

std::string to_string(IntegratorKind kind);
IntegratorKind integrator_from_string(const std::string& name);

/// Fixed-step trajectory: states[i] is the state at t0 + i*dt.
struct Trajectory {
    double dt = 0.0;
    std::vector<Vec> states;
    bool diverged = false;      // truncated after exceeding the divergence guard
    bool left_domain = false;   // some visited state had ||x|| > domain radius

    std::size_t steps() const { return states.empty() ? 0 : states.size() - 1; }
    const Vec& last() const { return states.back(); }
};

/// Reusable one-step integrator; owns the stage buffers so stepping does
/// not allocate. One instance per thread.
class Stepper {
  public:
    explicit Stepper(int dim) : k1_(dim), k2_(dim), k3_(dim), k4_(dim), tmp_(dim) {}

    /// Advances x in place by one step. Throws NonFiniteError if a stage
    /// or the result is non-finite.
    void step(const SystemModel& model, Vec& x, double dt, IntegratorKind kind);

  private:
    Vec k1_, k2_, k3_, k4_, tmp_;
};

/// One step of the chosen integrator starting from x.
Vec step(const SystemModel& model, const Vec& x, double dt, IntegratorKind kind);

/// N-step propagation recording every visited state. Truncates with
/// `diverged` set once ||x|| exceeds guard_factor * domain_radius.
Trajectory propagate(const SystemModel& model, const Vec& x0, double dt, std::size_t n_steps,
                     IntegratorKind kind, double guard_factor = 10.0);

/// Terminal state only; same semantics as propagate().last() but without
/// storing the path. `diverged`/`left_domain` report the same flags.
Vec propagate_terminal(const SystemModel& model, const Vec& x0, double dt, std::size_t n_steps,
                       IntegratorKind kind, double guard_factor = 10.0,
                       bool* diverged = nullptr, bool* left_domain = nullptr);

/// CSV export: header `t,x1,...,xn`, one row per state, full precision.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);

}  // namespace stabcert

#endif
