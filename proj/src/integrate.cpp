#include "stabcert/integrate.hpp"

#include <cmath>
#include <stdexcept>

#include "stabcert/csv.hpp"
#include "stabcert/errors.hpp"

namespace stabcert {

std::string to_string(IntegratorKind kind) {
    return kind == IntegratorKind::Euler ? "euler" : "rk4";
}

IntegratorKind integrator_from_string(const std::string& name) {
    if (name == "euler") return IntegratorKind::Euler;
    if (name == "rk4") return IntegratorKind::RK4;
    throw std::invalid_argument("unknown integrator '" + name + "' (expected euler or rk4)");
}

void Stepper::step(const SystemModel& model, Vec& x, double dt, IntegratorKind kind) {
    const int n = model.dim;
    model.field(x, k1_);
    if (kind == IntegratorKind::Euler) {
        for (int i = 0; i < n; ++i) x[i] += k1_[i] * dt;
    } else {
        for (int i = 0; i < n; ++i) tmp_[i] = x[i] + k1_[i] * (dt / 2.0);
        model.field(tmp_, k2_);
        for (int i = 0; i < n; ++i) tmp_[i] = x[i] + k2_[i] * (dt / 2.0);
        model.field(tmp_, k3_);
        for (int i = 0; i < n; ++i) tmp_[i] = x[i] + k3_[i] * dt;
        model.field(tmp_, k4_);
        for (int i = 0; i < n; ++i)
            x[i] += (dt / 6.0) * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
    }
    if (!all_finite(x))
        throw NonFiniteError("step: non-finite state from model '" + model.name + "'");
}

Vec step(const SystemModel& model, const Vec& x, double dt, IntegratorKind kind) {
    if (dt <= 0.0) throw std::invalid_argument("step: dt must be positive");
    if (!all_finite(x)) throw NonFiniteError("step: non-finite input state");
    Vec y = x;
    Stepper stepper(model.dim);
    stepper.step(model, y, dt, kind);
    return y;
}

Trajectory propagate(const SystemModel& model, const Vec& x0, double dt, std::size_t n_steps,
                     IntegratorKind kind, double guard_factor) {
    if (dt <= 0.0) throw std::invalid_argument("propagate: dt must be positive");
    Trajectory traj;
    traj.dt = dt;
    traj.states.reserve(n_steps + 1);
    traj.states.push_back(x0);
    traj.left_domain = norm2(x0) > model.domain_radius;

    Vec x = x0;
    Stepper stepper(model.dim);
    const double guard = guard_factor * model.domain_radius;
    for (std::size_t i = 0; i < n_steps; ++i) {
        stepper.step(model, x, dt, kind);
        const double n = norm2(x);
        if (n > model.domain_radius) traj.left_domain = true;
        traj.states.push_back(x);
        if (n > guard) {
            traj.diverged = true;
            break;
        }
    }
    return traj;
}

Vec propagate_terminal(const SystemModel& model, const Vec& x0, double dt, std::size_t n_steps,
                       IntegratorKind kind, double guard_factor, bool* diverged,
                       bool* left_domain) {
    if (dt <= 0.0) throw std::invalid_argument("propagate: dt must be positive");
    Vec x = x0;
    Stepper stepper(model.dim);
    const double guard = guard_factor * model.domain_radius;
    bool div = false;
    bool left = norm2(x0) > model.domain_radius;
    for (std::size_t i = 0; i < n_steps && !div; ++i) {
        stepper.step(model, x, dt, kind);
        const double n = norm2(x);
        if (n > model.domain_radius) left = true;
        if (n > guard) div = true;
    }
    if (diverged) *diverged = div;
    if (left_domain) *left_domain = left;
    return x;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
    CsvWriter csv(out);
    std::vector<std::string> names{"t"};
    const std::size_t dim = traj.states.empty() ? 0 : traj.states.front().size();
    for (std::size_t i = 1; i <= dim; ++i) names.push_back("x" + std::to_string(i));
    csv.header(names);
    for (std::size_t i = 0; i < traj.states.size(); ++i) {
        std::vector<double> row{static_cast<double>(i) * traj.dt};
        row.insert(row.end(), traj.states[i].begin(), traj.states[i].end());
        csv.row(row);
    }
}

}  // namespace stabcert
