#include "stabcert/energy.hpp"

#include <cmath>
#include <stdexcept>

#include "stabcert/errors.hpp"

namespace stabcert {

EnergyForm::EnergyForm(Matrix p, double level_ell) : p_(std::move(p)), level_ell_(level_ell) {
    if (level_ell_ <= 0.0) throw std::invalid_argument("EnergyForm: level ell must be positive");
    if (!p_.is_symmetric(1e-12))
        throw NotSymmetricError("EnergyForm: P is not symmetric within 1e-12");
    eigs_ = jacobi_eigenvalues(p_, &vecs_);
    k_min_ = eigs_.front();
    k_max_ = eigs_.back();
    if (k_min_ <= 0.0)
        throw NotPositiveDefiniteError("EnergyForm: P has a nonpositive eigenvalue " +
                                       std::to_string(k_min_));
}

EnergyForm EnergyForm::with_level(double new_ell) const {
    EnergyForm copy = *this;
    if (new_ell <= 0.0) throw std::invalid_argument("EnergyForm: level ell must be positive");
    copy.level_ell_ = new_ell;
    return copy;
}

double energy(const EnergyForm& form, const Vec& x) {
    const Matrix& p = form.P();
    const std::size_t n = p.size();
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) row += p(i, j) * x[j];
        s += x[i] * row;
    }
    return 0.5 * s;
}

double max_eigenvalue(const Matrix& sym) { return jacobi_eigenvalues(sym).back(); }

double energy_bound(const EnergyForm& form, const StabilityParams& params, const Vec& x0,
                    double elapsed) {
    if (elapsed < 0.0) throw std::invalid_argument("energy_bound: elapsed must be nonnegative");
    const double n0 = norm2(x0);
    return 0.5 * form.k_E() * params.k * params.k * std::exp(-2.0 * params.lambda * elapsed) *
           n0 * n0;
}

double energy_integral(const EnergyForm& form, const Trajectory& traj) {
    if (traj.states.empty()) throw std::invalid_argument("energy_integral: empty trajectory");
    double prev = energy(form, traj.states.front());
    double sum = 0.0;
    for (std::size_t i = 1; i < traj.states.size(); ++i) {
        const double cur = energy(form, traj.states[i]);
        sum += 0.5 * (prev + cur) * traj.dt;
        prev = cur;
    }
    return sum;
}

double energy_integral_bound(const EnergyForm& form, const StabilityParams& params,
                             const Vec& x0, double time_T) {
    if (time_T < 0.0)
        throw std::invalid_argument("energy_integral_bound: T must be nonnegative");
    return time_T * energy_bound(form, params, x0, 0.0);
}

Vec project_onto_sublevel(const EnergyForm& form, const Vec& x) {
    const double ell = form.level_ell();
    if (energy(form, x) <= ell) return x;

    // In the eigenbasis the projection is p_i = y_i / (1 + mu * d_i) with
    // mu >= 0 chosen so the result sits on the boundary. g(mu) is strictly
    // decreasing, so bisection is safe.
    const std::size_t n = form.dim();
    const Matrix& v = form.eigenvectors();
    const std::vector<double>& d = form.eigenvalues();

    Vec y(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t r = 0; r < n; ++r) s += v(r, i) * x[r];
        y[i] = s;
    }

    const auto boundary_energy = [&](double mu) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double pi = y[i] / (1.0 + mu * d[i]);
            s += d[i] * pi * pi;
        }
        return 0.5 * s;
    };

    double lo = 0.0;
    double hi = 1.0;
    while (boundary_energy(hi) > ell) hi *= 2.0;
    for (int it = 0; it < 200 && (hi - lo) > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (boundary_energy(mid) > ell ? lo : hi) = mid;
    }
    const double mu = hi;

    Vec p(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double pi = y[i] / (1.0 + mu * d[i]);
        for (std::size_t r = 0; r < n; ++r) p[r] += v(r, i) * pi;
    }

    // Pull inward until the membership test passes in exact doubles.
    double shrink = 1.0 - 1e-13;
    for (int guard = 0; guard < 64 && energy(form, p) > ell; ++guard) {
        for (double& c : p) c *= shrink;
        shrink -= 1e-13;
    }
    return p;
}

}  // namespace stabcert
