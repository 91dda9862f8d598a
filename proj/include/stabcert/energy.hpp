#ifndef STABCERT_ENERGY_HPP
#define STABCERT_ENERGY_HPP

#include "stabcert/bounds.hpp"
#include "stabcert/integrate.hpp"
#include "stabcert/linalg.hpp"

namespace stabcert {

/// Positive-definite quadratic energy E(x) = 1/2 x^T P x with sublevel
/// threshold `level_ell`. Construction validates symmetry and positive
/// definiteness, and caches the eigen-decomposition (k_E is the largest
/// eigenvalue, k_min the smallest).
class EnergyForm {
  public:
    EnergyForm(Matrix p, double level_ell);

    const Matrix& P() const { return p_; }
    double k_E() const { return k_max_; }
    double k_min() const { return k_min_; }
    double level_ell() const { return level_ell_; }
    std::size_t dim() const { return p_.size(); }

    const std::vector<double>& eigenvalues() const { return eigs_; }
    const Matrix& eigenvectors() const { return vecs_; }  // columns, ascending order

    EnergyForm with_level(double new_ell) const;

  private:
    Matrix p_;
    double level_ell_;
    std::vector<double> eigs_;
    Matrix vecs_;
    double k_min_;
    double k_max_;
};

/// E(x) = 1/2 x^T P x.
double energy(const EnergyForm& form, const Vec& x);

/// Largest eigenvalue of a symmetric matrix (cyclic Jacobi, relative
/// tolerance 1e-12). Throws NotSymmetricError if the input is not
/// symmetric.
double max_eigenvalue(const Matrix& sym);

/// (k_E / 2) k^2 e^{-2 lambda elapsed} ||x0||^2: upper bound on the energy
/// of an exponentially stable trajectory `elapsed` seconds after x0.
double energy_bound(const EnergyForm& form, const StabilityParams& params, const Vec& x0,
                    double elapsed);

/// Trapezoidal quadrature of E along the trajectory.
double energy_integral(const EnergyForm& form, const Trajectory& traj);

/// T * energy_bound(form, params, x0, 0): constant upper bound on the
/// energy integral over a horizon of length T (the decaying factor is
/// taken at its supremum).
double energy_integral_bound(const EnergyForm& form, const StabilityParams& params,
                             const Vec& x0, double time_T);

/// Euclidean projection of x onto the sublevel set {E <= ell}. Returns x
/// unchanged when it is already inside; otherwise the closest boundary
/// point, nudged inward so that energy(result) <= ell holds exactly in
/// floating point.
Vec project_onto_sublevel(const EnergyForm& form, const Vec& x);

}  // namespace stabcert

#endif
