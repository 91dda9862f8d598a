#ifndef STABCERT_LINALG_HPP
#define STABCERT_LINALG_HPP

#include <cstddef>
#include <vector>

namespace stabcert {

using Vec = std::vector<double>;

double norm2(const Vec& x);
double dot(const Vec& x, const Vec& y);
double dist2(const Vec& x, const Vec& y);
bool all_finite(const Vec& x);

/// Dense square matrix, row-major.
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t n, double fill = 0.0) : n_(n), a_(n * n, fill) {}
    Matrix(std::size_t n, std::vector<double> rowmajor);

    static Matrix identity(std::size_t n);
    static Matrix diagonal(const std::vector<double>& d);

    std::size_t size() const { return n_; }
    double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
    const std::vector<double>& data() const { return a_; }

    Vec apply(const Vec& x) const;
    bool is_symmetric(double tol) const;

  private:
    std::size_t n_ = 0;
    std::vector<double> a_;
};

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
/// Sweeps until the off-diagonal mass drops below `rel_tol` times the
/// Frobenius norm (at most `max_sweeps` sweeps). If `vectors` is non-null
/// it receives the orthogonal matrix whose columns are the eigenvectors,
/// ordered like the returned values (ascending).
std::vector<double> jacobi_eigenvalues(const Matrix& sym, Matrix* vectors = nullptr,
                                       double rel_tol = 1e-12, int max_sweeps = 100);

}  // namespace stabcert

#endif
