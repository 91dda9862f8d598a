#include "stabcert/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "stabcert/errors.hpp"

namespace stabcert {

double norm2(const Vec& x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

double dot(const Vec& x, const Vec& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

double dist2(const Vec& x, const Vec& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        s += d * d;
    }
    return std::sqrt(s);
}

bool all_finite(const Vec& x) {
    return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

Matrix::Matrix(std::size_t n, std::vector<double> rowmajor) : n_(n), a_(std::move(rowmajor)) {
    if (a_.size() != n * n)
        throw std::invalid_argument("Matrix: row-major data has " + std::to_string(a_.size()) +
                                    " entries, expected " + std::to_string(n * n));
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diagonal(const std::vector<double>& d) {
    Matrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

Vec Matrix::apply(const Vec& x) const {
    Vec y(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n_; ++j) s += a_[i * n_ + j] * x[j];
        y[i] = s;
    }
    return y;
}

bool Matrix::is_symmetric(double tol) const {
    double scale = 0.0;
    for (double v : a_) scale = std::max(scale, std::abs(v));
    const double abs_tol = tol * std::max(scale, 1.0);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i + 1; j < n_; ++j)
            if (std::abs((*this)(i, j) - (*this)(j, i)) > abs_tol) return false;
    return true;
}

namespace {

double off_diagonal_norm(const Matrix& a) {
    const std::size_t n = a.size();
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) s += 2.0 * a(i, j) * a(i, j);
    return std::sqrt(s);
}

double frobenius_norm(const Matrix& a) {
    double s = 0.0;
    for (double v : a.data()) s += v * v;
    return std::sqrt(s);
}

}  // namespace

std::vector<double> jacobi_eigenvalues(const Matrix& sym, Matrix* vectors, double rel_tol,
                                       int max_sweeps) {
    if (!sym.is_symmetric(1e-12))
        throw NotSymmetricError("jacobi_eigenvalues: matrix is not symmetric within 1e-12");

    const std::size_t n = sym.size();
    Matrix a = sym;
    Matrix v = Matrix::identity(n);
    const double fro = frobenius_norm(a);
    const double stop = rel_tol * std::max(fro, 1e-300);

    for (int sweep = 0; sweep < max_sweeps && off_diagonal_norm(a) > stop; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                // smaller-angle root keeps the rotation stable
                double t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
                if (theta < 0.0) t = -t;
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<double> eigs(n);
    for (std::size_t i = 0; i < n; ++i) eigs[i] = a(i, i);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return eigs[i] < eigs[j]; });

    std::vector<double> sorted(n);
    for (std::size_t i = 0; i < n; ++i) sorted[i] = eigs[order[i]];
    if (vectors) {
        Matrix vs(n);
        for (std::size_t col = 0; col < n; ++col)
            for (std::size_t row = 0; row < n; ++row) vs(row, col) = v(row, order[col]);
        *vectors = vs;
    }
    return sorted;
}

}  // namespace stabcert
