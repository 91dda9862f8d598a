#include "stabcert/dynamics.hpp"

#include <cmath>
#include <limits>

#include "stabcert/errors.hpp"
#include "stabcert/rng.hpp"

namespace stabcert {

namespace {

// sgn(0) := 0 so the origin is an exact fixed point of the integrators.
double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// Uniform draw from the closed ball of the given radius.
Vec sample_in_ball(SplitMix64& rng, int dim, double radius) {
    if (dim == 1) return {rng.uniform(-radius, radius)};
    // Gaussian direction (Box-Muller) scaled to radius * U^(1/dim).
    Vec x(dim);
    for (int i = 0; i < dim; i += 2) {
        const double u1 = std::max(rng.next_double(), 1e-300);
        const double u2 = rng.next_double();
        const double r = std::sqrt(-2.0 * std::log(u1));
        x[i] = r * std::cos(2.0 * M_PI * u2);
        if (i + 1 < dim) x[i + 1] = r * std::sin(2.0 * M_PI * u2);
    }
    const double n = norm2(x);
    if (n == 0.0) return Vec(dim, 0.0);
    const double scale = radius * std::pow(rng.next_double(), 1.0 / dim) / n;
    for (double& v : x) v *= scale;
    return x;
}

double spectral_norm(const Matrix& a) {
    const std::size_t n = a.size();
    Matrix ata(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < n; ++k) s += a(k, i) * a(k, j);
            ata(i, j) = s;
        }
    const auto eigs = jacobi_eigenvalues(ata);
    return std::sqrt(std::max(eigs.back(), 0.0));
}

}  // namespace

Vec eval_dynamics(const SystemModel& model, const Vec& x, bool* out_of_domain) {
    if (out_of_domain) *out_of_domain = norm2(x) > model.domain_radius;
    Vec dx(model.dim, 0.0);
    model.field(x, dx);
    if (!all_finite(dx))
        throw NonFiniteError("eval_dynamics: non-finite derivative from model '" + model.name +
                             "'");
    return dx;
}

LMCheckReport empirical_LM_check(const SystemModel& model, std::size_t n_pairs,
                                 std::uint64_t seed) {
    if (n_pairs == 0) throw std::invalid_argument("empirical_LM_check: n_pairs must be >= 1");
    LMCheckReport report{-std::numeric_limits<double>::infinity(), Vec(model.dim, 0.0),
                         Vec(model.dim, 0.0), n_pairs};
    Vec fx(model.dim), fy(model.dim);
    for (std::size_t i = 0; i < n_pairs; ++i) {
        SplitMix64 rng = SplitMix64::substream(seed, i);
        const Vec x = sample_in_ball(rng, model.dim, model.domain_radius);
        const Vec y = sample_in_ball(rng, model.dim, model.domain_radius);
        model.field(x, fx);
        model.field(y, fy);
        const double residual =
            dist2(fx, fy) - model.lipschitz_L * dist2(x, y) - model.jump_M;
        if (residual > report.max_residual) {
            report.max_residual = residual;
            report.witness_x = x;
            report.witness_y = y;
        }
    }
    return report;
}

SystemModel make_model(const std::string& name, const ModelOptions& options) {
    if (name == "sgn-cubic") {
        SystemModel m;
        m.dim = 1;
        m.name = name;
        m.domain_radius = options.domain_radius.value_or(1.5);
        m.lipschitz_L = 0.75;
        m.jump_M = 4.0;
        m.field = [](const Vec& x, Vec& dx) { dx[0] = -2.0 * sgn(x[0]) + x[0] * x[0] * x[0] / 3.0; };
        return m;
    }
    if (name == "linear-1d") {
        SystemModel m;
        m.dim = 1;
        m.name = name;
        m.domain_radius = options.domain_radius.value_or(2.0);
        m.lipschitz_L = std::abs(options.decay_rate);
        m.jump_M = 0.0;
        const double rate = options.decay_rate;
        m.field = [rate](const Vec& x, Vec& dx) { dx[0] = -rate * x[0]; };
        return m;
    }
    if (name == "linear-nd") {
        if (!options.matrix)
            throw std::invalid_argument("linear-nd requires an n x n matrix (row-major)");
        const Matrix a = *options.matrix;
        SystemModel m;
        m.dim = static_cast<int>(a.size());
        m.name = name;
        m.domain_radius = options.domain_radius.value_or(2.0);
        m.lipschitz_L = spectral_norm(a);
        m.jump_M = 0.0;
        m.field = [a](const Vec& x, Vec& dx) {
            const std::size_t n = a.size();
            for (std::size_t i = 0; i < n; ++i) {
                double s = 0.0;
                for (std::size_t j = 0; j < n; ++j) s += a(i, j) * x[j];
                dx[i] = s;
            }
        };
        return m;
    }
    throw UnknownModelError("unknown model '" + name + "'; registered: sgn-cubic, linear-1d, linear-nd");
}

std::vector<std::string> registered_model_names() { return {"sgn-cubic", "linear-1d", "linear-nd"}; }

}  // namespace stabcert
