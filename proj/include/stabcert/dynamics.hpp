#ifndef STABCERT_DYNAMICS_HPP
#define STABCERT_DYNAMICS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "stabcert/linalg.hpp"

namespace stabcert {

/// Closed Euclidean ball {x : ||x|| <= radius}.
struct DomainBall {
    double radius = 0.0;
    bool contains(const Vec& x) const { return norm2(x) <= radius; }
};

/// A vector field f(x) together with the regularity constants its author
/// declares: on the domain ball of radius `domain_radius`,
/// ||f(x) - f(y)|| <= lipschitz_L * ||x - y|| + jump_M, where jump_M
/// accounts for discontinuities. The origin must be an equilibrium of the
/// stored selection (field(0) == 0).
struct SystemModel {
    int dim = 1;
    std::function<void(const Vec& x, Vec& dx)> field;
    double domain_radius = 1.0;
    double lipschitz_L = 0.0;
    double jump_M = 0.0;
    std::string name;

    DomainBall domain() const { return DomainBall{domain_radius}; }
};

/// Evaluates f(x). Throws NonFiniteError if any output entry is not
/// finite. Evaluation outside the domain ball is allowed (the caller
/// flags it); pass `out_of_domain` to learn whether ||x|| exceeded the
/// declared radius.
Vec eval_dynamics(const SystemModel& model, const Vec& x, bool* out_of_domain = nullptr);

/// Worst observed residual of the declared (L, M) envelope over randomly
/// sampled pairs in the domain ball.
struct LMCheckReport {
    double max_residual;   // max ||f(x)-f(y)|| - L||x-y|| - M; <= 0 means consistent
    Vec witness_x;
    Vec witness_y;
    std::size_t n_pairs;
    bool consistent() const { return max_residual <= 0.0; }
};

LMCheckReport empirical_LM_check(const SystemModel& model, std::size_t n_pairs,
                                 std::uint64_t seed);

/// Options for registry-built models.
struct ModelOptions {
    double decay_rate = 1.0;                     // linear-1d: xdot = -decay_rate * x
    std::optional<Matrix> matrix;                // linear-nd: xdot = A x
    std::optional<double> domain_radius;         // override the built-in default
};

/// Builds a registered model by name. Built-ins: "sgn-cubic", "linear-1d",
/// "linear-nd" (requires options.matrix). Throws UnknownModelError for
/// unregistered names.
SystemModel make_model(const std::string& name, const ModelOptions& options = {});

std::vector<std::string> registered_model_names();

}  // namespace stabcert

#endif
