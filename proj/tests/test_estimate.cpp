#include <doctest.h>

#include <cmath>
#include <cstring>

#include "stabcert/errors.hpp"
#include "stabcert/estimate.hpp"
#include "stabcert/rng.hpp"

using namespace stabcert;

namespace {

const StabilityParams kSgnCubic{8.0 / 3.0, 3.0, 1.5};

std::vector<Trajectory> sgn_cubic_ensemble(std::size_t n_traj, std::size_t n_steps) {
    const SystemModel m = make_model("sgn-cubic");
    std::vector<Trajectory> trajs;
    SplitMix64 rng(101);
    for (std::size_t j = 0; j < n_traj; ++j) {
        const double mag =
            j % 2 == 0 ? rng.uniform(0.9 * 1.5, 1.5) : rng.uniform(0.0, 1.5);
        const double x0 = rng.next_double() < 0.5 ? -mag : mag;
        trajs.push_back(propagate(m, {x0}, 0.01, n_steps, IntegratorKind::RK4));
    }
    return trajs;
}

}  // namespace

TEST_CASE("envelope holds with the identified constants and fails with k = 1") {
    const SystemModel m = make_model("sgn-cubic");

    const EnvelopeReport good = monte_carlo_envelope(m, kSgnCubic, 500, 0.01, 500, 7);
    CHECK(good.violations == 0);
    CHECK(good.worst_margin > 0.0);
    CHECK(good.chatter_floor == doctest::Approx(0.08).epsilon(1e-15));
    CHECK(good.max_norm_profile.size() == 501);
    CHECK(good.envelope_profile.front() ==
          doctest::Approx(kSgnCubic.k * 1.5 + 0.08).epsilon(1e-12));

    StabilityParams no_overshoot = kSgnCubic;
    no_overshoot.k = 1.0;  // too small: the response needs overshoot headroom
    const EnvelopeReport bad = monte_carlo_envelope(m, no_overshoot, 500, 0.01, 500, 7);
    CHECK(bad.violations > 0);
    CHECK(bad.worst_margin < 0.0);
}

TEST_CASE("a single trajectory at the equilibrium never violates") {
    const SystemModel m = make_model("sgn-cubic");
    StabilityParams at_origin = kSgnCubic;
    at_origin.r0 = 0.0;  // the only possible draw is x0 = 0
    const EnvelopeReport rep = monte_carlo_envelope(m, at_origin, 1, 0.01, 100, 3);
    CHECK(rep.violations == 0);
}

TEST_CASE("envelope report is identical for any worker count") {
    const SystemModel m = make_model("sgn-cubic");
    const EnvelopeReport one = monte_carlo_envelope(m, kSgnCubic, 300, 0.01, 300, 99, 1);
    for (int threads : {4, 8}) {
        const EnvelopeReport many = monte_carlo_envelope(m, kSgnCubic, 300, 0.01, 300, 99, threads);
        CHECK(many.violations == one.violations);
        CHECK(std::memcmp(&many.worst_margin, &one.worst_margin, sizeof(double)) == 0);
        REQUIRE(many.max_norm_profile.size() == one.max_norm_profile.size());
        for (std::size_t s = 0; s < one.max_norm_profile.size(); ++s)
            CHECK(std::memcmp(&many.max_norm_profile[s], &one.max_norm_profile[s],
                              sizeof(double)) == 0);
    }
}

TEST_CASE("fit recovers the exact exponential of linear-1d") {
    const SystemModel lin = make_model("linear-1d");
    std::vector<Trajectory> trajs;
    for (double x0 : {0.2, -0.5, 1.0, -1.3, 0.7})
        trajs.push_back(propagate(lin, {x0}, 0.01, 500, IntegratorKind::RK4));

    const FittedParams fit = fit_exponential_params(trajs, 0.8);
    CHECK(fit.lambda_fit == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(fit.k_fit == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(fit.params.lambda == doctest::Approx(0.8).epsilon(1e-6));
    CHECK(fit.params.k == doctest::Approx(1.25).epsilon(1e-6));
    CHECK(fit.params.r0 == doctest::Approx(1.3).epsilon(1e-12));
}

TEST_CASE("fit on the sgn-cubic ensemble") {
    const auto trajs = sgn_cubic_ensemble(200, 500);
    const double floor = 2.0 * 4.0 * 0.01;
    const FittedParams fit = fit_exponential_params(trajs, 0.8, floor);

    // The least-squares slope of the pre-chatter upper envelope sits near
    // 1.7 for this system (frozen from the regression itself); the
    // identified lambda = 3 is an envelope constant, not an LS slope.
    CHECK(fit.lambda_fit > 1.45);
    CHECK(fit.lambda_fit < 2.1);
    CHECK(fit.k_fit >= 1.0);
    CHECK(fit.k_fit < 1.5);
    CHECK(fit.params.lambda * 0.8 <= 3.0);
    CHECK(fit.window_steps > 50);
    CHECK(fit.window_steps < 90);

    SUBCASE("margined envelope dominates the raw fit for all t >= 0") {
        for (int i = 0; i <= 1000; ++i) {
            const double t = 0.01 * i;
            CHECK(fit.params.k * std::exp(-fit.params.lambda * t) >=
                  fit.k_fit * std::exp(-fit.lambda_fit * t) - 1e-12);
        }
    }
}

TEST_CASE("fit failure modes") {
    const SystemModel lin = make_model("linear-1d");

    SUBCASE("all-zero initial states") {
        std::vector<Trajectory> zeros{propagate(lin, {0.0}, 0.01, 50, IntegratorKind::RK4)};
        CHECK_THROWS_AS(fit_exponential_params(zeros, 0.8), NoDecayError);
    }

    SUBCASE("flat envelope has no decay") {
        SystemModel still;
        still.dim = 1;
        still.name = "still";
        still.field = [](const Vec&, Vec& dx) { dx[0] = 0.0; };
        std::vector<Trajectory> flat{propagate(still, {0.5}, 0.01, 50, IntegratorKind::RK4)};
        CHECK_THROWS_AS(fit_exponential_params(flat, 0.8), NoDecayError);
    }

    SUBCASE("growth is rejected") {
        ModelOptions opts;
        opts.decay_rate = -0.5;
        const SystemModel grow = make_model("linear-1d", opts);
        std::vector<Trajectory> up{propagate(grow, {0.1}, 0.01, 50, IntegratorKind::RK4)};
        CHECK_THROWS_AS(fit_exponential_params(up, 0.8), NoDecayError);
    }

    SUBCASE("safety outside (0, 1]") {
        std::vector<Trajectory> t{propagate(lin, {1.0}, 0.01, 50, IntegratorKind::RK4)};
        CHECK_THROWS_AS(fit_exponential_params(t, 0.0), std::invalid_argument);
        CHECK_THROWS_AS(fit_exponential_params(t, 1.5), std::invalid_argument);
    }

    SUBCASE("empty input") {
        CHECK_THROWS_AS(fit_exponential_params({}, 0.8), std::invalid_argument);
    }
}
