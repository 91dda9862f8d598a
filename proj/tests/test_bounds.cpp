#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "stabcert/bounds.hpp"
#include "stabcert/rng.hpp"

using namespace stabcert;

namespace {
const StabilityParams kSgnCubic{8.0 / 3.0, 3.0, 1.5};
constexpr double kL = 0.75;
constexpr double kM = 4.0;
constexpr double kDt = 0.01;
}  // namespace

TEST_CASE("alpha at the worked step sizes") {
    CHECK(alpha(kL, 0.01) == doctest::Approx(0.010037593925781249).epsilon(1e-15));
    CHECK(alpha(kL, 0.001) == doctest::Approx(0.0010003750937675781).epsilon(1e-15));
    CHECK(alpha(kL, 0.5) == doctest::Approx(0.6065673828125).epsilon(1e-15));
    CHECK(alpha(0.0, 0.3) == 0.3);  // series collapses to dt
    CHECK_THROWS_AS(alpha(-1.0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(alpha(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("one-step bounds") {
    const StepBound rk = step_bound(kL, kM, kDt, IntegratorKind::RK4);
    CHECK(rk.multiplier == doctest::Approx(1.007528195444336).epsilon(1e-15));
    CHECK(rk.offset == doctest::Approx(0.040150375703125).epsilon(1e-15));
    // printed forms: 1.0075 and 0.040
    CHECK(std::abs(rk.multiplier - 1.0075) < 5e-5);
    CHECK(std::abs(rk.offset - 0.040) < 5e-4);

    const StepBound euler = step_bound(kL, kM, kDt, IntegratorKind::Euler);
    CHECK(euler.multiplier == doctest::Approx(1.0075).epsilon(1e-15));
    CHECK(euler.offset == doctest::Approx(0.04).epsilon(1e-15));

    CHECK(step_bound(kL, 0.0, kDt, IntegratorKind::RK4).offset == 0.0);  // Lipschitz-only
}

TEST_CASE("propagation bound closed forms") {
    SUBCASE("empty composition") {
        const PropagationBound pb = propagation_bound(kL, kM, kDt, 0, IntegratorKind::RK4);
        CHECK(pb.a == 1.0);
        CHECK(pb.b == 0.0);
    }

    SUBCASE("N = 2000") {
        const PropagationBound pb = propagation_bound(kL, kM, kDt, 2000, IntegratorKind::RK4);
        CHECK(pb.a == doctest::Approx(3.27e6).epsilon(0.01).scale(0.0));
        CHECK(pb.b == doctest::Approx(1.74e7).epsilon(0.01).scale(0.0));
        CHECK_FALSE(pb.overflowed);
    }

    SUBCASE("N = 300 needs full-precision alpha") {
        const PropagationBound pb = propagation_bound(kL, kM, kDt, 300, IntegratorKind::RK4);
        CHECK(pb.a == doctest::Approx(9.4877358357994162).epsilon(1e-12));
        CHECK(pb.a > 9.45);  // alpha pre-rounded to 0.01 would land at 9.408
        CHECK(pb.b == doctest::Approx(45.267924457596344).epsilon(1e-12));
    }

    SUBCASE("L = 0 degenerates to N * offset") {
        const PropagationBound pb = propagation_bound(0.0, 2.0, 0.1, 7, IntegratorKind::RK4);
        CHECK(pb.a == 1.0);
        CHECK(pb.b == doctest::Approx(7 * 0.1 * 2.0).epsilon(1e-15));
    }

    SUBCASE("overflow saturates with a flag") {
        const PropagationBound pb = propagation_bound(5.0, 1.0, 1.0, 1'000'000,
                                                      IntegratorKind::RK4);
        CHECK(pb.overflowed);
        CHECK(std::isinf(pb.a));
    }
}

TEST_CASE("closed-form b equals the literal sum to 1e-12 relative") {
    SplitMix64 rng(31);
    for (int trial = 0; trial < 40; ++trial) {
        const double L = rng.uniform(0.0, 2.0);
        const double M = rng.uniform(0.0, 5.0);
        const double dt = rng.uniform(1e-3, 0.2);
        const auto n = static_cast<std::size_t>(rng.uniform(1.0, 10'000.0));
        for (IntegratorKind kind : {IntegratorKind::Euler, IntegratorKind::RK4}) {
            const StepBound sb = step_bound(L, M, dt, kind);
            const PropagationBound pb = propagation_bound(L, M, dt, n, kind);
            if (pb.overflowed) continue;  // saturation has its own test
            const double brute = oracles::brute_force_offset_sum(sb.multiplier, sb.offset, n);
            CHECK(pb.b == doctest::Approx(brute).epsilon(1e-12));
        }
    }
}

TEST_CASE("exponential bound") {
    CHECK(exponential_bound(kSgnCubic, 3.0) ==
          doctest::Approx(8.0 * std::exp(-9.0)).epsilon(1e-14));
    CHECK(exponential_bound(kSgnCubic, 3.0) == doctest::Approx(9.873e-4).epsilon(1e-3).scale(0.0));
    CHECK(exponential_bound(kSgnCubic, 0.0) == doctest::Approx(8.0).epsilon(1e-14));
}

TEST_CASE("square-root bound at the worked horizons") {
    SUBCASE("T = 3, N = 300") {
        const PropagationBound pb = propagation_bound(kL, kM, kDt, 300, IntegratorKind::RK4);
        const double e = exponential_bound(kSgnCubic, 3.0);
        CHECK(e * pb.a == doctest::Approx(0.0094).epsilon(0.02).scale(0.0));
        CHECK(e * pb.b == doctest::Approx(0.0447).epsilon(0.02).scale(0.0));
        const double dist = 0.3;
        CHECK(sqrt_bound(kSgnCubic, pb, 3.0, dist) ==
              doctest::Approx(std::sqrt(e * pb.a * dist + e * pb.b)).epsilon(1e-15));
    }

    SUBCASE("T = 4, N = 400") {
        const PropagationBound pb = propagation_bound(kL, kM, kDt, 400, IntegratorKind::RK4);
        const double e = exponential_bound(kSgnCubic, 4.0);
        CHECK(e * pb.a == doctest::Approx(9.87e-4).epsilon(0.01).scale(0.0));
        CHECK(e * pb.b == doctest::Approx(0.005).epsilon(0.05).scale(0.0));
    }

    SUBCASE("degenerate dist = 0, b = 0") {
        const PropagationBound pb = propagation_bound(kL, 0.0, kDt, 100, IntegratorKind::RK4);
        CHECK(sqrt_bound(kSgnCubic, pb, 1.0, 0.0) == 0.0);
    }
}

TEST_CASE("slope condition lhs") {
    const PropagationBound pb400 = propagation_bound(kL, kM, kDt, 400, IntegratorKind::RK4);
    const PropagationBound pb300 = propagation_bound(kL, kM, kDt, 300, IntegratorKind::RK4);

    // delta = 0 floor values of the two worked horizons
    CHECK(slope_condition_lhs(1.0, kSgnCubic, pb400, 4.0, 0.0) ==
          doctest::Approx(std::sqrt(0.005)).epsilon(2e-3).scale(0.0));
    CHECK(slope_condition_lhs(1.0, kSgnCubic, pb300, 3.0, 0.0) ==
          doctest::Approx(std::sqrt(0.0447)).epsilon(2e-3).scale(0.0));

    // linear in k_E
    const double base = slope_condition_lhs(1.0, kSgnCubic, pb400, 4.0, 0.0);
    CHECK(slope_condition_lhs(2.0, kSgnCubic, pb400, 4.0, 0.0) ==
          doctest::Approx(2.0 * base).epsilon(1e-15));
}

TEST_CASE("first horizon with both inner terms below 1e-3 is near 5 s") {
    double first = -1.0;
    for (int i = 1; i <= 100; ++i) {
        const double T = 0.1 * i;
        const auto n = static_cast<std::size_t>(std::llround(T / kDt));
        const PropagationBound pb = propagation_bound(kL, kM, kDt, n, IntegratorKind::RK4);
        const double e = exponential_bound(kSgnCubic, T);
        if (e * pb.a < 1e-3 && e * pb.b < 1e-3) {
            first = T;
            break;
        }
    }
    CHECK(first >= 4.5);
    CHECK(first <= 5.5);
    CHECK(first == doctest::Approx(4.8));
}

TEST_CASE("a and b blow up by T = 10 s") {
    const PropagationBound pb = propagation_bound(kL, kM, kDt, 1000, IntegratorKind::RK4);
    CHECK(pb.a > 100.0);
    CHECK(pb.b > 100.0);
}

TEST_CASE("monotonicity of the bounds") {
    const PropagationBound base = propagation_bound(kL, kM, kDt, 100, IntegratorKind::RK4);

    CHECK(propagation_bound(kL, kM, kDt, 200, IntegratorKind::RK4).a >= base.a);
    CHECK(propagation_bound(kL, kM, kDt, 200, IntegratorKind::RK4).b >= base.b);
    CHECK(propagation_bound(kL + 0.5, kM, kDt, 100, IntegratorKind::RK4).a >= base.a);
    CHECK(propagation_bound(kL, kM + 1.0, kDt, 100, IntegratorKind::RK4).b >= base.b);
    CHECK(propagation_bound(kL, kM, kDt * 2, 100, IntegratorKind::RK4).a >= base.a);
    CHECK(propagation_bound(kL, kM, kDt * 2, 100, IntegratorKind::RK4).b >= base.b);

    CHECK(exponential_bound(kSgnCubic, 2.0) < exponential_bound(kSgnCubic, 1.0));
    StabilityParams faster = kSgnCubic;
    faster.lambda *= 2.0;
    CHECK(exponential_bound(faster, 1.0) < exponential_bound(kSgnCubic, 1.0));
}

TEST_CASE("bounds table rows carry consistent terms") {
    const auto rows =
        bounds_table(kL, kM, kDt, IntegratorKind::RK4, kSgnCubic, {1.0, 2.0, 3.0});
    REQUIRE(rows.size() == 3);
    for (const auto& r : rows) {
        CHECK(r.sqrt_a_term == doctest::Approx(r.exp_bound * r.a).epsilon(1e-15));
        CHECK(r.sqrt_b_term == doctest::Approx(r.exp_bound * r.b).epsilon(1e-15));
    }
    CHECK(rows[2].a == doctest::Approx(9.4877358357994162).epsilon(1e-12));
}
