#include <doctest.h>

#include <cmath>
#include <sstream>

#include "stabcert/bounds.hpp"
#include "stabcert/integrate.hpp"
#include "stabcert/rng.hpp"

using namespace stabcert;

TEST_CASE("single steps on linear-1d") {
    const SystemModel m = make_model("linear-1d");
    CHECK(step(m, {1.0}, 0.1, IntegratorKind::Euler)[0] == doctest::Approx(0.9).epsilon(1e-15));
    // RK4 on a linear scalar is the 4th-order truncated exponential
    CHECK(step(m, {1.0}, 0.1, IntegratorKind::RK4)[0] ==
          doctest::Approx(0.9048375).epsilon(1e-15));
}

TEST_CASE("the origin is a fixed point of both integrators on sgn-cubic") {
    const SystemModel m = make_model("sgn-cubic");
    CHECK(step(m, {0.0}, 0.01, IntegratorKind::Euler)[0] == 0.0);
    CHECK(step(m, {0.0}, 0.01, IntegratorKind::RK4)[0] == 0.0);
}

TEST_CASE("RK4 matches the truncated exponential per step to machine precision") {
    const SystemModel m = make_model("linear-1d");
    SplitMix64 rng(11);
    for (int i = 0; i < 200; ++i) {
        const double x = rng.uniform(-2.0, 2.0);
        const double dt = rng.uniform(1e-4, 0.5);
        const double expected =
            x * (1.0 - dt + dt * dt / 2.0 - dt * dt * dt / 6.0 + dt * dt * dt * dt / 24.0);
        CHECK(step(m, {x}, dt, IntegratorKind::RK4)[0] ==
              doctest::Approx(expected).epsilon(1e-15));
    }
}

TEST_CASE("propagate basics") {
    const SystemModel m = make_model("sgn-cubic");

    SUBCASE("nonpositive dt is rejected") {
        CHECK_THROWS_AS(propagate(m, {1.0}, 0.0, 10, IntegratorKind::RK4),
                        std::invalid_argument);
        CHECK_THROWS_AS(step(m, {1.0}, -0.1, IntegratorKind::Euler), std::invalid_argument);
    }

    SUBCASE("zero steps is the identity transition") {
        const Trajectory t = propagate(m, {1.2}, 0.01, 0, IntegratorKind::RK4);
        CHECK(t.states.size() == 1);
        CHECK(t.states[0][0] == 1.2);
        CHECK_FALSE(t.diverged);
    }

    SUBCASE("decay into the sliding chatter band") {
        const Trajectory t = propagate(m, {1.4}, 0.01, 500, IntegratorKind::RK4);
        CHECK(t.states.size() == 501);
        CHECK(std::abs(t.last()[0]) <= 0.03);
        CHECK_FALSE(t.diverged);
        CHECK_FALSE(t.left_domain);
    }

    SUBCASE("matches the closed-form exponential on linear-1d") {
        const SystemModel lin = make_model("linear-1d");
        const Trajectory t = propagate(lin, {1.0}, 0.01, 100, IntegratorKind::RK4);
        CHECK(std::abs(t.last()[0] - std::exp(-1.0)) < 1e-8);
    }
}

TEST_CASE("divergence guard truncates and flags") {
    ModelOptions opts;
    opts.decay_rate = -1.0;  // xdot = +x
    const SystemModel grow = make_model("linear-1d", opts);

    const Trajectory t = propagate(grow, {1.0}, 0.01, 1000, IntegratorKind::RK4);
    CHECK(t.diverged);
    CHECK(t.left_domain);
    CHECK(t.states.size() < 1001);  // truncated
    CHECK(norm2(t.last()) > 10.0 * grow.domain_radius);

    const Trajectory tighter = propagate(grow, {1.0}, 0.01, 1000, IntegratorKind::RK4, 3.0);
    CHECK(tighter.diverged);
    CHECK(tighter.states.size() < t.states.size());

    bool diverged = false, left = false;
    const Vec terminal =
        propagate_terminal(grow, {1.0}, 0.01, 1000, IntegratorKind::RK4, 10.0, &diverged, &left);
    CHECK(diverged);
    CHECK(left);
    CHECK(terminal[0] == doctest::Approx(t.last()[0]));
}

// The one- and N-step bound dominance properties from the step/propagation
// bounds; the acceptance suite reruns these at 1e5 pairs.
TEST_CASE("one-step bound dominance on random pairs") {
    const SystemModel m = make_model("sgn-cubic");
    const double dt = 0.01;
    for (IntegratorKind kind : {IntegratorKind::Euler, IntegratorKind::RK4}) {
        const StepBound sb = step_bound(m.lipschitz_L, m.jump_M, dt, kind);
        SplitMix64 rng(kind == IntegratorKind::Euler ? 21 : 22);
        std::size_t violations = 0;
        for (int i = 0; i < 10'000; ++i) {
            const Vec x{rng.uniform(-1.5, 1.5)};
            const Vec y{rng.uniform(-1.5, 1.5)};
            const double lhs = dist2(step(m, x, dt, kind), step(m, y, dt, kind));
            if (lhs > sb.multiplier * dist2(x, y) + sb.offset) ++violations;
        }
        CHECK(violations == 0);
    }
}

TEST_CASE("N-step bound dominance on random pairs") {
    const SystemModel m = make_model("sgn-cubic");
    const double dt = 0.01;
    const std::size_t n = 50;
    const PropagationBound pb = propagation_bound(m.lipschitz_L, m.jump_M, dt, n,
                                                  IntegratorKind::RK4);
    SplitMix64 rng(23);
    std::size_t violations = 0;
    for (int i = 0; i < 10'000; ++i) {
        const Vec x{rng.uniform(-1.5, 1.5)};
        const Vec y{rng.uniform(-1.5, 1.5)};
        const Vec fx = propagate_terminal(m, x, dt, n, IntegratorKind::RK4);
        const Vec fy = propagate_terminal(m, y, dt, n, IntegratorKind::RK4);
        if (dist2(fx, fy) > pb.a * dist2(x, y) + pb.b) ++violations;
    }
    CHECK(violations == 0);
}

TEST_CASE("trajectory CSV export") {
    const SystemModel m = make_model("linear-1d");
    const Trajectory t = propagate(m, {1.0}, 0.5, 3, IntegratorKind::Euler);
    std::ostringstream out;
    write_trajectory_csv(out, t);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "t,x1");
    std::size_t rows = 0;
    double last_x = 0.0;
    while (std::getline(in, line)) {
        ++rows;
        const auto comma = line.find(',');
        last_x = std::strtod(line.substr(comma + 1).c_str(), nullptr);
    }
    CHECK(rows == 4);
    // 17-significant-digit text round-trips bit-exactly
    CHECK(last_x == t.last()[0]);
}
