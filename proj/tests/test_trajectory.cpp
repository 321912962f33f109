#include <catch_amalgamated.hpp>

#include <cmath>

#include "casimir/errors.hpp"
#include "casimir/trajectory.hpp"
#include "oracles.hpp"

using namespace casimir;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

TrajectoryParams sine(double a, double b, double g) { return {TrajectoryFamily::Sine, a, b, g}; }
TrajectoryParams smooth(double a, double b, double g) { return {TrajectoryFamily::SmoothedStart, a, b, g}; }

// 8th-order central difference of f' at t.
double fd8(const std::function<double(double)>& f, double t, double h) {
  const double c[] = {4.0 / 5, -1.0 / 5, 4.0 / 105, -1.0 / 280};
  double s = 0.0;
  for (int k = 1; k <= 4; ++k) s += c[k - 1] * (f(t + k * h) - f(t - k * h));
  return s / h;
}

}  // namespace

TEST_CASE("sine motion at t = 0 sits at the mean position") {
  const auto tr = make_sine(sine(0.35, 0.4, 0.7));
  CHECK(tr.position(0.0) == 0.175);
}

TEST_CASE("static mirror has zero velocity") {
  const auto tr = make_sine(sine(0.35, 0.0, 0.0));
  for (double t : {-3.2, 0.0, 0.41, 7.9}) {
    const Jet j = tr.eval(t);
    CHECK(j.value == 0.175);
    CHECK(j.d1 == 0.0);
  }
}

TEST_CASE("velocity at t = 0.3 matches an eighth-order finite difference") {
  const auto tr = make_sine(sine(0.35, 0.4, 0.7));
  const oracle::Motion a{0.35, 0.4, 0.7};
  CHECK_THAT(tr.eval(0.3).d1, WithinAbs(fd8(a, 0.3, 1e-3), 1e-8));
}

TEST_CASE("closed form agrees with the independent formula") {
  oracle::Rng rng(11);
  for (int i = 0; i < 200; ++i) {
    const auto m = oracle::random_motion(rng, i % 2 == 1);
    const auto tr = make_trajectory(m.smoothed ? smooth(m.alpha, m.beta, m.gamma) : sine(m.alpha, m.beta, m.gamma));
    const double t = rng.uniform(-2.0, 5.0);
    CHECK_THAT(tr.position(t), WithinAbs(m(t), 1e-15));
  }
}

TEST_CASE("derivatives of each order match finite differences of the order below") {
  oracle::Rng rng(12);
  for (int i = 0; i < 100; ++i) {
    const auto m = oracle::random_motion(rng, i % 2 == 1);
    const auto tr = make_trajectory(m.smoothed ? smooth(m.alpha, m.beta, m.gamma) : sine(m.alpha, m.beta, m.gamma));
    const double t = rng.uniform(0.05, 3.0);
    for (int k = 1; k <= 3; ++k) {
      const auto lower = [&](double s) { return tr.eval(s)[k - 1]; };
      const double exact = tr.eval(t)[k];
      const double fd = fd8(lower, t, 1e-3);
      CHECK(std::abs(exact - fd) <= 1e-7 * std::max(1.0, std::abs(exact)));
    }
  }
}

TEST_CASE("sine motion is exactly 1-periodic") {
  oracle::Rng rng(13);
  const auto tr = make_sine(sine(0.34, 0.2, 0.3));
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double t = rng.uniform(-50.0, 50.0);
    worst = std::max(worst, std::abs(tr.position(t + 1.0) - tr.position(t)));
  }
  CHECK(worst < 1e-14);
}

TEST_CASE("smoothed start rests before t = 0") {
  const auto tr = make_smoothed_start(smooth(0.34, 0.2, 0.3));
  for (double t : {-1.0, 0.0}) {
    const Jet j = tr.eval(t);
    CHECK(j.value == 0.17);
    CHECK(j.d1 == 0.0);
    CHECK(j.d2 == 0.0);
    CHECK(j.d3 == 0.0);
  }
}

TEST_CASE("smoothed start is C3 across t = 0") {
  const auto tr = make_smoothed_start(smooth(0.34, 0.2, 0.3));
  const Jet left = tr.eval(-1e-9);
  const Jet right = tr.eval(1e-9);
  for (int k = 0; k <= 3; ++k) CHECK(std::abs(left[k] - right[k]) < 1e-12);
}

TEST_CASE("smoothed start joins the sine motion by t = 2") {
  const auto s = make_smoothed_start(smooth(0.34, 0.2, 0.3));
  const auto p = make_sine(sine(0.34, 0.2, 0.3));
  CHECK(std::abs(s.position(2.0) - p.position(2.0)) < std::exp(-16.0) * 0.2 / (2 * oracle::pi));
  CHECK(s.periodic_counterpart().family() == TrajectoryFamily::Sine);
}

TEST_CASE("doppler factor") {
  const auto st = make_sine(sine(0.35, 0.0, 0.0));
  CHECK(doppler(st, 0.77) == 1.0);

  const auto tr = make_sine(sine(0.34, 0.2, 0.3));
  // a' = β cos(φ)(1 + 2γ sin 8πt) with φ = 2πt + γ sin²(4πt).
  const double phase = 2 * oracle::pi * 0.25 + 0.3 * std::pow(std::sin(oracle::pi), 2);
  const double v = 0.2 * std::cos(phase) * (1 + 0.6 * std::sin(2 * oracle::pi));
  CHECK_THAT(doppler(tr, 0.25), WithinRel((1 - v) / (1 + v), 1e-9));

  // At t = 0.25 the phase is π/2 and sin(4πt) = 0, so a' = 0 exactly.
  const auto plain = make_sine(sine(0.34, 0.2, 0.0));
  CHECK_THAT(doppler(plain, 0.25), WithinAbs(1.0, 1e-15));

  oracle::Rng rng(14);
  for (int i = 0; i < 500; ++i) {
    const auto m = oracle::random_motion(rng);
    CHECK(doppler(make_sine(sine(m.alpha, m.beta, m.gamma)), rng.uniform(0, 1)) > 0.0);
  }
}

TEST_CASE("constructor guards name the violated inequality") {
  CHECK_THROWS_AS(make_sine(sine(0.1, 0.4, 0.0)), ConstraintViolation);
  CHECK_THROWS_WITH(make_sine(sine(0.1, 0.4, 0.0)), Catch::Matchers::ContainsSubstring("alpha"));
  CHECK_THROWS_AS(make_sine(sine(0.35, 0.99, 0.7)), ConstraintViolation);
  CHECK_THROWS_WITH(make_sine(sine(0.35, 0.99, 0.7)), Catch::Matchers::ContainsSubstring("gamma"));
  CHECK_THROWS_AS(make_smoothed_start(smooth(0.1, 0.4, 0.0)), ConstraintViolation);
}

TEST_CASE("validate reports instead of throwing") {
  CHECK(validate(sine(0.35, 0.4, 0.7)).ok());

  const auto low = validate(sine(0.1, 0.4, 0.0));
  CHECK_FALSE(low.positive);
  CHECK_FALSE(low.ok());

  const auto fast = validate(sine(0.35, 0.99, 0.7));
  CHECK_FALSE(fast.subluminal);
  // Grid-scan oracle for sup|a'|.
  const oracle::Motion m{0.35, 0.99, 0.7};
  double sup = 0.0;
  for (int i = 0; i < 20000; ++i) sup = std::max(sup, std::abs(oracle::d1(m, i / 20000.0, 1e-4)));
  CHECK(fast.max_speed >= sup - 1e-9);
  CHECK(fast.max_speed < sup + 1e-6);
}

TEST_CASE("bounds enclose the sampled motion") {
  oracle::Rng rng(15);
  for (int i = 0; i < 30; ++i) {
    const auto m = oracle::random_motion(rng);
    const auto tr = make_sine(sine(m.alpha, m.beta, m.gamma));
    const auto& b = tr.bounds();
    for (int k = 0; k < 2000; ++k) {
      const double t = k / 2000.0;
      CHECK(tr.position(t) >= b.a_min);
      CHECK(tr.position(t) <= b.a_max);
      CHECK(std::abs(tr.eval(t).d1) <= b.max_speed);
    }
    CHECK(b.a_min > 0.0);
    CHECK(b.max_speed < 1.0);
  }
}
