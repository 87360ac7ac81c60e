#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "polyharm/quadrature.hpp"

using namespace polyharm;

namespace {

// Reference interpolant matching the sampled-profile convention: power law
// between same-sign endpoints, linear otherwise.
double interp_value(double r0, double v0, double r1, double v1, double s) {
  if (v0 == 0.0 && v1 == 0.0) return 0.0;
  if (v0 * v1 > 0.0) {
    const double g = std::log(v1 / v0) / std::log(r1 / r0);
    return v0 * std::pow(s / r0, g);
  }
  return v0 + (v1 - v0) * (s - r0) / (r1 - r0);
}

}  // namespace

TEST_CASE("adaptive quadrature reproduces closed-form integrals") {
  QuadratureOptions tight{1e-13, 0.0, 4000};

  auto cubic = integrate([](double x) { return x * x * x; }, 0.0, 1.0, tight);
  CHECK(cubic.converged);
  CHECK(cubic.value == doctest::Approx(0.25).epsilon(1e-14));

  auto sine = integrate([](double x) { return std::sin(x); }, 0.0,
                        std::acos(-1.0), tight);
  CHECK(sine.converged);
  CHECK(sine.value == doctest::Approx(2.0).epsilon(1e-13));

  // int_0^1 exp(x) = e - 1
  auto ex = integrate([](double x) { return std::exp(x); }, 0.0, 1.0, tight);
  CHECK(ex.value ==
        doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-14));
}

TEST_CASE("graded seeds resolve an integrable endpoint singularity") {
  // int_0^1 x^{-1/2} dx = 2; nodes never touch 0, grading makes it cheap.
  auto seeds = geometric_grading(0.0, 1.0, 40, 0.0, 1.0);
  CHECK(!seeds.empty());
  for (double s : seeds) {
    CHECK(s > 0.0);
    CHECK(s < 1.0);
  }
  double v = integrate_or_throw([](double x) { return 1.0 / std::sqrt(x); },
                                0.0, 1.0, {1e-10, 0.0, 4000}, seeds);
  CHECK(v == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("non-integrable singularity raises after refinement stalls") {
  CHECK_THROWS_AS(integrate_or_throw([](double x) { return 1.0 / x; }, 0.0,
                                     1.0, {1e-10, 0.0, 200}),
                  QuadratureError);
  try {
    integrate_or_throw([](double x) { return 1.0 / x; }, 0.0, 1.0,
                       {1e-10, 0.0, 200});
  } catch (const QuadratureError& e) {
    CHECK(!e.partial_result.converged);
    CHECK(e.partial_result.intervals >= 200);
  }
}

TEST_CASE("interior kink converges fast when seeded as a breakpoint") {
  std::vector<double> bp{0.5};
  auto r = integrate([](double x) { return std::abs(x - 0.5); }, 0.0, 1.0,
                     {1e-14, 0.0, 64}, bp);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(0.25).epsilon(1e-14));
  // Two seeded panels suffice: the integrand is polynomial on each side.
  CHECK(r.intervals <= 8);
}

TEST_CASE("geometric grading stays inside the open interval") {
  auto pts = geometric_grading(2.0, 1.0, 30, 1.5, 2.0);
  for (double p : pts) {
    CHECK(p > 1.5);
    CHECK(p < 2.0);
  }
  // target + span*2^-k is clipped away (>= hi), target - span*2^-k survives.
  CHECK(pts.size() >= 25);
}

TEST_CASE("power segment integral matches antiderivatives") {
  CHECK(power_segment_integral(2.0, 1.0, 3.0) ==
        doctest::Approx(26.0 / 3.0).epsilon(1e-15));
  CHECK(power_segment_integral(-1.0, 2.0, 10.0) ==
        doctest::Approx(std::log(5.0)).epsilon(1e-15));
  CHECK(power_segment_integral(0.0, 0.25, 4.0) ==
        doctest::Approx(3.75).epsilon(1e-15));
  // Stable just off the logarithmic case.
  const double eps = 1e-13;
  CHECK(power_segment_integral(-1.0 + eps, 2.0, 10.0) ==
        doctest::Approx(std::log(5.0)).epsilon(1e-10));
  CHECK(power_segment_integral(-1.0 - eps, 2.0, 10.0) ==
        doctest::Approx(std::log(5.0)).epsilon(1e-10));
  // Large negative exponent on a ratio-preserving segment stays finite.
  double steep = power_segment_integral(-2000.0, 1.0, 1.001);
  CHECK(std::isfinite(steep));
  CHECK(steep > 0.0);
}

TEST_CASE("segment mass matches adaptive quadrature on random segments") {
  std::mt19937 rng(20240915);
  std::uniform_real_distribution<double> ur(0.1, 5.0);
  std::uniform_real_distribution<double> uv(-3.0, 3.0);
  for (int trial = 0; trial < 60; ++trial) {
    const int N = 3 + int(trial % 7);
    double r0 = ur(rng);
    double r1 = r0 * (1.0 + 0.05 + 0.5 * std::abs(uv(rng)));
    double v0, v1;
    if (trial % 3 == 0) {  // same-sign pair -> power interpolant
      v0 = 0.2 + std::abs(uv(rng));
      v1 = 0.2 + std::abs(uv(rng));
      if (trial % 6 == 0) {
        v0 = -v0;
        v1 = -v1;
      }
    } else {  // mixed signs or a zero -> linear interpolant
      v0 = uv(rng);
      v1 = (trial % 5 == 0) ? 0.0 : -std::abs(uv(rng));
    }
    double exact = interp_segment_mass(r0, v0, r1, v1, N);
    double ref = integrate_or_throw(
        [&](double s) {
          return std::pow(s, N - 1.0) * interp_value(r0, v0, r1, v1, s);
        },
        r0, r1, {1e-13, 1e-300, 2000});
    double scale = std::max({std::abs(exact), std::abs(ref), 1e-12});
    CHECK(std::abs(exact - ref) / scale < 1e-10);
  }
}

TEST_CASE("segment outer integral matches nested quadrature") {
  std::mt19937 rng(77);
  std::uniform_real_distribution<double> ur(0.2, 4.0);
  std::uniform_real_distribution<double> uv(-2.0, 2.0);
  for (int trial = 0; trial < 40; ++trial) {
    const int N = 3 + int(trial % 6);
    double r0 = ur(rng);
    double r1 = r0 * (1.1 + 0.4 * std::abs(uv(rng)));
    double v0, v1;
    if (trial % 2 == 0) {
      v0 = 0.3 + std::abs(uv(rng));
      v1 = 0.3 + std::abs(uv(rng));
    } else {
      v0 = uv(rng);
      v1 = -std::abs(uv(rng)) - 0.1;
    }
    double M0 = std::abs(uv(rng));
    double exact = interp_segment_outer(r0, v0, r1, v1, M0, N);
    double ref = integrate_or_throw(
        [&](double t) {
          double inner = integrate_or_throw(
              [&](double s) {
                return std::pow(s, N - 1.0) * interp_value(r0, v0, r1, v1, s);
              },
              r0, t, {1e-12, 1e-300, 400});
          return std::pow(t, 1.0 - N) * (M0 + inner);
        },
        r0, r1, {1e-11, 1e-300, 400});
    double scale = std::max({std::abs(exact), std::abs(ref), 1e-10});
    CHECK(std::abs(exact - ref) / scale < 1e-8);
  }
}

TEST_CASE("steep power segments stay finite instead of overflowing") {
  // Adjacent mollifier samples can differ by hundreds of orders of magnitude;
  // the closed forms must work with the ratio r1/r0 only.
  const double r0 = 2.0, r1 = 2.05;
  const double v0 = 1e-40, v1 = 1e-160;
  for (int N = 3; N <= 11; N += 2) {
    double mass = interp_segment_mass(r0, v0, r1, v1, N);
    CHECK(std::isfinite(mass));
    CHECK(mass > 0.0);
    // g = log(v1/v0)/log(r1/r0) < -10000, so nearly all mass sits at r0.
    CHECK(mass < v0 * std::pow(r1, N - 1.0) * (r1 - r0));
    double ref = integrate_or_throw(
        [&](double s) {
          return std::pow(s, N - 1.0) * interp_value(r0, v0, r1, v1, s);
        },
        r0, r1, {1e-12, 1e-300, 4000},
        geometric_grading(r0, r1 - r0, 50, r0, r1));
    CHECK(mass == doctest::Approx(ref).epsilon(1e-8));

    double outer = interp_segment_outer(r0, v0, r1, v1, 0.7, N);
    CHECK(std::isfinite(outer));
    double outer_ref = 0.7 * power_segment_integral(1.0 - N, r0, r1);
    // Mass added by the segment itself is ~1e-40; the M0 term dominates.
    CHECK(outer == doctest::Approx(outer_ref).epsilon(1e-12));
  }
}
