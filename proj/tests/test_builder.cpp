#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "polyharm/builder.hpp"
#include "polyharm/classifier.hpp"
#include "polyharm/profile.hpp"
#include "polyharm/riesz.hpp"

using namespace polyharm;

namespace {

BuilderParams params_of(int N, int m, double alpha, double p, double q) {
  BuilderParams prm;
  prm.N = N;
  prm.m = m;
  prm.alpha = alpha;
  prm.p = p;
  prm.q = q;
  return prm;
}

// Small, fast build used by several cases below.
Construction cheap_build() {
  BuildOptions opts;
  opts.grid_points = 192;
  opts.grid_max = 1e4;
  opts.quad_rel_tol = 1e-7;
  return build_supersolution(params_of(5, 1, 2.0, 2.0, 2.0), opts);
}

}  // namespace

TEST_CASE("decay exponent selection") {
  // (5,1,2,2,2): window is (max{7/3, 3/2, 0}, 3) = (7/3, 3), midpoint 8/3...
  // bounds: (N-a+2m)/(p+q-1) = 5/3, (N-a)/p = 3/2, (2m-a)/(q-1) = 0 -> the
  // window is (5/3, 3) and the midpoint is 7/3.
  double k1 = choose_kappa(params_of(5, 1, 2.0, 2.0, 2.0));
  CHECK(k1 == doctest::Approx(7.0 / 3.0).epsilon(1e-14));
  // (9,2,3,3,3): window (max{2, 1.2, 1/2}, 5) -> midpoint 3.5.
  double k2 = choose_kappa(params_of(9, 2, 3.0, 3.0, 3.0));
  CHECK(k2 == doctest::Approx(3.5).epsilon(1e-14));

  // Outside the region the window closes and the binding constraint throws.
  CHECK_THROWS_AS(choose_kappa(params_of(5, 1, 2.0, 1.0, 1.5)),
                  InfeasibleRegionError);
  CHECK_THROWS_AS(choose_kappa(params_of(5, 1, 2.0, 1.2, 1.2)),
                  InfeasibleRegionError);

  // Feasibility of the window coincides with the sharp existence region on
  // the constructive regime p >= 1, q > 1.
  for (double p = 1.0; p <= 3.2; p += 0.2) {
    for (double q = 1.05; q <= 3.2; q += 0.2) {
      bool region = in_existence_region(5, 1, 2.0, p, q);
      bool feasible = true;
      double kappa = 0.0;
      try {
        kappa = choose_kappa(params_of(5, 1, 2.0, p, q));
      } catch (const InfeasibleRegionError&) {
        feasible = false;
      }
      CHECK(region == feasible);
      if (feasible) {
        // The chosen exponent satisfies every strict constraint.
        CHECK(kappa * (p + q - 1) > 5.0 - 2.0 + 2.0);
        CHECK(kappa * p > 3.0);
        CHECK(kappa * (q - 1) > -0.0);
        CHECK(kappa < 3.0);
        CHECK(std::abs(p * kappa - 5.0) > 1e-10);
      }
    }
  }

  // Midpoint hitting p kappa = N gets nudged off the resonance.
  double kn = choose_kappa(params_of(5, 1, 1.0, 2.0, 2.0));
  CHECK(std::abs(2.0 * kn - 5.0) > 1e-6);
  CHECK(kn == doctest::Approx(2.51).epsilon(1e-12));

  CHECK_THROWS(validate(params_of(5, 1, 2.0, 2.0, 1.0)));   // q must be > 1
  CHECK_THROWS(validate(params_of(4, 2, 2.0, 2.0, 2.0)));   // N <= 2m
  CHECK_THROWS(validate(params_of(5, 1, 5.0, 2.0, 2.0)));   // alpha >= N
  CHECK_THROWS(validate(params_of(5, 1, 2.0, 0.5, 2.0)));   // p < 1
}

TEST_CASE("shift selection keeps the top coefficient positive") {
  // The top b-coefficient is independent of the shift, so a = 1 always works.
  for (auto [N, m, kappa] : std::vector<std::tuple<int, int, double>>{
           {5, 1, 7.0 / 3.0}, {9, 2, 3.5}, {7, 3, 0.6}}) {
    CHECK(choose_a(N, m, kappa) == doctest::Approx(1.0));
    auto b1 = b_coefficients(N, m, kappa, 1.0);
    auto b2 = b_coefficients(N, m, kappa, 0.25);
    CHECK(b1.back() == doctest::Approx(b2.back()).epsilon(1e-12));
    CHECK(b1.back() ==
          doctest::Approx(power_law_coefficient(N, m, kappa)).epsilon(1e-12));
    CHECK(b1.back() > 0.0);
  }
}

TEST_CASE("asymptotic lower-bound radius") {
  // Pure power case: the ratio is b_m everywhere, R collapses to 1.
  auto [c0, R0] = lower_bound_radius(5, 1, 7.0 / 3.0, 0.0);
  CHECK(R0 == doctest::Approx(1.0));
  CHECK(c0 ==
        doctest::Approx(0.5 * power_law_coefficient(5, 1, 7.0 / 3.0)));

  for (auto [N, m, kappa] : std::vector<std::tuple<int, int, double>>{
           {5, 1, 7.0 / 3.0}, {9, 2, 3.5}}) {
    auto [c_lower, R] = lower_bound_radius(N, m, kappa, 1.0);
    CHECK(c_lower ==
          doctest::Approx(0.5 * power_law_coefficient(N, m, kappa)));
    CHECK(R >= 1.0);
    CHECK(R < 1e4);
    // Past R, F(1, r) r^(kappa+2m) stays above c_lower.
    RadialExpr F = neg_laplacian_power(
        RadialExpr::shifted_power(1.0, 1.0, kappa / 2.0), N, m);
    for (double mult : {1.0, 1.7, 5.0, 40.0, 1000.0}) {
      double r = R * mult;
      CHECK(F.eval(r) * std::pow(r, kappa + 2 * m) >= c_lower * (1 - 1e-12));
    }
  }
}

TEST_CASE("plateau correction and its potential chain") {
  BuildOptions opts;
  opts.grid_points = 160;
  opts.grid_max = 1e4;
  double R = 1.1;
  auto [phi, chain] = build_correction(9, 2, R, opts);
  CHECK(phi.interpolate(phi.radii.front()) == doctest::Approx(1.0));
  CHECK(phi.interpolate(R) == doctest::Approx(1.0));
  CHECK(phi.interpolate(2.0 * R) == doctest::Approx(0.0).scale(1.0));
  CHECK(phi.eval_extended(3.0 * R) == 0.0);
  REQUIRE(chain.size() == 2);
  // Tails 2k - N and positivity of the potentials.
  CHECK(*chain[0].tail_exponent == doctest::Approx(-7.0));
  CHECK(*chain[1].tail_exponent == doctest::Approx(-5.0));
  for (const auto& W : chain)
    for (double v : W.values) CHECK(v > 0.0);
  // Outside the support the first potential matches mass/((N-2) r^(N-2)).
  double mass = integrate_or_throw(
      [&](double s) { return std::pow(s, 8.0) * phi.eval_extended(s); }, 0.0,
      2.0 * R, {1e-10, 0.0, 2000});
  double r_out = 10.0;
  CHECK(chain[0].interpolate(r_out) ==
        doctest::Approx(mass / (7.0 * std::pow(r_out, 7.0))).epsilon(1e-6));
}

TEST_CASE("full construction certifies and scales correctly") {
  Construction cons = cheap_build();
  CHECK(cons.kappa == doctest::Approx(7.0 / 3.0));
  CHECK(cons.a == doctest::Approx(1.0));
  CHECK(cons.M >= 1.0);
  CHECK(cons.C == doctest::Approx(std::min(cons.C1, cons.C2)));
  CHECK(cons.scale ==
        doctest::Approx(std::pow(0.9 * cons.C, 1.0 / 3.0)).epsilon(1e-12));

  auto radii = log_grid(1e-2, 1e3, 60);
  CertificationReport rep = verify_supersolution(cons, radii, 1e-8, 1e-7);
  CHECK(rep.pass);
  CHECK(rep.min_margin >= -1e-8);
  CHECK(rep.samples.size() == radii.size());

  // Halving the scale keeps it a supersolution (the right side shrinks
  // faster); inflating by 10 breaks it.
  Construction half = cons;
  half.scale *= 0.5;
  CHECK(verify_supersolution(half, radii, 1e-8, 1e-7).pass);
  Construction big = cons;
  big.scale *= 10.0;
  CertificationReport bad = verify_supersolution(big, radii, 1e-8, 1e-7);
  CHECK(!bad.pass);
  CHECK(bad.min_margin < -1e-4);

  // All the operator iterates stay non-negative.
  auto levels = polysuperharmonic_check(cons, log_grid(1e-2, 1e3, 120));
  REQUIRE(levels.size() == 2);
  for (const auto& lc : levels) CHECK(lc.pass);

  // Convolution finiteness of the certified object.
  FinitenessReport fin =
      finiteness_check(field_of(cons), RieszPower{cons.params.alpha},
                       cons.params.p, cons.params.N);
  CHECK(fin.finite != Ternary::False);

  // The field's far tail follows r^-kappa.
  RadialField U = field_of(cons);
  double ratio = U.eval(2e5) / U.eval(1e5);
  CHECK(ratio == doctest::Approx(std::pow(2.0, -cons.kappa)).epsilon(1e-2));

  // Determinism: repeated verification gives bit-identical margins.
  CertificationReport rep2 = verify_supersolution(cons, radii, 1e-8, 1e-7);
  CHECK(rep.min_margin == rep2.min_margin);
  CHECK(rep.min_margin_radius == rep2.min_margin_radius);
}

TEST_CASE("construction json round trip") {
  Construction cons = cheap_build();
  nlohmann::json j = cons;
  Construction back = j.get<Construction>();
  CHECK(back.kappa == cons.kappa);
  CHECK(back.scale == cons.scale);
  CHECK(back.phi.radii.size() == cons.phi.radii.size());
  REQUIRE(back.chain.size() == cons.chain.size());
  auto radii = log_grid(1e-1, 1e2, 12);
  CertificationReport r1 = verify_supersolution(cons, radii, 1e-8, 1e-6);
  CertificationReport r2 = verify_supersolution(back, radii, 1e-8, 1e-6);
  CHECK(r1.pass);
  CHECK(r2.pass);
  CHECK(r1.min_margin == doctest::Approx(r2.min_margin).epsilon(1e-12));
}
