#include "polyharm/builder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "polyharm/kernels.hpp"
#include "polyharm/parallel.hpp"
#include "polyharm/riesz.hpp"
#include "polyharm/smoothstep.hpp"

namespace polyharm {

void validate(const BuilderParams& params) {
  if (params.N <= 2 * params.m || params.m < 1)
    throw std::invalid_argument("builder: need N > 2m and m >= 1");
  if (!(params.alpha > 0.0) || !(params.alpha < params.N))
    throw std::invalid_argument("builder: need 0 < alpha < N");
  if (!(params.p >= 1.0) || !(params.q > 1.0))
    throw std::invalid_argument("builder: need p >= 1 and q > 1");
}

double choose_kappa(const BuilderParams& params) {
  validate(params);
  const double N = params.N, m = params.m;
  const double alpha = params.alpha, p = params.p, q = params.q;
  const double hi = N - 2.0 * m;

  struct Bound {
    double value;
    const char* name;
  };
  const Bound bounds[] = {
      {(N - alpha + 2.0 * m) / (p + q - 1.0), "kappa (p+q-1) > N - alpha + 2m"},
      {(N - alpha) / p, "kappa p > N - alpha"},
      {(2.0 * m - alpha) / (q - 1.0), "kappa (q-1) > 2m - alpha"},
      {0.0, "kappa > 0"},
  };
  const Bound* binding = &bounds[0];
  for (const Bound& b : bounds)
    if (b.value > binding->value) binding = &b;

  if (!(binding->value < hi)) {
    std::ostringstream msg;
    msg << "no admissible decay exponent: lower bound " << binding->value
        << " from \"" << binding->name << "\" does not leave room below N - 2m = "
        << hi;
    throw InfeasibleRegionError(msg.str());
  }
  double kappa = 0.5 * (binding->value + hi);
  if (std::abs(p * kappa - N) <= 1e-9 * N)
    kappa += 0.01 * (hi - binding->value);
  return kappa;
}

double choose_a(int N, int m, double kappa) {
  if (!(kappa > 0.0) || !(kappa < N - 2.0 * m))
    throw std::invalid_argument("choose_a: need 0 < kappa < N - 2m");
  double a = 1.0;
  for (int i = 0; i <= 40; ++i, a *= 0.5)
    if (b_coefficients(N, m, kappa, a).back() > 0.0) return a;
  throw std::runtime_error("choose_a: scan exhausted without a positive top coefficient");
}

std::pair<double, double> lower_bound_radius(int N, int m, double kappa,
                                             double a) {
  const std::vector<double> b = b_coefficients(N, m, kappa, a);
  const double bm = b.back();
  if (!(bm > 0.0))
    throw std::invalid_argument("lower_bound_radius: top b-coefficient must be positive");
  const double c_lower = bm / 2.0;
  if (a == 0.0) return {c_lower, 1.0};  // F is the exact power b_m r^(-kappa-2m)

  const RadialExpr F =
      neg_laplacian_power(RadialExpr::shifted_power(1.0, a, kappa / 2.0), N, m);
  const double tail_power = kappa + 2.0 * m;
  const auto ratio = [&](double r) { return F.eval(r) * std::pow(r, tail_power); };

  const std::vector<double> radii = log_grid(1.0, 1e6, 4001);
  size_t last_bad = 0;  // index 0 stands for "ratio fine everywhere past r = 1"
  for (size_t i = radii.size(); i-- > 1;) {
    if (ratio(radii[i]) < c_lower) {
      last_bad = i;
      break;
    }
  }
  const size_t first_ok = last_bad + 1;
  if (first_ok >= radii.size() || radii[first_ok] > 1e4) {
    std::ostringstream msg;
    msg << "lower_bound_radius: F r^(kappa+2m) does not settle above " << c_lower
        << " by r = 1e4 (ratio at 1e4: " << ratio(1e4) << ", at 1e6: "
        << ratio(1e6) << ")";
    throw std::runtime_error(msg.str());
  }
  const double R = radii[first_ok];

  // Past the scan the ratio tends to b_m; accept if it approaches from above
  // (decreasing) or sits between c_lower and the limit while rising.
  const double r_end = radii.back();
  const double ratio_end = ratio(r_end);
  const double dratio_end =
      F.deriv(r_end) * std::pow(r_end, tail_power) +
      tail_power * F.eval(r_end) * std::pow(r_end, tail_power - 1.0);
  const bool tail_ok = dratio_end >= 0.0 ? ratio_end >= c_lower
                                         : ratio_end >= bm * (1.0 - 1e-6);
  if (!tail_ok) {
    std::ostringstream msg;
    msg << "lower_bound_radius: ratio " << ratio_end << " still decreasing at r = "
        << r_end << " with limit " << bm;
    throw std::runtime_error(msg.str());
  }
  return {c_lower, R};
}

std::pair<SampledProfile, std::vector<SampledProfile>> build_correction(
    int N, int m, double R, const BuildOptions& opts) {
  if (!(R > 0.0)) throw std::invalid_argument("build_correction: need R > 0");
  if (!(2.0 * R < opts.grid_max))
    throw std::invalid_argument("build_correction: grid_max must exceed 2R");
  if (opts.grid_points < 16 || !(opts.grid_min > 0.0) ||
      !(opts.grid_max > opts.grid_min))
    throw std::invalid_argument("build_correction: bad grid");

  std::vector<double> radii = log_grid(opts.grid_min, opts.grid_max, opts.grid_points);
  for (double extra : {R, 2.0 * R}) {
    const auto it = std::lower_bound(radii.begin(), radii.end(), extra);
    if (it == radii.end() || std::abs(*it - extra) > 1e-12 * extra)
      radii.insert(it, extra);
  }

  SampledProfile phi;
  phi.radii = radii;
  phi.values.resize(radii.size());
  for (size_t i = 0; i < radii.size(); ++i)
    phi.values[i] = plateau_cutoff(radii[i], R);

  return {phi, newtonian_potential_chain(phi, N, m)};
}

namespace {

RadialField field_of_parts(double scale, const RadialExpr& v, double M,
                           const SampledProfile& Wm, double kappa, double R,
                           const BuildOptions& opts) {
  RadialField f;
  f.eval = [scale, v, M, Wm](double r) {
    return scale * (v.eval(r) + M * Wm.eval_extended(r));
  };
  f.tail_exponent = -kappa;  // v dominates: kappa < N - 2m
  f.tail_exact = false;
  f.breakpoints = {opts.grid_min, R, 2.0 * R, opts.grid_max};
  return f;
}

}  // namespace

Construction build_supersolution(const BuilderParams& params,
                                 const BuildOptions& opts) {
  validate(params);
  if (!(opts.guard > 0.0) || !(opts.guard <= 1.0))
    throw std::invalid_argument("build_supersolution: need 0 < guard <= 1");

  Construction cons;
  cons.params = params;
  cons.guard = opts.guard;
  cons.kappa = choose_kappa(params);
  cons.a = choose_a(params.N, params.m, cons.kappa);
  std::tie(cons.c_lower, cons.R) =
      lower_bound_radius(params.N, params.m, cons.kappa, cons.a);
  std::tie(cons.phi, cons.chain) =
      build_correction(params.N, params.m, cons.R, opts);
  cons.v = RadialExpr::shifted_power(1.0, cons.a, cons.kappa / 2.0);
  cons.F = neg_laplacian_power(cons.v, params.N, params.m);

  // Interior lift: F + M > 0 on [0, R] with room to spare.
  double f_min = cons.F.eval(0.0);
  for (double r : log_grid(std::min(1e-6, opts.grid_min), cons.R, 2000))
    f_min = std::min(f_min, cons.F.eval(r));
  cons.M = std::max(1.0, 2.0 * std::max(0.0, -f_min));

  // Comparison constants from the unscaled V = v + M W_m.
  const RadialField V = field_of_parts(1.0, cons.v, cons.M, cons.chain.back(),
                                       cons.kappa, cons.R, opts);
  const Kernel kernel = RieszPower{params.alpha};
  const std::vector<double>& radii = cons.phi.radii;
  const size_t n = radii.size();
  std::vector<double> rhs0(n);
  ConvolveOptions copts;
  copts.rel_tol = opts.quad_rel_tol;
  parallel_for(static_cast<int>(n), [&](int i) {
    const double r = radii[static_cast<size_t>(i)];
    rhs0[static_cast<size_t>(i)] =
        convolve_radial(kernel, V, params.p, params.N, r, copts) *
        std::pow(V.eval(r), params.q);
  });

  double C1 = std::numeric_limits<double>::infinity();
  double C2 = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < n; ++i) {
    if (!(rhs0[i] > 0.0) || !std::isfinite(rhs0[i]))
      throw std::runtime_error("build_supersolution: comparison denominator not positive");
    if (radii[i] >= cons.R)
      C1 = std::min(C1, cons.F.eval(radii[i]) / rhs0[i]);
    if (radii[i] <= cons.R)
      C2 = std::min(C2, (cons.F.eval(radii[i]) +
                         cons.M * cons.phi.interpolate(radii[i])) /
                            rhs0[i]);
  }
  if (!(C1 > 0.0) || !(C2 > 0.0))
    throw std::runtime_error("build_supersolution: comparison infimum not positive");
  cons.C1 = C1;
  cons.C2 = C2;
  cons.C = std::min(C1, C2);
  cons.scale = std::pow(opts.guard * cons.C, 1.0 / (params.p + params.q - 1.0));

  const FinitenessReport fin =
      finiteness_check(field_of(cons), kernel, params.p, params.N);
  if (fin.finite == Ternary::False)
    throw std::runtime_error("build_supersolution: convolution mass diverges: " + fin.detail);
  return cons;
}

RadialField field_of(const Construction& cons) {
  BuildOptions opts;
  opts.grid_min = cons.phi.radii.front();
  opts.grid_max = cons.phi.radii.back();
  return field_of_parts(cons.scale, cons.v, cons.M, cons.chain.back(),
                        cons.kappa, cons.R, opts);
}

CertificationReport verify_supersolution(const Construction& cons,
                                         const std::vector<double>& radii,
                                         double tol, double quad_rel_tol) {
  if (radii.empty())
    throw std::invalid_argument("verify_supersolution: empty radii");
  const RadialField U = field_of(cons);
  const Kernel kernel = RieszPower{cons.params.alpha};
  ConvolveOptions copts;
  copts.rel_tol = quad_rel_tol;

  CertificationReport report;
  report.tol = tol;
  report.samples.resize(radii.size());
  parallel_for(static_cast<int>(radii.size()), [&](int i) {
    const double r = radii[static_cast<size_t>(i)];
    MarginSample s;
    s.radius = r;
    s.lhs = cons.scale *
            (cons.F.eval(r) + cons.M * cons.phi.eval_extended(r));
    s.rhs = convolve_radial(kernel, U, cons.params.p, cons.params.N, r, copts) *
            std::pow(U.eval(r), cons.params.q);
    s.margin = (s.lhs - s.rhs) / (1.0 + std::abs(s.lhs));
    report.samples[static_cast<size_t>(i)] = s;
  });

  report.min_margin = std::numeric_limits<double>::infinity();
  for (const MarginSample& s : report.samples) {
    if (s.margin < report.min_margin) {
      report.min_margin = s.margin;
      report.min_margin_radius = s.radius;
    }
  }
  report.pass = report.min_margin >= -tol &&
                std::all_of(report.samples.begin(), report.samples.end(),
                            [](const MarginSample& s) {
                              return std::isfinite(s.margin);
                            });
  return report;
}

std::vector<LevelCheck> polysuperharmonic_check(const Construction& cons,
                                                const std::vector<double>& grid) {
  if (grid.empty())
    throw std::invalid_argument("polysuperharmonic_check: empty grid");
  const int m = cons.params.m;
  std::vector<LevelCheck> out;
  out.reserve(static_cast<size_t>(m) + 1);
  for (int level = 0; level <= m; ++level) {
    const RadialExpr part = neg_laplacian_power(cons.v, cons.params.N, level);
    // (-Delta)^level W_m = W_(m-level); level m reaches phi itself.
    const SampledProfile& corr =
        level == m ? cons.phi : cons.chain[static_cast<size_t>(m - level - 1)];
    std::vector<double> vals(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) {
      vals[i] = cons.scale * (part.eval(grid[i]) +
                              cons.M * corr.eval_extended(grid[i]));
    }
    LevelCheck check;
    check.level = level;
    check.min_value = std::numeric_limits<double>::infinity();
    double scale = 0.0;
    for (size_t i = 0; i < grid.size(); ++i) {
      scale = std::max(scale, std::abs(vals[i]));
      if (vals[i] < check.min_value) {
        check.min_value = vals[i];
        check.min_radius = grid[i];
      }
    }
    check.pass = check.min_value >= -1e-12 * scale;
    out.push_back(check);
  }
  return out;
}

void to_json(nlohmann::json& j, const BuilderParams& p) {
  j = nlohmann::json{{"N", p.N}, {"m", p.m}, {"alpha", p.alpha},
                     {"p", p.p}, {"q", p.q}};
}

void from_json(const nlohmann::json& j, BuilderParams& p) {
  j.at("N").get_to(p.N);
  j.at("m").get_to(p.m);
  j.at("alpha").get_to(p.alpha);
  j.at("p").get_to(p.p);
  j.at("q").get_to(p.q);
}

void to_json(nlohmann::json& j, const Construction& c) {
  j = nlohmann::json{{"params", c.params},
                     {"kappa", c.kappa},
                     {"a", c.a},
                     {"c_lower", c.c_lower},
                     {"R", c.R},
                     {"M", c.M},
                     {"C1", c.C1},
                     {"C2", c.C2},
                     {"C", c.C},
                     {"guard", c.guard},
                     {"scale", c.scale},
                     {"v", c.v},
                     {"F", c.F},
                     {"phi", c.phi},
                     {"chain", c.chain}};
}

void from_json(const nlohmann::json& j, Construction& c) {
  j.at("params").get_to(c.params);
  j.at("kappa").get_to(c.kappa);
  j.at("a").get_to(c.a);
  j.at("c_lower").get_to(c.c_lower);
  j.at("R").get_to(c.R);
  j.at("M").get_to(c.M);
  j.at("C1").get_to(c.C1);
  j.at("C2").get_to(c.C2);
  j.at("C").get_to(c.C);
  j.at("guard").get_to(c.guard);
  j.at("scale").get_to(c.scale);
  j.at("v").get_to(c.v);
  j.at("F").get_to(c.F);
  j.at("phi").get_to(c.phi);
  j.at("chain").get_to(c.chain);
}

void to_json(nlohmann::json& j, const MarginSample& s) {
  j = nlohmann::json{{"radius", s.radius}, {"lhs", s.lhs},
                     {"rhs", s.rhs}, {"margin", s.margin}};
}

void to_json(nlohmann::json& j, const CertificationReport& r) {
  j = nlohmann::json{{"pass", r.pass},
                     {"tol", r.tol},
                     {"min_margin", r.min_margin},
                     {"min_margin_radius", r.min_margin_radius},
                     {"samples", r.samples}};
}

}  // namespace polyharm
