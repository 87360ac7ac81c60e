#include "polyharm/barrier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "polyharm/parallel.hpp"
#include "polyharm/quadrature.hpp"
#include "polyharm/riesz.hpp"
#include "polyharm/smoothstep.hpp"
#include "polyharm/taylor_jet.hpp"

namespace polyharm {

namespace {

LevelCheck check_values(int level, const std::vector<double>& radii,
                        const std::vector<double>& values) {
  LevelCheck out;
  out.level = level;
  out.min_value = std::numeric_limits<double>::infinity();
  double scale = 0.0;
  for (size_t i = 0; i < values.size(); ++i) {
    scale = std::max(scale, std::abs(values[i]));
    if (values[i] < out.min_value) {
      out.min_value = values[i];
      out.min_radius = radii[i];
    }
  }
  out.pass = out.min_value >= -1e-12 * scale;
  return out;
}

// OLS slope of y against x.
double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  return sxy / sxx;
}

}  // namespace

std::vector<LevelCheck> polysuperharmonic_check(
    const RadialExpr& u, int N, int m, const std::vector<double>& grid) {
  if (N < 1 || m < 1) throw std::invalid_argument("polysuperharmonic_check: need N, m >= 1");
  if (grid.empty()) throw std::invalid_argument("polysuperharmonic_check: empty grid");
  std::vector<LevelCheck> out;
  out.reserve(static_cast<size_t>(m) + 1);
  for (int level = 0; level <= m; ++level) {
    const RadialExpr e = neg_laplacian_power(u, N, level);
    std::vector<double> vals(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) vals[i] = e.eval(grid[i]);
    out.push_back(check_values(level, grid, vals));
  }
  return out;
}

CascadeState radial_poisson_cascade(const SampledProfile& top, int N, int m,
                                    const std::vector<double>& center_values) {
  top.validate();
  if (N < 1 || m < 1) throw std::invalid_argument("radial_poisson_cascade: need N, m >= 1");
  if (static_cast<int>(center_values.size()) != m - 1)
    throw std::invalid_argument(
        "radial_poisson_cascade: need one center value per level below the top");

  const std::vector<double>& radii = top.radii;
  const size_t n = radii.size();

  CascadeState state;
  state.levels.resize(static_cast<size_t>(m));
  state.center_values.resize(static_cast<size_t>(m));

  // Top ladder entry: average of (-Delta)^(m-1) u = (-1)^(m-1) Delta^(m-1) u.
  const double sign = (m % 2 == 1) ? 1.0 : -1.0;
  SampledProfile& top_level = state.levels[static_cast<size_t>(m - 1)];
  top_level.radii = radii;
  top_level.values.resize(n);
  for (size_t i = 0; i < n; ++i) top_level.values[i] = sign * top.values[i];
  state.center_values[static_cast<size_t>(m - 1)] = top_level.values[0];

  for (int level = m - 2; level >= 0; --level) {
    const SampledProfile& g = state.levels[static_cast<size_t>(level + 1)];
    const double w0 = center_values[static_cast<size_t>(level)];
    SampledProfile w;
    w.radii = radii;
    w.values.resize(n);

    // Inside the first grid point g is constant, so the double integral is
    // g0 r^2 / (2N) and the running mass is g0 r^N / N.
    const double g0 = g.values[0];
    double mass = g0 * std::pow(radii[0], N) / N;
    double outer = g0 * radii[0] * radii[0] / (2.0 * N);
    w.values[0] = w0 - outer;
    for (size_t k = 1; k < n; ++k) {
      outer += interp_segment_outer(radii[k - 1], g.values[k - 1], radii[k],
                                    g.values[k], mass, N);
      mass += interp_segment_mass(radii[k - 1], g.values[k - 1], radii[k],
                                  g.values[k], N);
      w.values[k] = w0 - outer;
    }
    state.levels[static_cast<size_t>(level)] = std::move(w);
    state.center_values[static_cast<size_t>(level)] = w0;
  }
  return state;
}

double taylor_bound(const std::vector<double>& center_derivs, int N, int m,
                    double r) {
  if (N < 1 || m < 1) throw std::invalid_argument("taylor_bound: need N, m >= 1");
  if (static_cast<int>(center_derivs.size()) != m)
    throw std::invalid_argument("taylor_bound: need Delta^k w(0) for k = 0..m-1");
  if (r < 0.0) throw std::invalid_argument("taylor_bound: r must be >= 0");
  double out = center_derivs[0];
  double denom = 1.0;
  double r2k = 1.0;
  for (int k = 1; k < m; ++k) {
    denom *= (2.0 * k) * (N + 2.0 * k - 2.0);
    r2k *= r * r;
    out += center_derivs[static_cast<size_t>(k)] * r2k / denom;
  }
  return out;
}

std::vector<double> default_cutoff_ladder() {
  std::vector<double> ladder;
  for (double R = 4.0; R <= 512.0; R *= 2.0) ladder.push_back(R);
  return ladder;
}

CutoffEstimate cutoff_integral_estimate(const RadialField& u, int N, int m,
                                        double p, double q,
                                        const std::vector<double>& ladder) {
  if (N < 1 || m < 1) throw std::invalid_argument("cutoff_integral_estimate: need N, m >= 1");
  if (ladder.empty()) throw std::invalid_argument("cutoff_integral_estimate: empty ladder");
  for (double R : ladder)
    if (!(R > 2.0)) throw std::invalid_argument("cutoff_integral_estimate: need R > 2");

  const double surf = unit_sphere_area(N);
  const double half_pq = 0.5 * (p + q);
  const int count = static_cast<int>(ladder.size());

  CutoffEstimate est;
  est.R_values = ladder;
  est.ratios.assign(ladder.size(), std::numeric_limits<double>::quiet_NaN());
  std::vector<char> bad(ladder.size(), 0);

  parallel_for(count, [&](int idx) {
    const double R = ladder[static_cast<size_t>(idx)];
    QuadratureOptions opts{1e-8, 0.0, 4000};
    std::vector<double> seeds = geometric_grading(0.0, 2.0 * R, 30, 0.0, 2.0 * R);
    seeds.push_back(R);
    for (double b : u.breakpoints)
      if (b > 0.0 && b < 2.0 * R) seeds.push_back(b);

    const auto weight = [&](double r) {
      const double psi = plateau_cutoff(r, R);
      return std::pow(psi, 2 * m) * std::pow(r, N - 1);
    };
    const double mass = surf * integrate_or_throw(
                                   [&](double r) {
                                     return std::max(u.eval(r), 0.0) * weight(r);
                                   },
                                   0.0, 2.0 * R, opts, seeds);
    const double energy =
        surf * integrate_or_throw(
                   [&](double r) {
                     return std::pow(std::max(u.eval(r), 0.0), half_pq) * weight(r);
                   },
                   0.0, 2.0 * R, opts, seeds);
    if (!(energy > 0.0) || !std::isfinite(energy) || !std::isfinite(mass)) {
      bad[static_cast<size_t>(idx)] = 1;
      return;
    }
    est.ratios[static_cast<size_t>(idx)] =
        mass / (std::pow(R, 2.0 * m - N) * energy * energy);
  });

  est.degenerate = std::any_of(bad.begin(), bad.end(), [](char c) { return c != 0; });
  if (!est.degenerate) {
    est.min_ratio = *std::min_element(est.ratios.begin(), est.ratios.end());
    std::vector<double> lx(ladder.size()), ly(ladder.size());
    bool positive = est.min_ratio > 0.0;
    if (positive) {
      for (size_t i = 0; i < ladder.size(); ++i) {
        lx[i] = std::log(ladder[i]);
        ly[i] = std::log(est.ratios[i]);
      }
      est.slope = fit_slope(lx, ly);
    }
    est.pass = positive && est.slope >= -0.05;
  }
  return est;
}

double laplacian_power_of_psi(int N, int m, int power, double r) {
  if (N < 1 || m < 0 || power < 1)
    throw std::invalid_argument("laplacian_power_of_psi: bad arguments");
  if (m == 0) return std::pow(plateau_psi(r), power);
  if (r <= 1.0 || r >= 2.0) return 0.0;

  const int order = 2 * m;
  const TaylorJet x = TaylorJet::variable(r, order);
  const TaylorJet up = (-( (TaylorJet::constant(2.0, order) - x).recip() )).exp();
  const TaylorJet down = (-( (x - TaylorJet::constant(1.0, order)).recip() )).exp();
  if (up.value() == 0.0) return 0.0;  // underflow this close to the support edge
  TaylorJet f = (up * (up + down).recip()).pow_int(power);
  for (int i = 0; i < m; ++i) f = radial_laplacian(f, N, r);
  return f.value();
}

PsiBoundCheck check_psi_cutoff_bound(int N, int m) {
  if (N < 1 || m < 1) throw std::invalid_argument("check_psi_cutoff_bound: need N, m >= 1");
  PsiBoundCheck out;
  const int n = 4096;
  std::vector<double> ratios(n, 0.0);
  std::vector<char> used(n, 0);
  parallel_for(n, [&](int k) {
    const double t = 1.0 + (k + 0.5) / n;
    const double psi2m = std::pow(plateau_psi(t), 2 * m);
    if (!(psi2m > out.floor)) return;
    used[static_cast<size_t>(k)] = 1;
    ratios[static_cast<size_t>(k)] =
        std::abs(laplacian_power_of_psi(N, m, 4 * m, t)) / psi2m;
  });
  for (int k = 0; k < n; ++k) {
    if (!used[static_cast<size_t>(k)]) continue;
    ++out.samples;
    if (ratios[static_cast<size_t>(k)] > out.max_ratio) {
      out.max_ratio = ratios[static_cast<size_t>(k)];
      out.argmax_t = 1.0 + (k + 0.5) / n;
    }
  }
  return out;
}

void to_json(nlohmann::json& j, const LevelCheck& c) {
  j = nlohmann::json{{"level", c.level},
                     {"min_value", c.min_value},
                     {"min_radius", c.min_radius},
                     {"pass", c.pass}};
}

void to_json(nlohmann::json& j, const CutoffEstimate& e) {
  j = nlohmann::json{{"R_values", e.R_values}, {"ratios", e.ratios},
                     {"min_ratio", e.min_ratio}, {"slope", e.slope},
                     {"degenerate", e.degenerate}, {"pass", e.pass}};
}

void to_json(nlohmann::json& j, const PsiBoundCheck& b) {
  j = nlohmann::json{{"max_ratio", b.max_ratio},
                     {"argmax_t", b.argmax_t},
                     {"samples", b.samples},
                     {"floor", b.floor}};
}

}  // namespace polyharm
