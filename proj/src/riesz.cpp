#include "polyharm/riesz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "polyharm/parallel.hpp"

namespace polyharm {

namespace {

constexpr double kPi = std::numbers::pi;

struct PowerTerm {
  double c = 0.0;
  double e = 0.0;
};

double eval_terms(const std::vector<PowerTerm>& terms, double r) {
  double v = 0.0;
  for (const PowerTerm& t : terms) v += t.c * std::pow(r, t.e);
  return v;
}

// Least squares slope / intercept / R^2.
struct LineFit {
  double slope = 0.0, intercept = 0.0, r_squared = 0.0;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  double sx = 0, sy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r_squared = (syy > 0.0) ? (sxy * sxy) / (sxx * syy) : 1.0;
  return f;
}

// Integrand tail exponent of the convolution integral
// rho^(N-1) f(rho)^p Psi(rho), plus margin bookkeeping shared with
// finiteness_check.
struct TailInfo {
  double exponent;   // power of rho at infinity
  double log_power;  // log power carried by the kernel tail
  bool exact;
};

TailInfo integrand_tail(const RadialField& f, const Kernel& k, double p, int N) {
  const KernelTail kt = kernel_tail(k, N);
  return {double(N - 1) + p * f.tail_exponent + kt.exponent, kt.log_power,
          f.tail_exact && kt.exact};
}

struct PotentialLevel {
  std::vector<double> values;
  std::vector<PowerTerm> tail;
};

// Decaying solution of -Delta W = f in R^N:
//   W(r) = int_r^inf t^(1-N) int_0^t s^(N-1) f(s) ds dt,
// exact for the grid interpolant of f plus the given tail law.
PotentialLevel solve_potential(const std::vector<double>& r,
                               const std::vector<double>& v,
                               const std::vector<PowerTerm>& ftail, int N) {
  const size_t n = r.size();
  std::vector<double> mass(n);
  mass[0] = v[0] * std::pow(r[0], double(N)) / N;  // constant below the grid
  for (size_t i = 0; i + 1 < n; ++i)
    mass[i + 1] = mass[i] + interp_segment_mass(r[i], v[i], r[i + 1], v[i + 1], N);

  // Past the grid M(t) = B + sum_i c_i t^(e_i+N)/(e_i+N); each tail power
  // must decay faster than r^-2 for the outer integral to converge.
  double B = mass[n - 1];
  for (const PowerTerm& t : ftail) {
    if (t.c == 0.0) continue;
    if (t.e >= -2.0 - 1e-12)
      throw NonIntegrableError("potential chain: tail power " +
                               std::to_string(t.e) + " decays too slowly");
    if (std::abs(t.e + N) < 1e-9)
      throw std::invalid_argument("potential chain: tail power -N unsupported");
    B -= t.c * std::pow(r[n - 1], t.e + N) / (t.e + N);
  }

  PotentialLevel out;
  if (B != 0.0) out.tail.push_back({B / (N - 2.0), 2.0 - N});
  for (const PowerTerm& t : ftail) {
    if (t.c == 0.0) continue;
    out.tail.push_back({-t.c / ((t.e + N) * (t.e + 2.0)), t.e + 2.0});
  }

  out.values.assign(n, 0.0);
  out.values[n - 1] = eval_terms(out.tail, r[n - 1]);
  for (size_t i = n - 1; i-- > 0;)
    out.values[i] =
        out.values[i + 1] +
        interp_segment_outer(r[i], v[i], r[i + 1], v[i + 1], mass[i], N);
  return out;
}

}  // namespace

double unit_sphere_area(int d) {
  if (d < 1) throw std::invalid_argument("unit_sphere_area: d must be >= 1");
  return 2.0 * std::pow(kPi, 0.5 * d) / std::tgamma(0.5 * d);
}

double angular_average(const Kernel& k, int N, double r, double rho,
                       double rel_tol) {
  if (N < 2) throw std::invalid_argument("angular_average: N must be >= 2");
  if (r < 0.0 || rho < 0.0)
    throw std::domain_error("angular_average: radii must be >= 0");
  if (r * rho == 0.0)
    return eval_kernel(k, N, r + rho) * unit_sphere_area(N);

  const double dr = r - rho;
  auto integrand = [&](double t) {
    const double sh = std::sin(0.5 * t);
    const double d = std::sqrt(dr * dr + 4.0 * r * rho * sh * sh);
    const double w = (N == 2) ? 1.0 : std::pow(std::sin(t), double(N - 2));
    return eval_kernel(k, N, d) * w;
  };

  // The kernel varies on the angular scale theta* ~ |r-rho|/sqrt(r rho);
  // split geometrically down to that scale (and a bit past it).
  double theta_star = std::abs(dr) / std::sqrt(r * rho);
  theta_star = std::clamp(theta_star, 1e-14, kPi);
  const int depth =
      std::min(45, int(std::ceil(std::log2(kPi / theta_star))) + 6);
  std::vector<double> seeds;
  seeds.reserve(depth);
  double s = kPi;
  for (int i = 0; i < depth; ++i) {
    s *= 0.5;
    seeds.push_back(s);
  }

  QuadratureOptions qo;
  qo.rel_tol = rel_tol;
  qo.max_intervals = 2000;
  const double val = integrate_or_throw(integrand, 0.0, kPi, qo, seeds);
  return unit_sphere_area(N - 1) * val;
}

double convolve_radial(const Kernel& k, const RadialField& f, double p, int N,
                       double r, const ConvolveOptions& opts) {
  validate_kernel(k, N);
  if (!(p > 0.0)) throw std::invalid_argument("convolve_radial: p must be > 0");
  if (!(r > 0.0)) throw std::domain_error("convolve_radial: r must be > 0");

  const FinitenessReport fin = finiteness_check(f, k, p, N);
  if (!(fin.margin > 0.0))
    throw NonIntegrableError("convolve_radial: " + fin.detail);
  const double E = fin.exponent;  // integrand ~ rho^E at infinity

  auto weighted = [&](double rho) -> double {
    const double fv = f.eval(rho);
    if (fv <= 0.0) return 0.0;
    const double fp = std::pow(fv, p);
    if (N == 1) {
      double kv = eval_kernel(k, 1, rho + r);
      if (rho != r) kv += eval_kernel(k, 1, std::abs(rho - r));
      return fp * kv;
    }
    return fp * std::pow(rho, double(N - 1)) *
           angular_average(k, N, r, rho, opts.angular_rel_tol);
  };

  double bp_max = r;
  std::vector<double> edges{0.5 * r, r, 2.0 * r};
  for (double b : f.breakpoints) {
    if (b > 0.0) {
      edges.push_back(b);
      bp_max = std::max(bp_max, b);
    }
  }
  const double cut = std::max({4.0 * r, 2.0 * bp_max, 16.0});
  // Geometric refinement toward the kernel's diagonal peak at rho = r.
  for (double x : geometric_grading(r, r, 45, 0.0, cut)) edges.push_back(x);
  std::erase_if(edges, [&](double x) { return x <= 0.0 || x >= cut; });

  QuadratureOptions qo;
  qo.rel_tol = opts.rel_tol;
  qo.max_intervals = opts.max_intervals;
  const double core = integrate_or_throw(weighted, 0.0, cut, qo, edges);

  // Tail via rho = cut/xi: int_cut^inf = cut int_0^1 weighted(cut/xi)/xi^2.
  // The substituted integrand behaves like xi^(-E-2) near zero; integrate
  // down to xi_min and patch the remaining sliver with the exact power law.
  auto tail_integrand = [&](double xi) {
    return weighted(cut / xi) / (xi * xi);
  };
  const double xi_min = std::pow(2.0, -45);
  std::vector<double> tail_seeds;
  for (double x = 0.5; x > xi_min * 1.5; x *= 0.5) tail_seeds.push_back(x);
  const double tail_gk =
      integrate_or_throw(tail_integrand, xi_min, 1.0, qo, tail_seeds);
  const double sliver =
      tail_integrand(xi_min) * xi_min / (-E - 1.0);  // int_0^xi_min c xi^(-E-2)
  return core + cut * (tail_gk + std::max(sliver, 0.0));
}

double convolve_bruteforce(const Kernel& k, const RadialField& f, double p,
                           int N, double box_halfwidth, int cells_per_axis,
                           const std::array<double, 3>& x) {
  validate_kernel(k, N);
  if (N < 1 || N > 3)
    throw std::invalid_argument("convolve_bruteforce: N must be 1, 2 or 3");
  if (!(box_halfwidth > 0.0) || cells_per_axis < 2)
    throw std::invalid_argument("convolve_bruteforce: bad box");
  const FinitenessReport fin = finiteness_check(f, k, p, N);
  if (!(fin.margin > 0.0))
    throw NonIntegrableError("convolve_bruteforce: " + fin.detail);

  const double L = box_halfwidth;
  const double h = 2.0 * L / cells_per_axis;
  const int n = cells_per_axis;

  double xnorm2 = 0.0;
  for (int d = 0; d < N; ++d) xnorm2 += x[d] * x[d];
  const double xnorm = std::sqrt(xnorm2);

  // Index of the cell containing x, patched analytically below.
  std::array<int, 3> host{-1, -1, -1};
  bool x_inside = true;
  for (int d = 0; d < N; ++d) {
    host[d] = int(std::floor((x[d] + L) / h));
    if (host[d] < 0 || host[d] >= n) x_inside = false;
  }

  const int ny = (N >= 2) ? n : 1;
  const int nz = (N >= 3) ? n : 1;
  std::vector<double> slab(n, 0.0);
  parallel_for(n, [&](int i) {
    const double yi = -L + (i + 0.5) * h;
    double acc = 0.0;
    for (int jy = 0; jy < ny; ++jy) {
      const double yj = (N >= 2) ? -L + (jy + 0.5) * h : 0.0;
      for (int jz = 0; jz < nz; ++jz) {
        const double yk = (N >= 3) ? -L + (jz + 0.5) * h : 0.0;
        if (x_inside && i == host[0] && (N < 2 || jy == host[1]) &&
            (N < 3 || jz == host[2]))
          continue;
        const double rho = std::sqrt(yi * yi + yj * yj + yk * yk);
        const double fv = f.eval(rho);
        if (fv <= 0.0) continue;
        const double dx0 = x[0] - yi;
        const double dx1 = (N >= 2) ? x[1] - yj : 0.0;
        const double dx2 = (N >= 3) ? x[2] - yk : 0.0;
        const double dist = std::sqrt(dx0 * dx0 + dx1 * dx1 + dx2 * dx2);
        acc += std::pow(fv, p) * eval_kernel(k, N, dist);
      }
    }
    slab[i] = acc;
  });
  double sum = 0.0;
  for (double s : slab) sum += s;
  const double cell_volume = std::pow(h, double(N));
  sum *= cell_volume;

  if (x_inside) {
    // Equal-volume ball around x for the kernel's own cell.
    const double omega = std::pow(kPi, 0.5 * N) / std::tgamma(0.5 * N + 1.0);
    const double rho0 = h * std::pow(omega, -1.0 / N);
    std::vector<double> seeds;
    for (double sdl = 0.5; sdl > 1e-12; sdl *= 0.5) seeds.push_back(rho0 * sdl);
    const double ball = unit_sphere_area(N) *
                        integrate_or_throw(
                            [&](double sr) {
                              return std::pow(sr, double(N - 1)) *
                                     eval_kernel(k, N, sr);
                            },
                            0.0, rho0, {1e-10, 0.0, 2000}, seeds);
    const double fv = f.eval(xnorm);
    if (fv > 0.0) sum += std::pow(fv, p) * ball;
  }

  // Declared-tail estimate of what the box misses; refuse misleading output.
  const double f_at_L = f.eval(L);
  if (f_at_L > 0.0 && fin.margin < 60.0) {
    const double tail_density = std::pow(f_at_L, p) * eval_kernel(k, N, 0.5 * L) *
                                unit_sphere_area(N) * std::pow(L, double(N - 1));
    const double tail_mass = tail_density * L / fin.margin;
    if (!(tail_mass <= 1e-3 * std::abs(sum)))
      throw std::invalid_argument(
          "convolve_bruteforce: declared tail contributes more than 0.1% "
          "outside the box");
  }
  return sum;
}

std::string to_string(DecayLabel label) {
  switch (label) {
    case DecayLabel::Subcritical: return "subcritical";
    case DecayLabel::Critical: return "critical";
    default: return "supercritical";
  }
}

DecayFit decay_fit(double alpha, const RadialField& f, int N, double window_lo,
                   double window_hi, int points) {
  if (!(window_lo > 0.0) || !(window_hi > window_lo) || points < 3)
    throw std::invalid_argument("decay_fit: bad window");
  const Kernel k = RieszPower{alpha};
  validate_kernel(k, N);
  const double beta = -f.tail_exponent;
  if (!(beta > N - alpha))
    throw NonIntegrableError(
        "decay_fit: needs tail beta > N - alpha, got beta = " +
        std::to_string(beta));

  DecayFit out;
  const double crit_tol = 1e-9;
  if (beta < N - crit_tol)
    out.label = DecayLabel::Subcritical;
  else if (beta > N + crit_tol)
    out.label = DecayLabel::Supercritical;
  else
    out.label = DecayLabel::Critical;

  out.radii = log_grid(window_lo, window_hi, points);
  out.values.assign(out.radii.size(), 0.0);
  parallel_for(int(out.radii.size()), [&](int i) {
    out.values[i] = convolve_radial(k, f, 1.0, N, out.radii[i]);
  });

  std::vector<double> lx, ly;
  for (size_t i = 0; i < out.radii.size(); ++i) {
    if (!(out.values[i] > 0.0))
      throw std::runtime_error("decay_fit: nonpositive convolution value");
    lx.push_back(std::log(out.radii[i]));
    ly.push_back(std::log(out.values[i]));
  }

  if (out.label == DecayLabel::Critical) {
    // g ~ C r^-alpha log r: remove the log factor, then fit the power; the
    // log exponent itself comes from regressing against log log r.
    std::vector<double> y_corr(ly), x_ll(lx);
    for (size_t i = 0; i < lx.size(); ++i) {
      y_corr[i] = ly[i] - std::log(lx[i]);
      x_ll[i] = std::log(lx[i]);
    }
    const LineFit power = fit_line(lx, y_corr);
    out.fitted_exponent = power.slope;
    out.r_squared = power.r_squared;
    std::vector<double> y_log(ly);
    for (size_t i = 0; i < lx.size(); ++i) y_log[i] = ly[i] + alpha * lx[i];
    out.log_power = fit_line(x_ll, y_log).slope;
  } else {
    const LineFit fit = fit_line(lx, ly);
    out.fitted_exponent = fit.slope;
    out.r_squared = fit.r_squared;
    out.log_power = 0.0;
  }
  return out;
}

FinitenessReport finiteness_check(const RadialField& f, const Kernel& k,
                                  double p, int N) {
  validate_kernel(k, N);
  if (!(p > 0.0)) throw std::invalid_argument("finiteness_check: p must be > 0");
  const TailInfo t = integrand_tail(f, k, p, N);
  FinitenessReport rep;
  rep.exponent = t.exponent;
  rep.margin = -(t.exponent + 1.0);
  rep.exact = t.exact;
  if (t.exact) {
    if (rep.margin > 0.0) {
      rep.finite = Ternary::True;
      rep.detail = "integrand ~ rho^(" + std::to_string(t.exponent) + ") at infinity";
    } else if (rep.margin == 0.0 && t.log_power < -1.0) {
      rep.finite = Ternary::True;
      rep.detail = "borderline rho^-1 tail saved by log power " +
                   std::to_string(t.log_power);
      rep.margin = 0.0;
    } else {
      rep.finite = Ternary::False;
      rep.detail = "integrand ~ rho^(" + std::to_string(t.exponent) +
                   ") at infinity diverges";
    }
  } else {
    if (std::abs(rep.margin) < 0.02) {
      rep.finite = Ternary::Inconclusive;
      rep.detail = "declared tails sit within 0.02 of the critical exponent";
    } else if (rep.margin > 0.0) {
      rep.finite = Ternary::True;
      rep.detail = "declared integrand tail rho^(" + std::to_string(t.exponent) + ")";
    } else {
      rep.finite = Ternary::False;
      rep.detail = "declared integrand tail rho^(" + std::to_string(t.exponent) +
                   ") diverges";
    }
  }
  return rep;
}

std::vector<SampledProfile> newtonian_potential_chain(const SampledProfile& f,
                                                      int N, int m) {
  f.validate();
  if (N < 3) throw std::invalid_argument("potential chain: N must be >= 3");
  if (m < 1) throw std::invalid_argument("potential chain: m must be >= 1");

  std::vector<PowerTerm> tail;
  if (f.values.back() > 0.0) {
    if (!f.tail_exponent)
      throw std::invalid_argument(
          "potential chain: nonzero boundary value needs a declared tail");
    const double e = *f.tail_exponent;
    tail.push_back({f.values.back() * std::pow(f.radii.back(), -e), e});
  }

  std::vector<SampledProfile> chain;
  std::vector<double> values = f.values;
  for (int level = 0; level < m; ++level) {
    PotentialLevel sol = solve_potential(f.radii, values, tail, N);
    SampledProfile prof;
    prof.radii = f.radii;
    prof.values = sol.values;
    double dominant = -std::numeric_limits<double>::infinity();
    for (const PowerTerm& t : sol.tail)
      if (t.c != 0.0) dominant = std::max(dominant, t.e);
    if (std::isfinite(dominant)) prof.tail_exponent = dominant;
    chain.push_back(prof);
    values = sol.values;
    tail = sol.tail;
  }
  return chain;
}

}  // namespace polyharm
