#include "polyharm/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace polyharm {

namespace {

// Gauss-Kronrod 7-15 abscissae on [0, 1] side (symmetric).  Even-indexed
// nodes are the Kronrod extension, odd-indexed the embedded Gauss-7 nodes.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Interval {
  double a, b, value, error;
};

struct ByError {
  bool operator()(const Interval& x, const Interval& y) const {
    return x.error < y.error;
  }
};

Interval gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double fv[15];
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(c - h * kXgk[i]);
    fv[14 - i] = f(c + h * kXgk[i]);
  }
  fv[7] = f(c);
  double res_k = 0.0, res_g = 0.0;
  for (int i = 0; i < 7; ++i) {
    res_k += kWgk[i] * (fv[i] + fv[14 - i]);
    if (i % 2 == 1) res_g += kWg[i / 2] * (fv[i] + fv[14 - i]);
  }
  res_k += kWgk[7] * fv[7];
  res_g += kWg[3] * fv[7];
  res_k *= h;
  res_g *= h;
  // |K - G| overestimates the Kronrod error, which only costs extra splits.
  return {a, b, res_k, std::abs(res_k - res_g)};
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, const QuadratureOptions& opts,
                           std::span<const double> breakpoints) {
  QuadratureResult out;
  if (!(a < b)) return {0.0, 0.0, 0, true};

  std::vector<double> edges{a, b};
  for (double x : breakpoints)
    if (x > a && x < b) edges.push_back(x);
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  std::priority_queue<Interval, std::vector<Interval>, ByError> heap;
  double total = 0.0, total_err = 0.0;
  int count = 0;
  for (size_t i = 0; i + 1 < edges.size(); ++i) {
    Interval iv = gk15(f, edges[i], edges[i + 1]);
    total += iv.value;
    total_err += iv.error;
    heap.push(iv);
    ++count;
  }

  auto tolerance = [&](double v) {
    return std::max(opts.abs_tol, opts.rel_tol * std::abs(v));
  };

  while (total_err > tolerance(total) && count < opts.max_intervals) {
    Interval worst = heap.top();
    heap.pop();
    double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      // Interval is at floating point resolution; keep its estimate.
      total_err -= worst.error;
      total -= worst.value;
      total += worst.value;
      worst.error = 0.0;
      heap.push(worst);
      continue;
    }
    Interval left = gk15(f, worst.a, mid);
    Interval right = gk15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++count;
  }

  out.value = total;
  out.error_estimate = total_err;
  out.intervals = count;
  out.converged = std::isfinite(total) && total_err <= tolerance(total);
  return out;
}

double integrate_or_throw(const std::function<double(double)>& f, double a,
                          double b, const QuadratureOptions& opts,
                          std::span<const double> breakpoints) {
  QuadratureResult r = integrate(f, a, b, opts, breakpoints);
  if (!r.converged) {
    throw QuadratureError(
        "adaptive quadrature stalled: error estimate " +
            std::to_string(r.error_estimate) + " for value " +
            std::to_string(r.value) + " after " + std::to_string(r.intervals) +
            " intervals",
        r);
  }
  return r.value;
}

std::vector<double> geometric_grading(double target, double span, int levels,
                                      double lo, double hi) {
  std::vector<double> pts;
  double step = span;
  for (int k = 0; k < levels; ++k) {
    step *= 0.5;
    for (double x : {target - step, target + step})
      if (x > lo && x < hi) pts.push_back(x);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

double power_segment_integral(double e, double x, double y) {
  if (!(0.0 < x) || !(x <= y)) {
    throw std::invalid_argument("power_segment_integral requires 0 < x <= y");
  }
  if (x == y) return 0.0;
  const double ep1 = e + 1.0;
  const double t = ep1 * std::log(y / x);
  // integral = x^{e+1} * (exp(t) - 1) / (e+1); expm1 keeps accuracy as e -> -1.
  if (std::abs(ep1) < 1e-14) return std::pow(x, ep1) * std::log(y / x);
  return std::pow(x, ep1) * std::expm1(t) / ep1;
}

// Both segment integrals substitute u = s/r0 so every exponential involves
// only the ratios v1/v0 and r1/r0; the interpolant coefficient v0 r0^-g
// referenced to r = 1 can overflow for steep segments even when the integral
// itself is tame.
double interp_segment_mass(double r0, double v0, double r1, double v1, int N) {
  if (v0 == 0.0 && v1 == 0.0) return 0.0;
  if (v0 * v1 > 0.0) {
    const double x = r1 / r0;
    const double g = std::log(v1 / v0) / std::log(x);
    // v(s) = v0 (s/r0)^g:  integral = v0 r0^N int_1^x u^(N-1+g) du
    return v0 * std::pow(r0, double(N)) *
           power_segment_integral(N - 1.0 + g, 1.0, x);
  }
  const double B = (v1 - v0) / (r1 - r0);
  const double A = v0 - B * r0;
  return A * power_segment_integral(N - 1.0, r0, r1) +
         B * power_segment_integral(double(N), r0, r1);
}

double interp_segment_outer(double r0, double v0, double r1, double v1,
                            double M0, int N) {
  if (v0 == 0.0 && v1 == 0.0)
    return M0 * power_segment_integral(1.0 - N, r0, r1);
  if (v0 * v1 > 0.0) {
    const double x = r1 / r0;
    const double g = std::log(v1 / v0) / std::log(x);
    const double ng = N + g;
    const double head = std::pow(r0, 2.0 - N);
    const double vr = v0 * std::pow(r0, double(N));
    if (std::abs(ng) > 1e-9) {
      // M(t) = M0 + vr (u^ng - 1)/ng with u = t/r0.
      return head * ((M0 - vr / ng) * power_segment_integral(1.0 - N, 1.0, x) +
                     (vr / ng) * power_segment_integral(1.0 + g, 1.0, x));
    }
    // g = -N: the inner mass grows like log, integrate directly.
    return integrate_or_throw(
        [&](double u) {
          return head * std::pow(u, 1.0 - N) * (M0 + vr * std::log(u));
        },
        1.0, x, {1e-13, 0.0, 200});
  }
  const double B = (v1 - v0) / (r1 - r0);
  const double A = v0 - B * r0;
  const double K = M0 - A * std::pow(r0, double(N)) / N -
                   B * std::pow(r0, N + 1.0) / (N + 1.0);
  return K * power_segment_integral(1.0 - N, r0, r1) +
         (A / N) * power_segment_integral(1.0, r0, r1) +
         (B / (N + 1.0)) * power_segment_integral(2.0, r0, r1);
}

}  // namespace polyharm
