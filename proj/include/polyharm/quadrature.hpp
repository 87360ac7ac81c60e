#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace polyharm {

struct QuadratureOptions {
  double rel_tol = 1e-9;
  double abs_tol = 0.0;
  int max_intervals = 4000;
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int intervals = 0;
  bool converged = false;
};

class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, const QuadratureResult& partial)
      : std::runtime_error(what), partial_result(partial) {}
  QuadratureResult partial_result;
};

// Adaptive Gauss-Kronrod 7-15 on [a, b].  Interior `breakpoints` seed the
// initial subdivision so that known kinks or near-singular spots start on
// interval boundaries (Kronrod nodes never touch endpoints, so an integrable
// endpoint singularity is safe as long as it sits on a seed point).
QuadratureResult integrate(const std::function<double(double)>& f, double a,
                           double b, const QuadratureOptions& opts = {},
                           std::span<const double> breakpoints = {});

// Same, but raises QuadratureError if refinement stalls above tolerance.
double integrate_or_throw(const std::function<double(double)>& f, double a,
                          double b, const QuadratureOptions& opts = {},
                          std::span<const double> breakpoints = {});

// Points target +/- span*2^-k for k = 1..levels, kept inside (lo, hi).
// Used to pre-split integration domains toward an interior singularity.
std::vector<double> geometric_grading(double target, double span, int levels,
                                      double lo, double hi);

// Integral of t^e over [x, y], 0 < x <= y.  Exact formula, stable near e = -1.
double power_segment_integral(double e, double x, double y);

// Exact integrals for the piecewise interpolant used by sampled profiles
// (power law between same-sign endpoint values, linear otherwise):
//   interp_segment_mass:  int_{r0}^{r1} s^(N-1) f(s) ds
//   interp_segment_outer: int_{r0}^{r1} t^(1-N) [M0 + int_{r0}^t s^(N-1) f ds] dt
double interp_segment_mass(double r0, double v0, double r1, double v1, int N);
double interp_segment_outer(double r0, double v0, double r1, double v1,
                            double M0, int N);

}  // namespace polyharm
