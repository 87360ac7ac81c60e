#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "polyharm/kernels.hpp"
#include "polyharm/profile.hpp"
#include "polyharm/quadrature.hpp"

namespace polyharm {

class NonIntegrableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Surface area of the unit sphere S^(d-1) in R^d.
double unit_sphere_area(int d);

struct ConvolveOptions {
  double rel_tol = 1e-7;
  double angular_rel_tol = 1e-8;
  int max_intervals = 20000;
};

// Spherical average of the kernel over directions:
//   A(r, rho) = |S^(N-2)| int_0^pi Psi(sqrt(r^2 + rho^2 - 2 r rho cos t))
//               sin^(N-2) t dt        (N >= 2)
// so that (Psi * g)(r) = int_0^inf g(rho) rho^(N-1) A(r, rho) drho for
// radial g.  With Psi == 1 this returns |S^(N-1)|.
double angular_average(const Kernel& k, int N, double r, double rho,
                       double rel_tol = 1e-8);

// (Psi * f^p)(x) at |x| = r via the radial reduction above; N = 1 uses
// (Psi*g)(r) = int_0^inf g(rho) (Psi(|r-rho|) + Psi(r+rho)) drho.
// Throws NonIntegrableError when the tail exponents say the convolution
// integral diverges, QuadratureError when refinement stalls.
double convolve_radial(const Kernel& k, const RadialField& f, double p, int N,
                       double r, const ConvolveOptions& opts = {});

// Midpoint-rule convolution over the box [-L, L]^N (N <= 3) with an
// equal-volume ball patch for the kernel cell containing x.  Oracle-grade
// checker for convolve_radial; throws when the declared tail of f puts more
// than 0.1% of the integral outside the box.
double convolve_bruteforce(const Kernel& k, const RadialField& f, double p,
                           int N, double box_halfwidth, int cells_per_axis,
                           const std::array<double, 3>& x);

enum class DecayLabel { Subcritical, Critical, Supercritical };

std::string to_string(DecayLabel label);

struct DecayFit {
  DecayLabel label = DecayLabel::Subcritical;
  // Subcritical/supercritical: least squares slope of log g vs log r,
  // predictions N - alpha - beta and -alpha.  Critical (beta = N): slope of
  // (log g - log log r) vs log r, prediction -alpha, log factor made explicit.
  double fitted_exponent = 0.0;
  // Critical case: slope of (log g + alpha log r) vs log log r, the fitted
  // power of the log factor (expected positive, near 1).  Zero otherwise.
  double log_power = 0.0;
  double r_squared = 0.0;
  std::vector<double> radii;
  std::vector<double> values;
};

// Fits the decay rate of g = Psi_alpha * f on [window_lo, window_hi] and
// labels it by beta = -tail(f) against N (beta < N / = N / > N).  Requires
// beta > N - alpha, else the convolution diverges.
DecayFit decay_fit(double alpha, const RadialField& f, int N,
                   double window_lo = 1e2, double window_hi = 1e3,
                   int points = 13);

struct FinitenessReport {
  Ternary finite = Ternary::Inconclusive;
  double exponent = 0.0;  // growth exponent of rho^(N-1) f(rho)^p Psi(rho/2)
  double margin = 0.0;    // -(exponent + 1); positive means finite
  bool exact = false;
  std::string detail;
};

// Whether int_{|y|>1} f(|y|)^p Psi(|y|/2) dy converges, decided from the tail
// exponents.  Exact tails decide the boundary strictly (equality diverges
// unless a log power < -1 saves it); declared tails report Inconclusive
// within 0.02 of critical.
FinitenessReport finiteness_check(const RadialField& f, const Kernel& k,
                                  double p, int N);

// W_1, ..., W_m with (-Delta) W_1 = f, (-Delta) W_(k+1) = W_k, each W_k the
// decaying Newtonian-type potential
//   W(r) = int_r^inf t^(1-N) int_0^t s^(N-1) g(s) ds dt.
// Needs N >= 3 and tails decaying faster than r^-2 at every level; the exact
// multi-term tail law is propagated internally, and each returned profile
// carries its dominant tail exponent.
std::vector<SampledProfile> newtonian_potential_chain(const SampledProfile& f,
                                                      int N, int m);

}  // namespace polyharm
