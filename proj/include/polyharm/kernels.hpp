#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "polyharm/profile.hpp"

namespace polyharm {

enum class Ternary { False, True, Inconclusive };

std::string to_string(Ternary t);

// Psi(r) = r^-alpha, 0 < alpha < N.
struct RieszPower {
  double alpha = 1.0;
};

// Psi(r) = r^-N * log(1 + 1/r)^-beta, 1 < beta <= N.  Behaves like
// r^(beta-N) at infinity and like r^-N log(1/r)^-beta near zero, so it is
// integrable at the origin (beta > 1) and non-increasing (beta <= N).
struct LogBorderline {
  double beta = 2.0;
};

// Kernel given by samples plus declared asymptotics value ~ c r^e log(r)^l
// past the grid.  Below the grid the first segment's log-log slope is
// continued.
struct TabulatedKernel {
  SampledProfile profile;  // tail_exponent must be set
  double tail_log_power = 0.0;
};

using Kernel = std::variant<RieszPower, LogBorderline, TabulatedKernel>;

// Parameter checks that need the ambient dimension.  Throws on violation.
void validate_kernel(const Kernel& k, int N);

// Psi(r) for r > 0.
double eval_kernel(const Kernel& k, int N, double r);

struct KernelTail {
  double exponent = 0.0;   // value ~ c r^exponent at infinity
  double log_power = 0.0;  // ... * log(r)^log_power
  bool exact = false;      // symbolic families are exact, tabulated declared
};

KernelTail kernel_tail(const Kernel& k, int N);

struct AdmissibilityCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct AdmissibilityReport {
  bool admissible = false;
  std::vector<AdmissibilityCheck> checks;
};

// Positivity, monotonicity, local integrability at the origin, and r^N Psi
// unbounded.  Symbolic families are decided from their parameters; tabulated
// kernels are checked numerically on `grid` (their own grid when empty).
AdmissibilityReport check_admissible(const Kernel& k, int N,
                                     std::span<const double> grid = {});

// Whether limsup_{r->inf} r^(2N - (N-2m) tau) Psi(r) > 0, the kernel-side
// hypothesis of the tail nonexistence clause; tau plays the role of p + q.
// Symbolic families reduce to an exponent sign; tabulated kernels take the
// max of the weighted samples over the top decade against 1e-12.
bool tail_condition_ii2(const Kernel& k, int N, int m, double tau);

struct IntegralCondition {
  Ternary holds = Ternary::Inconclusive;  // True = integral diverges
  double exponent = 0.0;                  // integrand power at infinity
  std::string detail;
};

// Whether int^inf s^(N-1-p(N-2m)) Psi(s) ds diverges.  Riesz: diverges iff
// p(N-2m) + alpha <= N.  LogBorderline: the integrand behaves like
// s^(beta - 1 - p(N-2m)) at infinity, so divergence holds iff
// p(N-2m) <= beta (at equality the integrand is ~ 1/s).  Tabulated kernels
// are decided from the declared tail and report Inconclusive within 0.02 of
// the critical exponent.
IntegralCondition integral_condition_ii1(const Kernel& k, int N, int m, double p);

void to_json(nlohmann::json& j, const Kernel& k);
void from_json(const nlohmann::json& j, Kernel& k);

}  // namespace polyharm
