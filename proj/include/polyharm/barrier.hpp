#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "polyharm/profile.hpp"
#include "polyharm/radial_expr.hpp"

namespace polyharm {

// Grid minimum of (-Delta)^level u; level 0 is u itself.  A level passes
// when the minimum is not below -1e-12 times the level's own magnitude.
struct LevelCheck {
  int level = 0;
  double min_value = 0.0;
  double min_radius = 0.0;
  bool pass = false;
};

// Signs of u, (-Delta)u, ..., (-Delta)^m u on the grid, computed symbolically.
std::vector<LevelCheck> polysuperharmonic_check(const RadialExpr& u, int N,
                                                int m,
                                                const std::vector<double>& grid);

// Spherical-average ladder w_i = average of (-Delta)^i u, i = 0..m-1, linked
// by -Delta w_i = w_(i+1), all sampled on one radii grid.
struct CascadeState {
  std::vector<SampledProfile> levels;
  std::vector<double> center_values;
};

// Rebuilds the ladder from samples of the plain Laplacian iterate
// Delta^(m-1) w (sign (-1)^(m-1) of the top ladder entry) by repeated
// radial integration
//   w(r) = w(0) - int_0^r t^(1-N) int_0^t s^(N-1) g(s) ds dt,
// the regular-center inverse of -Delta w = g.  center_values[i] = w_i(0)
// for i = 0..m-2, innermost level first.  Below the first grid point g is
// held at its innermost sample.
CascadeState radial_poisson_cascade(const SampledProfile& top, int N, int m,
                                    const std::vector<double>& center_values);

// w(0) + sum_{k=1}^{m-1} Delta^k w(0) r^(2k) / prod_{j=1..k} (2j)(N+2j-2),
// the radial Taylor polynomial through the Laplacian values at the center;
// center_derivs[k] = Delta^k w(0) for k = 0..m-1.  Exact on radial
// polyharmonic polynomials of degree <= 2(m-1).
double taylor_bound(const std::vector<double>& center_derivs, int N, int m,
                    double r);

// Ratio ladder for the cutoff test function phi_R = psi^(2m)(|x|/R):
//   ratio(R) = int u phi_R dx / [R^(2m-N) (int u^((p+q)/2) phi_R dx)^2].
// For a genuine solution the ratio stays bounded away from 0 as R grows; a
// decaying trend (log-log slope < -0.05) or a vanished mass integral fails.
struct CutoffEstimate {
  std::vector<double> R_values;
  std::vector<double> ratios;
  double min_ratio = 0.0;
  double slope = 0.0;
  bool degenerate = false;
  bool pass = false;
};

std::vector<double> default_cutoff_ladder();  // 4, 8, ..., 512

CutoffEstimate cutoff_integral_estimate(const RadialField& u, int N, int m,
                                        double p, double q,
                                        const std::vector<double>& ladder =
                                            default_cutoff_ladder());

// Delta^m of psi(r)^power at radius r (unit transition scale [1, 2]),
// computed with truncated Taylor arithmetic on the smoothstep; identically 0
// off the open transition.
double laplacian_power_of_psi(int N, int m, int power, double r);

// Scan of |Delta^m (psi^(4m))| / psi^(2m) over the transition, restricted to
// radii where psi^(2m) stays above `floor`; the ratio being bounded is what
// makes psi^(2m) a usable test function at every differentiation order.
struct PsiBoundCheck {
  double max_ratio = 0.0;
  double argmax_t = 0.0;
  int samples = 0;
  double floor = 1e-100;
};

PsiBoundCheck check_psi_cutoff_bound(int N, int m);

void to_json(nlohmann::json& j, const LevelCheck& c);
void to_json(nlohmann::json& j, const CutoffEstimate& e);
void to_json(nlohmann::json& j, const PsiBoundCheck& b);

}  // namespace polyharm
