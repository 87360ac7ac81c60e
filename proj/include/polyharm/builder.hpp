#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "polyharm/barrier.hpp"
#include "polyharm/profile.hpp"
#include "polyharm/radial_expr.hpp"

namespace polyharm {

// Data of (-Delta)^m u >= (|x|^-alpha * u^p) u^q on R^N.  The constructive
// existence route needs the strict regime p >= 1, q > 1, N > 2m,
// 0 < alpha < N.
struct BuilderParams {
  int N = 5;
  int m = 1;
  double alpha = 2.0;
  double p = 2.0;
  double q = 2.0;
};

void validate(const BuilderParams& params);

// The decay exponent window is empty: the parameters sit outside the
// existence region.
class InfeasibleRegionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BuildOptions {
  double grid_min = 1e-3;
  double grid_max = 1e5;
  int grid_points = 512;
  double quad_rel_tol = 1e-7;
  // Fraction of the sampled comparison infimum actually used for the scale;
  // the slack absorbs quadrature error in the certified margins.
  double guard = 0.9;
};

// A fully assembled supersolution
//   U = scale * (v + M W_m),  v = (a + r^2)^(-kappa/2),
// with W_m the m-fold decaying radial potential of the plateau cutoff phi
// (phi = 1 on B_R, 0 outside B_2R), so that
//   (-Delta)^m U = scale * (F + M phi),  F = (-Delta)^m v,
// holds exactly for the stored piecewise-power phi.
struct Construction {
  BuilderParams params;
  double kappa = 0.0;
  double a = 0.0;
  double c_lower = 0.0;  // F(a, r) >= c_lower r^(-kappa-2m) for r >= R
  double R = 0.0;
  double M = 0.0;
  double C1 = 0.0;  // comparison infimum outside B_R
  double C2 = 0.0;  // comparison infimum inside B_R
  double C = 0.0;   // min(C1, C2)
  double guard = 1.0;
  double scale = 0.0;  // (guard * C)^(1/(p+q-1))
  RadialExpr v;
  RadialExpr F;
  SampledProfile phi;
  std::vector<SampledProfile> chain;  // W_1, ..., W_m
};

// Decay exponent for v: midpoint of the admissible window
//   kappa (p+q-1) > N - alpha + 2m,   kappa p > N - alpha,
//   kappa (q-1) > 2m - alpha,         0 < kappa < N - 2m,
// nudged off p kappa = N.  Throws InfeasibleRegionError (naming the binding
// constraint) when the window is empty.
double choose_kappa(const BuilderParams& params);

// Largest a in {1, 1/2, 1/4, ...} with a positive top b-coefficient, so that
// (-Delta)^m v decays exactly like b_m r^(-kappa-2m).
double choose_a(int N, int m, double kappa);

// (c_lower, R): c_lower = b_m(a)/2 and R the smallest scanned radius > 1
// past which F(a, r) r^(kappa+2m) stays above c_lower (checked on a dense
// log grid up to 1e6, with the ratio's derivative sign closing the tail).
// a = 0 degenerates to the exact power case with R = 1.
std::pair<double, double> lower_bound_radius(int N, int m, double kappa,
                                             double a);

// Plateau cutoff phi for B_R / B_2R sampled on the build grid (R and 2R made
// grid points), and its potential chain W_1..W_m.
std::pair<SampledProfile, std::vector<SampledProfile>> build_correction(
    int N, int m, double R, const BuildOptions& opts = {});

// Full pipeline: kappa, a, (c_lower, R), correction, interior lift M,
// comparison constants C1/C2 from sampled infima of
// (-Delta)^m V / [(|x|^-alpha * V^p) V^q], and the final scale.
Construction build_supersolution(const BuilderParams& params,
                                 const BuildOptions& opts = {});

// U as an evaluable radial function (tail ~ r^-kappa).
RadialField field_of(const Construction& cons);

struct MarginSample {
  double radius = 0.0;
  double lhs = 0.0;     // (-Delta)^m U, exact for the stored object
  double rhs = 0.0;     // (|x|^-alpha * U^p) U^q by quadrature
  double margin = 0.0;  // (lhs - rhs) / (1 + |lhs|)
};

struct CertificationReport {
  bool pass = false;
  double tol = 0.0;
  double min_margin = 0.0;
  double min_margin_radius = 0.0;
  std::vector<MarginSample> samples;
};

// Pointwise supersolution check over `radii`: PASS iff every normalized
// margin is >= -tol.
CertificationReport verify_supersolution(const Construction& cons,
                                         const std::vector<double>& radii,
                                         double tol = 1e-8,
                                         double quad_rel_tol = 1e-7);

// Signs of (-Delta)^j U for j = 0..m on the grid; the v part is symbolic and
// the correction part reuses the chain ((-Delta)^j W_m = W_(m-j), W_0 = phi).
std::vector<LevelCheck> polysuperharmonic_check(const Construction& cons,
                                                const std::vector<double>& grid);

void to_json(nlohmann::json& j, const BuilderParams& p);
void from_json(const nlohmann::json& j, BuilderParams& p);
void to_json(nlohmann::json& j, const Construction& c);
void from_json(const nlohmann::json& j, Construction& c);
void to_json(nlohmann::json& j, const MarginSample& s);
void to_json(nlohmann::json& j, const CertificationReport& r);

}  // namespace polyharm
