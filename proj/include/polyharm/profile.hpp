#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "polyharm/radial_expr.hpp"

namespace polyharm {

// Non-negative radial function tabulated on a strictly increasing positive
// grid.  tail_exponent declares the power law value ~ c r^e past the last
// grid point; without it the profile cannot be evaluated beyond the grid
// unless it already vanishes there.
struct SampledProfile {
  std::vector<double> radii;
  std::vector<double> values;
  std::optional<double> tail_exponent;

  void validate() const;

  // Piecewise power-law (log-log) interpolation inside the grid; falls back
  // to linear where a segment endpoint vanishes or signs differ.  Below the
  // first grid point the value is held constant (regular center).
  double interpolate(double r) const;

  // interpolate() extended past the grid by the declared tail power anchored
  // at the last sample.  Throws std::runtime_error when the tail is needed
  // but absent and the last value is nonzero.
  double eval_extended(double r) const;
};

std::vector<double> log_grid(double r_min, double r_max, int n);

SampledProfile profile_from_function(const std::function<double(double)>& f,
                                     double r_min, double r_max, int n,
                                     std::optional<double> tail_exponent);

// CSV with header "radius,value", one sample per line.
void write_profile_csv(std::ostream& os, const SampledProfile& p);
SampledProfile read_profile_csv(std::istream& is);

void to_json(nlohmann::json& j, const SampledProfile& p);
void from_json(const nlohmann::json& j, SampledProfile& p);

// Evaluable radial function together with the decay data the quadrature and
// classification routines need: a tail growth/decay exponent (value ~ c r^e
// for large r), whether that exponent is exact or declared, and radii where
// the function may kink (integration seeds).
struct RadialField {
  std::function<double(double)> eval;
  double tail_exponent = 0.0;
  bool tail_exact = false;
  std::vector<double> breakpoints;
};

RadialField field_of(const SampledProfile& p);
RadialField field_of(const RadialExpr& e);

}  // namespace polyharm
