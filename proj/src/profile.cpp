#include "polyharm/profile.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace polyharm {

void SampledProfile::validate() const {
  if (radii.size() != values.size())
    throw std::invalid_argument("SampledProfile: radii/values size mismatch");
  if (radii.size() < 2)
    throw std::invalid_argument("SampledProfile: need at least two samples");
  if (radii.front() <= 0.0)
    throw std::invalid_argument("SampledProfile: radii must be positive");
  for (size_t i = 1; i < radii.size(); ++i)
    if (!(radii[i] > radii[i - 1]))
      throw std::invalid_argument("SampledProfile: radii must be strictly increasing");
  for (double v : values)
    if (!std::isfinite(v))
      throw std::invalid_argument("SampledProfile: values must be finite");
}

double SampledProfile::interpolate(double r) const {
  if (r <= radii.front()) return values.front();
  if (r >= radii.back()) return values.back();
  const auto it = std::upper_bound(radii.begin(), radii.end(), r);
  const size_t i = size_t(it - radii.begin()) - 1;
  const double r0 = radii[i], r1 = radii[i + 1];
  const double v0 = values[i], v1 = values[i + 1];
  if (v0 > 0.0 && v1 > 0.0) {
    const double g = std::log(v1 / v0) / std::log(r1 / r0);
    return v0 * std::pow(r / r0, g);
  }
  return v0 + (v1 - v0) * (r - r0) / (r1 - r0);
}

double SampledProfile::eval_extended(double r) const {
  if (r <= radii.back()) return interpolate(r);
  const double vb = values.back();
  if (vb == 0.0) return 0.0;
  if (!tail_exponent)
    throw std::runtime_error(
        "SampledProfile: evaluation past the grid needs a declared tail exponent");
  return vb * std::pow(r / radii.back(), *tail_exponent);
}

std::vector<double> log_grid(double r_min, double r_max, int n) {
  if (!(r_min > 0.0) || !(r_max > r_min) || n < 2)
    throw std::invalid_argument("log_grid: need 0 < r_min < r_max and n >= 2");
  std::vector<double> g(n);
  const double step = std::log(r_max / r_min) / (n - 1);
  for (int i = 0; i < n; ++i) g[i] = r_min * std::exp(step * i);
  g.front() = r_min;
  g.back() = r_max;
  return g;
}

SampledProfile profile_from_function(const std::function<double(double)>& f,
                                     double r_min, double r_max, int n,
                                     std::optional<double> tail_exponent) {
  SampledProfile p;
  p.radii = log_grid(r_min, r_max, n);
  p.values.reserve(p.radii.size());
  for (double r : p.radii) p.values.push_back(f(r));
  p.tail_exponent = tail_exponent;
  p.validate();
  return p;
}

void write_profile_csv(std::ostream& os, const SampledProfile& p) {
  os << "radius,value\n";
  os.precision(17);
  for (size_t i = 0; i < p.radii.size(); ++i)
    os << p.radii[i] << ',' << p.values[i] << '\n';
}

SampledProfile read_profile_csv(std::istream& is) {
  SampledProfile p;
  std::string line;
  if (!std::getline(is, line))
    throw std::runtime_error("profile csv: empty input");
  // Tolerate an optional header line.
  auto parse = [&](const std::string& s) -> bool {
    std::istringstream ls(s);
    double r, v;
    char comma;
    if (!(ls >> r >> comma >> v) || comma != ',') return false;
    p.radii.push_back(r);
    p.values.push_back(v);
    return true;
  };
  if (!parse(line) && line.rfind("radius", 0) != 0)
    throw std::runtime_error("profile csv: bad first line: " + line);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (!parse(line)) throw std::runtime_error("profile csv: bad line: " + line);
  }
  p.validate();
  return p;
}

void to_json(nlohmann::json& j, const SampledProfile& p) {
  j = nlohmann::json{{"radii", p.radii}, {"values", p.values}};
  if (p.tail_exponent)
    j["tail_exponent"] = *p.tail_exponent;
  else
    j["tail_exponent"] = nullptr;
}

void from_json(const nlohmann::json& j, SampledProfile& p) {
  j.at("radii").get_to(p.radii);
  j.at("values").get_to(p.values);
  if (j.contains("tail_exponent") && !j["tail_exponent"].is_null())
    p.tail_exponent = j["tail_exponent"].get<double>();
  else
    p.tail_exponent = std::nullopt;
  p.validate();
}

RadialField field_of(const SampledProfile& p) {
  p.validate();
  RadialField f;
  f.eval = [p](double r) { return p.eval_extended(r); };
  if (p.tail_exponent) {
    f.tail_exponent = *p.tail_exponent;
  } else if (p.values.back() == 0.0) {
    f.tail_exponent = -std::numeric_limits<double>::infinity();
  } else {
    throw std::invalid_argument("field_of: profile has no tail exponent");
  }
  f.tail_exact = false;
  f.breakpoints = {p.radii.front(), p.radii.back()};
  return f;
}

RadialField field_of(const RadialExpr& e) {
  RadialField f;
  f.eval = [e](double r) { return e.eval(r); };
  const auto dom = e.dominant_exponent();
  f.tail_exponent = dom ? *dom : -std::numeric_limits<double>::infinity();
  f.tail_exact = true;
  return f;
}

}  // namespace polyharm
