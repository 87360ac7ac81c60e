#include "polyharm/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace polyharm {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

// Extended log-log evaluation of a tabulated kernel: declared power (and log
// power) above the grid, first-segment slope continuation below it.
double eval_tabulated(const TabulatedKernel& k, double r) {
  const SampledProfile& p = k.profile;
  if (r >= p.radii.front() && r <= p.radii.back()) return p.interpolate(r);
  if (r > p.radii.back()) {
    const double rb = p.radii.back(), vb = p.values.back();
    double v = vb * std::pow(r / rb, *p.tail_exponent);
    if (k.tail_log_power != 0.0)
      v *= std::pow(std::log1p(r) / std::log1p(rb), k.tail_log_power);
    return v;
  }
  const double r0 = p.radii[0], r1 = p.radii[1];
  const double v0 = p.values[0], v1 = p.values[1];
  const double g = std::log(v1 / v0) / std::log(r1 / r0);
  return v0 * std::pow(r / r0, g);
}

}  // namespace

std::string to_string(Ternary t) {
  switch (t) {
    case Ternary::False: return "false";
    case Ternary::True: return "true";
    default: return "inconclusive";
  }
}

void validate_kernel(const Kernel& k, int N) {
  if (N < 1) throw std::invalid_argument("kernel: N must be >= 1");
  if (const auto* rz = std::get_if<RieszPower>(&k)) {
    if (!(rz->alpha > 0.0) || !(rz->alpha < N))
      throw std::invalid_argument("RieszPower: need 0 < alpha < N");
  } else if (const auto* lb = std::get_if<LogBorderline>(&k)) {
    if (!(lb->beta > 1.0) || !(lb->beta <= N))
      throw std::invalid_argument("LogBorderline: need 1 < beta <= N");
  } else {
    const auto& tk = std::get<TabulatedKernel>(k);
    tk.profile.validate();
    if (!tk.profile.tail_exponent)
      throw std::invalid_argument("TabulatedKernel: tail exponent required");
    for (double v : tk.profile.values)
      if (!(v > 0.0))
        throw std::invalid_argument("TabulatedKernel: values must be positive");
  }
}

double eval_kernel(const Kernel& k, int N, double r) {
  if (!(r > 0.0)) throw std::domain_error("eval_kernel: r must be positive");
  if (const auto* rz = std::get_if<RieszPower>(&k)) {
    return std::pow(r, -rz->alpha);
  }
  if (const auto* lb = std::get_if<LogBorderline>(&k)) {
    return std::pow(r, double(-N)) * std::pow(std::log1p(1.0 / r), -lb->beta);
  }
  return eval_tabulated(std::get<TabulatedKernel>(k), r);
}

KernelTail kernel_tail(const Kernel& k, int N) {
  if (const auto* rz = std::get_if<RieszPower>(&k)) return {-rz->alpha, 0.0, true};
  if (const auto* lb = std::get_if<LogBorderline>(&k)) {
    // r^-N log(1+1/r)^-beta = r^(beta-N) (r log(1+1/r))^-beta and the second
    // factor tends to 1, so the tail is the pure power beta - N.
    return {lb->beta - double(N), 0.0, true};
  }
  const auto& tk = std::get<TabulatedKernel>(k);
  return {*tk.profile.tail_exponent, tk.tail_log_power, false};
}

AdmissibilityReport check_admissible(const Kernel& k, int N,
                                     std::span<const double> grid) {
  validate_kernel(k, N);
  AdmissibilityReport rep;
  auto add = [&](const std::string& name, bool ok, const std::string& detail) {
    rep.checks.push_back({name, ok, detail});
  };

  if (const auto* rz = std::get_if<RieszPower>(&k)) {
    add("positive", true, "r^-alpha > 0");
    add("non_increasing", true, "alpha > 0");
    add("locally_integrable", rz->alpha < N,
        "int_0^1 r^(N-1-alpha) dr finite iff alpha < N; alpha = " + fmt(rz->alpha));
    add("mass_unbounded", rz->alpha < N,
        "r^N Psi = r^(N-alpha) -> inf iff alpha < N");
  } else if (const auto* lb = std::get_if<LogBorderline>(&k)) {
    add("positive", true, "log(1+1/r) > 0 for r > 0");
    add("non_increasing", lb->beta <= N, "holds iff beta <= N; beta = " + fmt(lb->beta));
    add("locally_integrable", lb->beta > 1.0,
        "int_0 dr/(r log^beta(1/r)) finite iff beta > 1; beta = " + fmt(lb->beta));
    add("mass_unbounded", true, "r^N Psi = log(1+1/r)^-beta -> inf");
  } else {
    const auto& tk = std::get<TabulatedKernel>(k);
    std::vector<double> g(grid.begin(), grid.end());
    if (g.empty()) g = tk.profile.radii;
    std::sort(g.begin(), g.end());

    bool positive = true, monotone = true;
    double prev = 0.0;
    for (size_t i = 0; i < g.size(); ++i) {
      const double v = eval_kernel(k, N, g[i]);
      if (!(v > 0.0)) positive = false;
      if (i > 0 && v > prev * (1.0 + 1e-12)) monotone = false;
      prev = v;
    }
    add("positive", positive, "sampled values positive");
    add("non_increasing", monotone, "sampled values non-increasing");

    // Slope of log Psi over the bottom decade estimates the singularity
    // power gamma; int_0 r^(N-1) Psi dr is finite iff gamma < N.
    const double r_lo = g.front();
    const double v_lo = eval_kernel(k, N, r_lo);
    const double v_hi = eval_kernel(k, N, r_lo * 10.0);
    const double gamma = -std::log(v_hi / v_lo) / std::log(10.0);
    add("locally_integrable", gamma < N,
        "origin slope estimate gamma = " + fmt(gamma) + " vs N = " + fmt(double(N)));

    // r^N Psi should still be growing across the top decade.
    const double r_hi = g.back();
    const double m_lo = std::pow(r_hi / 10.0, N) * eval_kernel(k, N, r_hi / 10.0);
    const double m_hi = std::pow(r_hi, N) * eval_kernel(k, N, r_hi);
    add("mass_unbounded", m_hi > m_lo,
        "r^N Psi grew from " + fmt(m_lo) + " to " + fmt(m_hi) + " over the top decade");
  }

  rep.admissible = std::all_of(rep.checks.begin(), rep.checks.end(),
                               [](const AdmissibilityCheck& c) { return c.passed; });
  return rep;
}

bool tail_condition_ii2(const Kernel& k, int N, int m, double tau) {
  validate_kernel(k, N);
  const double weight = 2.0 * N - double(N - 2 * m) * tau;
  if (const auto* rz = std::get_if<RieszPower>(&k)) {
    return weight - rz->alpha >= 0.0;
  }
  if (const auto* lb = std::get_if<LogBorderline>(&k)) {
    // r^weight Psi ~ r^(weight + beta - N); at exponent zero the limit is 1.
    return weight + lb->beta - N >= 0.0;
  }
  const auto& tk = std::get<TabulatedKernel>(k);
  const double r_hi = tk.profile.radii.back();
  double best = 0.0;
  for (double r = r_hi / 10.0; r <= r_hi * (1.0 + 1e-12); r *= std::pow(10.0, 0.125))
    best = std::max(best, std::pow(r, weight) * eval_kernel(k, N, r));
  return best > 1e-12;
}

IntegralCondition integral_condition_ii1(const Kernel& k, int N, int m, double p) {
  validate_kernel(k, N);
  IntegralCondition out;
  const double drop = p * double(N - 2 * m);  // decay of u^p for u ~ r^-(N-2m)
  if (const auto* rz = std::get_if<RieszPower>(&k)) {
    out.exponent = N - 1.0 - drop - rz->alpha;
    out.holds = (out.exponent >= -1.0) ? Ternary::True : Ternary::False;
    out.detail = "integrand ~ s^(" + fmt(out.exponent) + "); diverges iff exponent >= -1";
    return out;
  }
  if (const auto* lb = std::get_if<LogBorderline>(&k)) {
    // s^(N-1-drop) Psi(s) ~ s^(beta-1-drop) with factor (s log(1+1/s))^-beta -> 1,
    // so divergence holds iff drop <= beta.
    out.exponent = lb->beta - 1.0 - drop;
    out.holds = (out.exponent >= -1.0) ? Ternary::True : Ternary::False;
    out.detail = "integrand ~ s^(" + fmt(out.exponent) + "); diverges iff p(N-2m) <= beta";
    return out;
  }
  const auto& tk = std::get<TabulatedKernel>(k);
  out.exponent = N - 1.0 - drop + *tk.profile.tail_exponent;
  const double margin = out.exponent + 1.0;
  if (std::abs(margin) < 0.02) {
    out.holds = Ternary::Inconclusive;
    out.detail = "declared tail puts the integrand within 0.02 of s^-1";
  } else if (margin > 0.0) {
    out.holds = Ternary::True;
    out.detail = "declared tail gives integrand ~ s^(" + fmt(out.exponent) + ")";
  } else if (margin == 0.0) {
    out.holds = Ternary::True;
    out.detail = "borderline s^-1 tail";
  } else {
    out.holds = Ternary::False;
    out.detail = "declared tail gives integrand ~ s^(" + fmt(out.exponent) + ")";
  }
  return out;
}

void to_json(nlohmann::json& j, const Kernel& k) {
  if (const auto* rz = std::get_if<RieszPower>(&k)) {
    j = nlohmann::json{{"type", "riesz"}, {"alpha", rz->alpha}};
  } else if (const auto* lb = std::get_if<LogBorderline>(&k)) {
    j = nlohmann::json{{"type", "log_borderline"}, {"beta", lb->beta}};
  } else {
    const auto& tk = std::get<TabulatedKernel>(k);
    j = nlohmann::json{{"type", "tabulated"},
                       {"profile", tk.profile},
                       {"tail_log_power", tk.tail_log_power}};
  }
}

void from_json(const nlohmann::json& j, Kernel& k) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "riesz") {
    k = RieszPower{j.at("alpha").get<double>()};
  } else if (type == "log_borderline") {
    k = LogBorderline{j.at("beta").get<double>()};
  } else if (type == "tabulated") {
    TabulatedKernel tk;
    j.at("profile").get_to(tk.profile);
    if (j.contains("tail_log_power")) j.at("tail_log_power").get_to(tk.tail_log_power);
    k = std::move(tk);
  } else {
    throw std::invalid_argument("kernel json: unknown type " + type);
  }
}

}  // namespace polyharm
