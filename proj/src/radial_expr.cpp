#include "polyharm/radial_expr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace polyharm {

namespace {

bool key_close(double x, double y) {
  return std::abs(x - y) <= 1e-12 * (1.0 + std::max(std::abs(x), std::abs(y)));
}

double binomial(int n, int k) {
  double v = 1.0;
  for (int i = 0; i < k; ++i) v = v * double(n - i) / double(i + 1);
  return v;
}

}  // namespace

RadialExpr::RadialExpr(std::vector<RadialTerm> terms) : terms_(std::move(terms)) {
  canonicalize();
}

void RadialExpr::canonicalize() {
  for (RadialTerm& t : terms_) {
    if (t.a < 0.0) throw std::invalid_argument("RadialTerm: a must be >= 0");
    if (t.j < 0) throw std::invalid_argument("RadialTerm: j must be >= 0");
    if (t.a == 0.0 && t.j != 0) {
      // r^2j (r^2)^-s = (r^2)^-(s-j)
      t.s -= t.j;
      t.j = 0;
    }
  }
  std::erase_if(terms_, [](const RadialTerm& t) { return t.coeff == 0.0; });
  std::sort(terms_.begin(), terms_.end(), [](const RadialTerm& x, const RadialTerm& y) {
    if (x.a != y.a) return x.a < y.a;
    if (x.s != y.s) return x.s < y.s;
    return x.j < y.j;
  });
  std::vector<RadialTerm> merged;
  for (const RadialTerm& t : terms_) {
    if (!merged.empty() && merged.back().j == t.j && key_close(merged.back().a, t.a) &&
        key_close(merged.back().s, t.s)) {
      merged.back().coeff += t.coeff;
    } else {
      merged.push_back(t);
    }
  }
  std::erase_if(merged, [](const RadialTerm& t) { return t.coeff == 0.0; });
  terms_ = std::move(merged);
}

RadialExpr RadialExpr::constant(double c) {
  return RadialExpr({RadialTerm{c, 0, 0.0, 0.0}});
}

RadialExpr RadialExpr::power(double coeff, double exponent) {
  return RadialExpr({RadialTerm{coeff, 0, 0.0, -exponent / 2.0}});
}

RadialExpr RadialExpr::shifted_power(double coeff, double a, double s) {
  return RadialExpr({RadialTerm{coeff, 0, a, s}});
}

double RadialExpr::eval(double r) const {
  if (r < 0.0) throw std::domain_error("RadialExpr::eval: r must be >= 0");
  double sum = 0.0;
  for (const RadialTerm& t : terms_) {
    if (t.a == 0.0) {
      const double e = -2.0 * t.s;  // canonical pure power r^e
      if (r == 0.0) {
        if (e < 0.0) throw std::domain_error("RadialExpr::eval: singular at r = 0");
        sum += (e == 0.0) ? t.coeff : 0.0;
      } else {
        sum += t.coeff * std::pow(r, e);
      }
    } else {
      const double rp = (t.j == 0) ? 1.0 : std::pow(r * r, t.j);
      sum += t.coeff * rp * std::pow(t.a + r * r, -t.s);
    }
  }
  return sum;
}

double RadialExpr::deriv(double r) const {
  if (r < 0.0) throw std::domain_error("RadialExpr::deriv: r must be >= 0");
  double sum = 0.0;
  for (const RadialTerm& t : terms_) {
    if (t.a == 0.0) {
      const double e = -2.0 * t.s;
      if (e == 0.0) continue;
      if (r == 0.0) {
        if (e < 1.0) throw std::domain_error("RadialExpr::deriv: singular at r = 0");
        sum += (e == 1.0) ? t.coeff : 0.0;
      } else {
        sum += t.coeff * e * std::pow(r, e - 1.0);
      }
    } else {
      const double base = t.a + r * r;
      double d = 0.0;
      if (t.j > 0) d += 2.0 * t.j * std::pow(r, 2 * t.j - 1) * std::pow(base, -t.s);
      if (t.s != 0.0)
        d += -2.0 * t.s * std::pow(r, 2 * t.j + 1) * std::pow(base, -t.s - 1.0);
      sum += t.coeff * d;
    }
  }
  return sum;
}

RadialExpr RadialExpr::scaled(double factor) const {
  std::vector<RadialTerm> out = terms_;
  for (RadialTerm& t : out) t.coeff *= factor;
  return RadialExpr(std::move(out));
}

std::optional<double> RadialExpr::dominant_exponent() const {
  if (terms_.empty()) return std::nullopt;
  double best = -std::numeric_limits<double>::infinity();
  for (const RadialTerm& t : terms_) best = std::max(best, 2.0 * t.j - 2.0 * t.s);
  return best;
}

RadialExpr operator+(const RadialExpr& x, const RadialExpr& y) {
  std::vector<RadialTerm> all = x.terms_;
  all.insert(all.end(), y.terms_.begin(), y.terms_.end());
  return RadialExpr(std::move(all));
}

RadialExpr operator-(const RadialExpr& x, const RadialExpr& y) {
  return x + y.scaled(-1.0);
}

RadialExpr laplacian(const RadialExpr& e, int N) {
  if (N < 1) throw std::invalid_argument("laplacian: N must be >= 1");
  std::vector<RadialTerm> out;
  for (const RadialTerm& t : e.terms()) {
    if (t.j > 0) {
      const double c = t.coeff * 2.0 * t.j * (2.0 * t.j + N - 2.0);
      if (c != 0.0) out.push_back({c, t.j - 1, t.a, t.s});
    }
    if (t.s != 0.0) {
      out.push_back({t.coeff * -2.0 * t.s * (4.0 * t.j + N), t.j, t.a, t.s + 1.0});
      const double c3 = t.coeff * 4.0 * t.s * (t.s + 1.0);
      if (c3 != 0.0) out.push_back({c3, t.j + 1, t.a, t.s + 2.0});
    }
  }
  return RadialExpr(std::move(out));
}

RadialExpr neg_laplacian_power(const RadialExpr& e, int N, int m) {
  if (m < 0) throw std::invalid_argument("neg_laplacian_power: m must be >= 0");
  RadialExpr cur = e;
  for (int i = 0; i < m; ++i) cur = laplacian(cur, N);
  return (m % 2 == 0) ? cur : cur.scaled(-1.0);
}

double power_law_coefficient(int N, int m, double kappa) {
  double prod = 1.0;
  for (int j = 1; j <= m; ++j)
    prod *= (kappa + 2.0 * j - 2.0) * (N - kappa - 2.0 * j);
  return prod;
}

std::vector<double> b_coefficients(int N, int m, double kappa, double a) {
  if (m < 1) throw std::invalid_argument("b_coefficients: m must be >= 1");
  if (a < 0.0) throw std::invalid_argument("b_coefficients: a must be >= 0");
  const RadialExpr image =
      neg_laplacian_power(RadialExpr::shifted_power(1.0, a, kappa / 2.0), N, m);

  // Multiply the image by (a + r^2)^(kappa/2 + 2m) and collect the resulting
  // polynomial in r^2.  Every term of the image has s = kappa/2 + d with an
  // integer offset d in [0, 2m] (a > 0), or is the pure power r^-(kappa+2m)
  // when a = 0, so the product is a genuine polynomial.
  std::vector<double> poly(2 * m + 2, 0.0);
  double scale = 0.0;
  for (const RadialTerm& t : image.terms()) {
    if (t.a == 0.0) {
      const double e = -2.0 * t.s;  // pure power exponent
      const double deg2 = (e + kappa + 4.0 * m) / 2.0;
      const long deg = std::lround(deg2);
      if (std::abs(deg2 - deg) > 1e-9 || deg < 0 || deg >= long(poly.size()))
        throw std::logic_error("b_coefficients: unexpected pure power in image");
      poly[deg] += t.coeff;
      scale = std::max(scale, std::abs(t.coeff));
    } else {
      const double doff = t.s - kappa / 2.0;
      const long d = std::lround(doff);
      if (std::abs(doff - d) > 1e-9 || d < 0 || d > 2 * m)
        throw std::logic_error("b_coefficients: unexpected exponent offset in image");
      const int n = int(2 * m - d);  // multiply by (a + r^2)^n, expand
      for (int k = 0; k <= n; ++k) {
        const double c = t.coeff * binomial(n, k) * std::pow(a, double(n - k));
        const int deg = t.j + k;
        if (deg >= int(poly.size()))
          throw std::logic_error("b_coefficients: degree overflow");
        poly[deg] += c;
        scale = std::max(scale, std::abs(c));
      }
    }
  }
  // Degrees above m cancel identically; anything left is floating point dust.
  for (size_t d = m + 1; d < poly.size(); ++d) {
    if (std::abs(poly[d]) > 1e-12 * std::max(scale, 1.0))
      throw std::logic_error("b_coefficients: higher-degree terms failed to cancel");
  }
  poly.resize(m + 1);
  return poly;
}

void to_json(nlohmann::json& j, const RadialTerm& t) {
  j = nlohmann::json{{"coeff", t.coeff}, {"j", t.j}, {"a", t.a}, {"s", t.s}};
}

void from_json(const nlohmann::json& j, RadialTerm& t) {
  j.at("coeff").get_to(t.coeff);
  j.at("j").get_to(t.j);
  j.at("a").get_to(t.a);
  j.at("s").get_to(t.s);
}

void to_json(nlohmann::json& j, const RadialExpr& e) {
  j = nlohmann::json{{"terms", e.terms()}};
}

void from_json(const nlohmann::json& j, RadialExpr& e) {
  std::vector<RadialTerm> terms;
  j.at("terms").get_to(terms);
  e = RadialExpr(std::move(terms));
}

}  // namespace polyharm
