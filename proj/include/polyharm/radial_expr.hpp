#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "json.hpp"

namespace polyharm {

// One term  coeff * r^(2j) * (a + r^2)^(-s)  of a radial expression.
// j is a non-negative integer, a >= 0, s real.  Pure powers of r are the
// a = 0 case and are kept in the normal form j = 0, i.e.  coeff * r^(-2s).
struct RadialTerm {
  double coeff = 0.0;
  int j = 0;
  double a = 0.0;
  double s = 0.0;
};

// Finite sum of RadialTerm, closed under the radial Laplacian in dimension N:
//
//   L[r^2j (a+r^2)^-s] = 2j(2j+N-2) r^(2j-2) (a+r^2)^-s
//                      - 2s(4j+N)   r^(2j)   (a+r^2)^-(s+1)
//                      + 4s(s+1)    r^(2j+2) (a+r^2)^-(s+2)
//
// Terms are kept canonical: a = 0 terms folded to j = 0, zero coefficients
// dropped, equal (j, a, s) keys merged, sorted by (a, s, j).
class RadialExpr {
 public:
  RadialExpr() = default;
  explicit RadialExpr(std::vector<RadialTerm> terms);

  static RadialExpr constant(double c);
  // coeff * r^exponent (any real exponent)
  static RadialExpr power(double coeff, double exponent);
  // coeff * (a + r^2)^(-s), a >= 0
  static RadialExpr shifted_power(double coeff, double a, double s);

  const std::vector<RadialTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  // Value at radius r >= 0.  A pure power with negative exponent is singular
  // at r = 0 and raises std::domain_error there.
  double eval(double r) const;

  // d/dr at radius r.
  double deriv(double r) const;

  RadialExpr scaled(double factor) const;

  // Largest growth exponent among terms: max over terms of 2j - 2s (pure
  // powers contribute their exponent).  Decaying expressions give a negative
  // value; nullopt when the expression is identically zero.
  std::optional<double> dominant_exponent() const;

  friend RadialExpr operator+(const RadialExpr& x, const RadialExpr& y);
  friend RadialExpr operator-(const RadialExpr& x, const RadialExpr& y);

 private:
  std::vector<RadialTerm> terms_;
  void canonicalize();
};

// Radial Laplacian in R^N applied termwise via the closed rule above.
RadialExpr laplacian(const RadialExpr& e, int N);

// (-1)^m * Laplacian applied m times.
RadialExpr neg_laplacian_power(const RadialExpr& e, int N, int m);

// prod_{j=1..m} (kappa + 2j - 2)(N - kappa - 2j);  this is the coefficient in
// (-Delta)^m r^-kappa = C(N, m, kappa) r^-(kappa+2m).
double power_law_coefficient(int N, int m, double kappa);

// Coefficients b_0..b_m of
//   (-Delta)^m (a + r^2)^(-kappa/2)
//     = (a + r^2)^(-kappa/2 - 2m) * sum_j b_j(a) r^(2j).
// Computed by expanding the symbolic image of the iterated Laplacian against
// (a + r^2)^(2m); the expansion has exact degree m, and b_m(0) equals
// power_law_coefficient(N, m, kappa).
std::vector<double> b_coefficients(int N, int m, double kappa, double a);

void to_json(nlohmann::json& j, const RadialTerm& t);
void from_json(const nlohmann::json& j, RadialTerm& t);
void to_json(nlohmann::json& j, const RadialExpr& e);
void from_json(const nlohmann::json& j, RadialExpr& e);

}  // namespace polyharm
