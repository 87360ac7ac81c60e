#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace polyharm {

// Truncated Taylor expansion sum_k c[k] (x - x0)^k carried through composite
// expressions; the usual way to get exact high-order derivatives of formulas
// built from +, *, 1/., exp without symbolic differentiation.  Binary
// operations truncate to the shorter operand: combining a jet known to order
// k with one known to order l yields order min(k, l), and deriv() drops one
// order, so the order bookkeeping tracks how many honest derivatives remain.
class TaylorJet {
 public:
  TaylorJet() : c_(1, 0.0) {}
  explicit TaylorJet(std::vector<double> c) : c_(std::move(c)) {
    if (c_.empty()) c_.assign(1, 0.0);
  }

  static TaylorJet constant(double v, int order) {
    std::vector<double> c(static_cast<size_t>(order) + 1, 0.0);
    c[0] = v;
    return TaylorJet(std::move(c));
  }

  // The identity x expanded at x0.
  static TaylorJet variable(double x0, int order) {
    std::vector<double> c(static_cast<size_t>(order) + 1, 0.0);
    c[0] = x0;
    if (order >= 1) c[1] = 1.0;
    return TaylorJet(std::move(c));
  }

  int order() const { return static_cast<int>(c_.size()) - 1; }
  double value() const { return c_[0]; }
  double coeff(int k) const {
    return (k >= 0 && k <= order()) ? c_[static_cast<size_t>(k)] : 0.0;
  }
  // k-th derivative at the expansion point: k! * c[k].
  double derivative(int k) const {
    double fact = 1.0;
    for (int i = 2; i <= k; ++i) fact *= i;
    return coeff(k) * fact;
  }

  friend TaylorJet operator+(const TaylorJet& a, const TaylorJet& b) {
    const int n = std::min(a.order(), b.order());
    std::vector<double> c(static_cast<size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) c[static_cast<size_t>(k)] = a.coeff(k) + b.coeff(k);
    return TaylorJet(std::move(c));
  }

  friend TaylorJet operator-(const TaylorJet& a, const TaylorJet& b) {
    const int n = std::min(a.order(), b.order());
    std::vector<double> c(static_cast<size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) c[static_cast<size_t>(k)] = a.coeff(k) - b.coeff(k);
    return TaylorJet(std::move(c));
  }

  friend TaylorJet operator-(const TaylorJet& a) {
    std::vector<double> c(a.c_);
    for (double& x : c) x = -x;
    return TaylorJet(std::move(c));
  }

  friend TaylorJet operator*(const TaylorJet& a, const TaylorJet& b) {
    const int n = std::min(a.order(), b.order());
    std::vector<double> c(static_cast<size_t>(n) + 1, 0.0);
    for (int k = 0; k <= n; ++k)
      for (int i = 0; i <= k; ++i)
        c[static_cast<size_t>(k)] += a.coeff(i) * b.coeff(k - i);
    return TaylorJet(std::move(c));
  }

  friend TaylorJet operator*(double s, const TaylorJet& a) {
    std::vector<double> c(a.c_);
    for (double& x : c) x *= s;
    return TaylorJet(std::move(c));
  }

  // 1 / series; recurrence b_k = -(1/a_0) sum_{i=1..k} a_i b_{k-i}.
  TaylorJet recip() const {
    if (c_[0] == 0.0) throw std::domain_error("TaylorJet::recip at a zero");
    const int n = order();
    std::vector<double> b(static_cast<size_t>(n) + 1, 0.0);
    b[0] = 1.0 / c_[0];
    for (int k = 1; k <= n; ++k) {
      double acc = 0.0;
      for (int i = 1; i <= k; ++i)
        acc += c_[static_cast<size_t>(i)] * b[static_cast<size_t>(k - i)];
      b[static_cast<size_t>(k)] = -acc / c_[0];
    }
    return TaylorJet(std::move(b));
  }

  friend TaylorJet operator/(const TaylorJet& a, const TaylorJet& b) {
    return a * b.recip();
  }

  // exp(series); y' = u' y gives y_k = (1/k) sum_{j=1..k} j u_j y_{k-j}.
  TaylorJet exp() const {
    const int n = order();
    std::vector<double> y(static_cast<size_t>(n) + 1, 0.0);
    y[0] = std::exp(c_[0]);
    for (int k = 1; k <= n; ++k) {
      double acc = 0.0;
      for (int j = 1; j <= k; ++j)
        acc += j * c_[static_cast<size_t>(j)] * y[static_cast<size_t>(k - j)];
      y[static_cast<size_t>(k)] = acc / k;
    }
    return TaylorJet(std::move(y));
  }

  // d/dx: one order fewer honest coefficients.
  TaylorJet deriv() const {
    const int n = order();
    if (n == 0) return TaylorJet(std::vector<double>{0.0});
    std::vector<double> d(static_cast<size_t>(n), 0.0);
    for (int k = 1; k <= n; ++k)
      d[static_cast<size_t>(k - 1)] = k * c_[static_cast<size_t>(k)];
    return TaylorJet(std::move(d));
  }

  // Integer power by repeated multiplication.
  TaylorJet pow_int(int e) const {
    if (e < 0) return recip().pow_int(-e);
    TaylorJet acc = TaylorJet::constant(1.0, order());
    TaylorJet base = *this;
    while (e > 0) {
      if (e & 1) acc = acc * base;
      base = base * base;
      e >>= 1;
    }
    return acc;
  }

 private:
  std::vector<double> c_;
};

// Radial Laplacian f'' + (N-1)/r f' pushed through a jet expanded at r0 > 0;
// the result carries two fewer orders.
inline TaylorJet radial_laplacian(const TaylorJet& f, int N, double r0) {
  const TaylorJet fp = f.deriv();
  const TaylorJet r = TaylorJet::variable(r0, fp.order());
  return fp.deriv() + (N - 1.0) * (fp * r.recip());
}

}  // namespace polyharm
