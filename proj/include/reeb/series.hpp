#pragma once

#include <optional>
#include <vector>

#include "reeb/types.hpp"

namespace reeb {

/// Complex power series sum_{k=0}^{order} c_k z^k, truncated at a fixed order.
/// Binary operations truncate to the smaller of the two orders.
class Series {
 public:
  static constexpr int kDefaultOrder = 16;

  explicit Series(int order = kDefaultOrder);
  Series(std::vector<Complex> coeffs, int order);

  static Series monomial(int power, Complex c = 1.0, int order = kDefaultOrder);
  static Series constant(Complex c, int order = kDefaultOrder);

  int order() const { return order_; }
  Complex operator[](int k) const { return k >= 0 && k <= order_ ? c_[k] : Complex{}; }
  Complex& operator[](int k);
  const std::vector<Complex>& coeffs() const { return c_; }

  /// Index of the first coefficient with |c_k| > tol; empty for the zero series.
  std::optional<int> valuation(double tol = 0.0) const;
  bool is_zero(double tol = 0.0) const { return !valuation(tol).has_value(); }

  Series truncated(int order) const;
  Series operator+(const Series& o) const;
  Series operator-(const Series& o) const;
  Series operator-() const;
  Series operator*(const Series& o) const;
  Series operator*(Complex s) const;

  /// this(inner(z)); needs inner(0) = 0.
  Series compose(const Series& inner) const;
  /// 1 / this; needs c_0 != 0.
  Series reciprocal() const;
  /// this^alpha using the principal power of c_0; needs c_0 != 0.
  Series power(double alpha) const;
  Series root(int n) const { return power(1.0 / n); }
  Series exp() const;
  /// Principal log; needs c_0 != 0.
  Series log() const;
  /// Compositional inverse g with this(g(w)) = w; needs c_0 = 0, c_1 != 0.
  Series reversion() const;
  Series derivative() const;
  /// this / z^k; the first k coefficients must vanish.
  Series shift_down(int k) const;
  /// z^k * this, truncated at the same order.
  Series shift_up(int k) const;

  Complex eval(Complex z) const;
  Complex eval_derivative(Complex z) const;

  double max_abs_diff(const Series& o, int upto) const;

 private:
  int order_;
  std::vector<Complex> c_;
};

inline Series operator*(Complex s, const Series& a) { return a * s; }

}  // namespace reeb
