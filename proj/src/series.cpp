#include "reeb/series.hpp"

#include <algorithm>
#include <cmath>

namespace reeb {

Series::Series(int order) : order_(order), c_(static_cast<size_t>(order) + 1) {
  if (order < 0) throw DomainError("series: negative order");
}

Series::Series(std::vector<Complex> coeffs, int order) : Series(order) {
  for (size_t k = 0; k < coeffs.size() && static_cast<int>(k) <= order; ++k) c_[k] = coeffs[k];
}

Series Series::monomial(int power, Complex c, int order) {
  Series s(order);
  if (power >= 0 && power <= order) s.c_[power] = c;
  return s;
}

Series Series::constant(Complex c, int order) { return monomial(0, c, order); }

Complex& Series::operator[](int k) {
  if (k < 0 || k > order_) throw DomainError("series: index beyond truncation order");
  return c_[k];
}

std::optional<int> Series::valuation(double tol) const {
  for (int k = 0; k <= order_; ++k)
    if (std::abs(c_[k]) > tol) return k;
  return std::nullopt;
}

Series Series::truncated(int order) const {
  Series s(order);
  for (int k = 0; k <= std::min(order, order_); ++k) s.c_[k] = c_[k];
  return s;
}

Series Series::operator+(const Series& o) const {
  Series s(std::min(order_, o.order_));
  for (int k = 0; k <= s.order_; ++k) s.c_[k] = c_[k] + o.c_[k];
  return s;
}

Series Series::operator-(const Series& o) const { return *this + (-o); }

Series Series::operator-() const { return *this * Complex(-1.0); }

Series Series::operator*(const Series& o) const {
  Series s(std::min(order_, o.order_));
  for (int i = 0; i <= s.order_; ++i) {
    if (c_[i] == Complex{}) continue;
    for (int j = 0; i + j <= s.order_; ++j) s.c_[i + j] += c_[i] * o.c_[j];
  }
  return s;
}

Series Series::operator*(Complex f) const {
  Series s = *this;
  for (auto& c : s.c_) c *= f;
  return s;
}

Series Series::compose(const Series& inner) const {
  if (std::abs(inner[0]) > 0.0) throw DomainError("series compose: inner series must vanish at 0");
  const int ord = std::min(order_, inner.order_);
  Series out = constant(c_[ord], ord);
  for (int k = ord - 1; k >= 0; --k) out = out * inner.truncated(ord) + constant(c_[k], ord);
  return out;
}

Series Series::reciprocal() const {
  if (c_[0] == Complex{}) throw DomainError("series reciprocal: zero constant term");
  Series r(order_);
  r.c_[0] = 1.0 / c_[0];
  for (int k = 1; k <= order_; ++k) {
    Complex acc{};
    for (int j = 1; j <= k; ++j) acc += c_[j] * r.c_[k - j];
    r.c_[k] = -acc / c_[0];
  }
  return r;
}

Series Series::power(double alpha) const {
  if (c_[0] == Complex{}) throw DomainError("series power: zero constant term");
  // Miller's recurrence for a = u^alpha: k u_0 a_k = sum_j ((alpha + 1) j - k) u_j a_{k-j}.
  Series a(order_);
  a.c_[0] = std::pow(c_[0], alpha);
  for (int k = 1; k <= order_; ++k) {
    Complex acc{};
    for (int j = 1; j <= k; ++j) acc += ((alpha + 1.0) * j - k) * c_[j] * a.c_[k - j];
    a.c_[k] = acc / (static_cast<double>(k) * c_[0]);
  }
  return a;
}

Series Series::exp() const {
  Series b(order_);
  b.c_[0] = std::exp(c_[0]);
  for (int k = 1; k <= order_; ++k) {
    Complex acc{};
    for (int j = 1; j <= k; ++j) acc += static_cast<double>(j) * c_[j] * b.c_[k - j];
    b.c_[k] = acc / static_cast<double>(k);
  }
  return b;
}

Series Series::log() const {
  if (c_[0] == Complex{}) throw DomainError("series log: zero constant term");
  // l' = u'/u
  const Series q = derivative() * reciprocal();
  Series l(order_);
  l.c_[0] = std::log(c_[0]);
  for (int k = 1; k <= order_; ++k) l.c_[k] = q[k - 1] / static_cast<double>(k);
  return l;
}

Series Series::reversion() const {
  if (std::abs(c_[0]) > 0.0) throw DomainError("series reversion: constant term must vanish");
  if (c_[1] == Complex{}) throw DomainError("series reversion: linear coefficient must be nonzero");
  const Series id = monomial(1, 1.0, order_);
  const Series nonlinear = *this - monomial(1, c_[1], order_);
  // g <- (w - N(g)) / c_1 gains one correct coefficient per pass.
  Series g = id * (1.0 / c_[1]);
  for (int pass = 1; pass < order_; ++pass) g = (id - nonlinear.compose(g)) * (1.0 / c_[1]);
  return g;
}

Series Series::derivative() const {
  Series d(std::max(order_ - 1, 0));
  for (int k = 1; k <= order_; ++k) d.c_[k - 1] = static_cast<double>(k) * c_[k];
  return d;
}

Series Series::shift_down(int k) const {
  for (int j = 0; j < std::min(k, order_ + 1); ++j)
    if (c_[j] != Complex{}) throw DomainError("series shift_down: low coefficients do not vanish");
  Series s(std::max(order_ - k, 0));
  for (int j = k; j <= order_; ++j) s.c_[j - k] = c_[j];
  return s;
}

Series Series::shift_up(int k) const {
  Series s(order_);
  for (int j = 0; j + k <= order_; ++j) s.c_[j + k] = c_[j];
  return s;
}

Complex Series::eval(Complex z) const {
  Complex acc{};
  for (int k = order_; k >= 0; --k) acc = acc * z + c_[k];
  return acc;
}

Complex Series::eval_derivative(Complex z) const {
  Complex acc{};
  for (int k = order_; k >= 1; --k) acc = acc * z + static_cast<double>(k) * c_[k];
  return acc;
}

double Series::max_abs_diff(const Series& o, int upto) const {
  double m = 0.0;
  for (int k = 0; k <= upto; ++k) m = std::max(m, std::abs((*this)[k] - o[k]));
  return m;
}

}  // namespace reeb
