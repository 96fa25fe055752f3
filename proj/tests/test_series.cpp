#include <doctest.h>

#include <algorithm>
#include <random>

#include "reeb/series.hpp"

using namespace reeb;

namespace {

Series random_series(std::mt19937_64& rng, int order, int start, double scale = 0.5) {
  std::normal_distribution<double> g(0.0, 1.0);
  Series s(order);
  for (int k = start; k <= order; ++k) s[k] = Complex(g(rng), g(rng)) * std::pow(scale, k);
  return s;
}

// Horner on the raw coefficients; kept separate from Series::eval on purpose.
Complex horner(const Series& s, Complex z) {
  Complex acc{};
  for (int k = s.order(); k >= 0; --k) acc = acc * z + s[k];
  return acc;
}

}  // namespace

TEST_CASE("arithmetic agrees with pointwise evaluation") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const Series a = random_series(rng, 12, 0), b = random_series(rng, 12, 0);
    const Complex z(0.03, -0.02);
    CHECK(std::abs((a * b).eval(z) - horner(a, z) * horner(b, z)) < 1e-12);
    CHECK(std::abs((a + b).eval(z) - horner(a, z) - horner(b, z)) < 1e-14);
    CHECK(std::abs((a - b).eval(z) - horner(a, z) + horner(b, z)) < 1e-14);
  }
}

TEST_CASE("composition matches nested evaluation") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const Series outer = random_series(rng, 14, 0), inner = random_series(rng, 14, 1);
    const Complex z(0.01, 0.015);
    CHECK(std::abs(outer.compose(inner).eval(z) - horner(outer, horner(inner, z))) < 1e-12);
  }
  CHECK_THROWS_AS(Series::constant(1.0).compose(Series::constant(1.0)), DomainError);
}

TEST_CASE("exp, log, power and reciprocal are mutually inverse") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    Series s = random_series(rng, 16, 0);
    s[0] = Complex(1.5, 0.2);
    CHECK(s.log().exp().max_abs_diff(s, 16) < 1e-12);
    CHECK((s * s.reciprocal()).max_abs_diff(Series::constant(1.0), 16) < 1e-12);
    const Series r = s.root(3);
    CHECK((r * r * r).max_abs_diff(s, 16) < 1e-12);
    const Complex z(0.02, 0.01);
    CHECK(std::abs(s.exp().eval(z) - std::exp(horner(s, z))) < 1e-12);
  }
}

TEST_CASE("reversion inverts composition") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    Series f = random_series(rng, 16, 1);
    f[1] = Complex(1.0, 0.3);
    const Series g = f.reversion();
    double scale = 1.0;
    for (const Complex& c : g.coeffs()) scale = std::max(scale, std::abs(c));
    CHECK(f.compose(g).max_abs_diff(Series::monomial(1), 16) < 1e-14 * scale);
    CHECK(g.compose(f).max_abs_diff(Series::monomial(1), 16) < 1e-14 * scale);
  }
  CHECK_THROWS_AS(Series::monomial(2).reversion(), DomainError);
}

TEST_CASE("valuation, shifts and derivative") {
  Series s = Series::monomial(3, 2.0) + Series::monomial(5, Complex(0.0, 1.0));
  REQUIRE(s.valuation().has_value());
  CHECK(*s.valuation() == 3);
  CHECK(Series(8).is_zero());
  CHECK(s.shift_down(3)[0] == Complex(2.0));
  CHECK(s.shift_down(3).shift_up(3).max_abs_diff(s, 16) == 0.0);
  CHECK_THROWS_AS(s.shift_down(4), DomainError);
  const Complex z(0.3, 0.1);
  CHECK(std::abs(s.eval_derivative(z) - (6.0 * z * z + 5.0 * Complex(0.0, 1.0) * std::pow(z, 4))) < 1e-14);
  CHECK(std::abs(s.derivative().eval(z) - s.eval_derivative(z)) < 1e-14);
}
