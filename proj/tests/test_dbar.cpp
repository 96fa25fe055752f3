#include <doctest.h>

#include <random>

#include "reeb/dbar.hpp"

using namespace reeb;

TEST_CASE("Gauss-Legendre integrates polynomials exactly") {
  for (int n : {4, 8, 16, 32}) {
    const GaussLegendre& g = gauss_legendre(n);
    REQUIRE(static_cast<int>(g.nodes.size()) == n);
    for (int deg = 0; deg < 2 * n; deg += 3) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += g.weights[i] * std::pow(g.nodes[i], deg);
      const double exact = deg % 2 == 0 ? 2.0 / (deg + 1) : 0.0;
      CHECK(std::abs(s - exact) < 1e-13);
    }
  }
}

TEST_CASE("transform of a constant is 2 pi i conj(z)") {
  const auto one = DiscGridFunction::from_evaluator([](Complex) { return Complex(1.0); }, 1.0, 64, 64);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const Complex z = std::polar(0.9 * u(rng), kTwoPi * u(rng));
    CHECK(std::abs(cauchy_green(one, z) - Complex(0.0, kTwoPi) * std::conj(z)) < 1e-8);
  }
}

TEST_CASE("transform of conj(z)") {
  // Oracle: d/dz-bar of pi i conj(z)^2 is 2 pi i conj(z), and the boundary term vanishes
  // because the remaining part is holomorphic inside and decays outside.
  const auto g = DiscGridFunction::from_evaluator([](Complex z) { return std::conj(z); }, 1.0, 64, 64);
  for (Complex z : {Complex(0.1, 0.2), Complex(-0.5, 0.3), Complex(0.0, -0.7)}) {
    CHECK(std::abs(cauchy_green(g, z) - Complex(0.0, kPi) * std::conj(z) * std::conj(z)) < 1e-8);
  }
}

TEST_CASE("dbar_solution solves the equation on a ring") {
  auto f = [](Complex z) { return std::cos(z.real()) * Complex(1.0, z.imag()) + std::conj(z) * z; };
  const auto g = DiscGridFunction::from_evaluator(f, 1.0, 64, 64);
  QuadratureConfig q;
  q.n_r = q.n_theta = 64;
  const auto u = dbar_solution(g, q, 10, 20);
  // Independent central difference of the off-node values.
  const double h = 1e-5;
  for (Complex z : {Complex(0.3, 0.1), Complex(-0.2, 0.5)}) {
    const Complex du = 0.5 * ((u(z + h) - u(z - h)) / (2.0 * h) + kI * (u(z + kI * h) - u(z - kI * h)) / (2.0 * h));
    CHECK(std::abs(du - f(z)) < 1e-4);
  }
  CHECK(dbar_residual(u, g, 0.1, 0.8) < 1e-4);
}

TEST_CASE("g_potential has dbar equal to half the coefficient") {
  auto f12 = [](Complex z) { return Complex(1.0 + z.real() * z.imag(), 0.5 * z.real()); };
  const auto g = DiscGridFunction::from_evaluator(f12, 1.0, 64, 64);
  const double h = 1e-4;
  const Complex w(0.2, -0.3);
  auto G = [&](Complex z) { return g_potential(g, z); };
  const Complex dbar = 0.5 * ((G(w + h) - G(w - h)) / (2.0 * h) + kI * (G(w + kI * h) - G(w - kI * h)) / (2.0 * h));
  CHECK(std::abs(dbar - 0.5 * f12(w)) < 1e-5);
}

TEST_CASE("interpolation from tabulated values") {
  auto f = [](Complex z) { return z * z + std::conj(z); };
  const auto tab = DiscGridFunction::from_evaluator(f, 1.0, 48, 48);
  std::vector<Complex> vals;
  for (int i = 0; i < tab.n_r(); ++i)
    for (int j = 0; j < tab.n_theta(); ++j) vals.push_back(tab.value(i, j));
  const auto raw = DiscGridFunction::from_values(1.0, 48, 48, vals);
  CHECK_FALSE(raw.has_evaluator());
  for (Complex z : {Complex(0.3, 0.2), Complex(-0.6, 0.1)}) CHECK(std::abs(raw(z) - f(z)) < 1e-4);
  CHECK(std::abs(raw.sup_abs() - tab.sup_abs()) < 1e-14);
}

TEST_CASE("bound certificate for G = 1 and G = mu") {
  const auto one = DiscGridFunction::from_evaluator([](Complex) { return Complex(1.0); }, 1.0, 64, 64);
  const auto mu = DiscGridFunction::from_evaluator([](Complex z) { return z; }, 1.0, 64, 64);
  const BoundCertificate c1 = bound_certificate(one);
  CHECK(std::abs(c1.K - 1.0) < 1e-14);
  CHECK(c1.sup_ratio <= c1.K + 1e-3);
  const BoundCertificate c2 = bound_certificate(mu);
  CHECK(c2.sup_ratio <= c2.K + 1e-3);
  CHECK(c2.K < 1.0);
}
