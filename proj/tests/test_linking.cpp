#include <doctest.h>

#include "reeb/linking.hpp"

using namespace reeb;

namespace {

AlgebroidGerm germ(int n, const Series& rho) {
  AlgebroidGerm g;
  g.n = n;
  g.rho = rho;
  return g;
}

// Torus knot (a, b) on the Clifford torus.
SpaceLoop torus_knot(int a, int b, int m) {
  SpaceLoop loop;
  for (int j = 0; j <= m; ++j) {
    const double t = kTwoPi * (j % m) / m;
    loop.points.push_back(from_c2(std::polar(std::sqrt(0.5), a * t), std::polar(std::sqrt(0.5), b * t)));
  }
  return loop;
}

}  // namespace

TEST_CASE("Hopf fibers link once") {
  const LinkingValue l = gauss_linking(axis_circle_w1_zero(256), axis_circle_w2_zero(256));
  CHECK(l.value == 1);
  CHECK(std::abs(l.raw - 1.0) < 0.01);
}

TEST_CASE("torus knots link the core circles by their winding numbers") {
  // The (a, b) curve winds b times along {w1 = 0} and a times along {w2 = 0}.
  for (auto [a, b] : {std::pair{2, 3}, std::pair{3, 4}, std::pair{1, 5}}) {
    const SpaceLoop K = torus_knot(a, b, 1024);
    CHECK(gauss_linking(K, axis_circle_w1_zero(512)).value == a);
    CHECK(gauss_linking(K, axis_circle_w2_zero(512)).value == b);
    const auto [wa, wb] = winding_profile(K);
    CHECK(wa == a);
    CHECK(wb == b);
  }
}

TEST_CASE("boundary knot of a plane-curve germ") {
  const AlgebroidGerm g = germ(2, Series::monomial(3));
  const SpaceLoop K = boundary_knot(g, 0.1, 512);
  CHECK(K.closure_gap() == 0.0);
  CHECK(K.max_step() < 0.1);
  for (const Vec4& p : K.points) CHECK(std::abs(p.norm() - 1.0) < 1e-15);
  CHECK(gauss_linking(K, axis_circle_w1_zero(512)).value == 2);
  CHECK(gauss_linking(K, axis_circle_w2_zero(512)).value == 3);
  CHECK(winding_profile(K) == std::pair{2, 3});
  CHECK(winding_profile(boundary_knot(germ(2, Series::monomial(5)), 0.5, 512)) == std::pair{2, 5});
}

TEST_CASE("sign conventions under reversal and pole change") {
  const SpaceLoop K = boundary_knot(germ(3, Series::monomial(4) + Series::monomial(5, 0.2)), 0.1, 512);
  const SpaceLoop C = axis_circle_w1_zero(512);
  const LinkingValue base = gauss_linking(K, C);
  CHECK(gauss_linking(K.reversed(), C).value == -base.value);
  CHECK(gauss_linking(C, K).value == base.value);
  CHECK(gauss_linking(K, C, -base.pole).value == base.value);
  CHECK(gauss_linking(K, C, Vec4(0.5, 0.5, 0.5, 0.5)).value == base.value);
}

TEST_CASE("input validation") {
  const AlgebroidGerm g = germ(2, Series::monomial(3));
  CHECK_THROWS_AS(boundary_knot(g, 0.1, 64), DomainError);
  CHECK_THROWS_AS(boundary_knot(g, -0.1, 512), DomainError);
  const SpaceLoop C = axis_circle_w1_zero(256);
  CHECK_THROWS_AS(gauss_linking(C, C), ProximityError);
  CHECK_THROWS_AS(gauss_linking(C, axis_circle_w2_zero(256), Vec4(0.0, 0.0, 1.0, 0.0)), ProximityError);
  CHECK_THROWS_AS(gauss_linking(boundary_knot(g, 0.1, 128), axis_circle_w2_zero(8)), ResolutionError);
  CHECK_THROWS_AS(winding_profile(C), DegeneracyError);
}

TEST_CASE("refinement stops once the value is resolved") {
  const AlgebroidGerm g = germ(2, Series::monomial(3));
  const RefinedLinking r = linking_with_refinement([&](int m) { return boundary_knot(g, 0.1, m); },
                                                   axis_circle_w2_zero, 128, 4096);
  CHECK(r.result.value == 3);
  CHECK(std::abs(r.result.raw - 3.0) < 0.05);
  CHECK(r.m >= 128);
}
