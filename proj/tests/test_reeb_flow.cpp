#include <doctest.h>

#include "reeb/reeb_flow.hpp"

using namespace reeb;

TEST_CASE("ellipsoid flow matches the closed form") {
  const Ellipsoid E(2.0, 3.0);
  const Vec4 v = E.point(0.3, 0.2, 1.0);
  const Complex w1 = w1_of(v), w2 = w2_of(v);
  for (double t : {0.1, 1.0, 3.7}) {
    const Vector x = flow(E, v, t);
    const Vec4 expected = from_c2(w1 * std::polar(1.0, 2.0 * t), w2 * std::polar(1.0, 3.0 * t));
    CHECK((x - expected).norm() < 1e-9);
    CHECK(std::abs(E.constraint(x)) < 1e-12);
  }
}

TEST_CASE("backward flow undoes forward flow") {
  const StandardSphere S;
  const Vec4 v = Vec4(1.0, 2.0, -0.5, 0.3).normalized();
  const Vector x = flow(S, flow(S, v, 2.5), -2.5);
  CHECK((x - v).norm() < 1e-9);
}

TEST_CASE("first return to the axis section") {
  const Ellipsoid E(1.0, 2.0);
  const Section S = axis_section(E);
  const Vector start = S.lift(Complex(0.02, 0.01));
  const ReturnHit hit = first_return(E, S, start);
  CHECK(std::abs(hit.time - kTwoPi) < 1e-8);
  CHECK(std::abs(S.coordinate(hit.point) - Complex(0.02, 0.01)) < 1e-8);
}

TEST_CASE("return map classification") {
  SUBCASE("E(1,2) is the identity") {
    const Ellipsoid E(1.0, 2.0);
    const ReturnMapReport r = classify_return_map(E, axis_section(E), 12);
    CHECK(r.classification == ReturnClass::Identity);
    CHECK(r.radial_distortion < 1e-6);
  }
  SUBCASE("E(2,3) rotates by pi") {
    const Ellipsoid E(2.0, 3.0);
    const ReturnMapReport r = classify_return_map(E, axis_section(E), 12);
    CHECK(r.classification == ReturnClass::Rotation);
    CHECK(std::abs(r.angle - kPi) < 1e-6);
    CHECK(std::abs(r.mean_return_time - kPi) < 1e-6);
  }
  SUBCASE("irrational ratio rotates by 2 pi q / p") {
    const Ellipsoid E(1.0, std::sqrt(2.0));
    const ReturnMapReport r = classify_return_map(E, axis_section(E), 12);
    CHECK(r.classification == ReturnClass::Rotation);
    CHECK(std::abs(wrap_signed(r.angle - kTwoPi * std::sqrt(2.0))) < 1e-6);
  }
}

TEST_CASE("holonomy is area preserving") {
  for (auto [p, q] : {std::pair{1.0, 2.0}, std::pair{2.0, 3.0}, std::pair{3.0, 5.0}, std::pair{1.0, std::sqrt(3.0)}}) {
    const Ellipsoid E(p, q);
    const OrbitData orbit = axis_orbit(E);
    CHECK(std::abs(orbit.period - kTwoPi / p) < 1e-14);
    CHECK(closure_defect(E, orbit) < 1e-9);
    const HolonomyResult h = holonomy(E, orbit, axis_section(E));
    CHECK(std::abs(h.det - 1.0) < 1e-7);
    for (const Complex& mu : h.multipliers) {
      CHECK(std::abs(std::abs(mu) - 1.0) < 1e-6);
      const double ang = std::abs(std::arg(mu));
      CHECK(std::abs(ang - std::abs(wrap_signed(kTwoPi * q / p))) < 1e-6);
    }
  }
}

TEST_CASE("recurrence of E(2,3) closes after two returns") {
  const Ellipsoid E(2.0, 3.0);
  const RecurrenceReport r =
      recurrence_probe(E, axis_section(E), 4, {Complex(0.01, 0.0), Complex(0.0, 0.02), Complex(-0.015, 0.01)});
  CHECK(r.stays_inside);
  CHECK(r.max_radius_drift < 1e-8);
  CHECK(r.closure_histogram.at(2) == 3);
}

TEST_CASE("section lift outside the disc is rejected") {
  const Ellipsoid E(1.0, 2.0);
  CHECK_THROWS_AS(recurrence_probe(E, axis_section(E), 1, {Complex(1.0, 0.0)}), DomainError);
}
