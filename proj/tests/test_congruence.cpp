#include <doctest.h>

#include <random>

#include <Eigen/LU>

#include "reeb/congruence.hpp"

using namespace reeb;

namespace {

TwoForm4 random_form(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  TwoForm4 b;
  for (int i = 0; i < 6; ++i) b[i] = g(rng);
  return b;
}

// Independent Levi-Civita contraction: (*B)_{ij} = 1/2 eps_{ijkl} B_{kl}.
Mat4 star_by_epsilon(const Mat4& W) {
  Mat4 S = Mat4::Zero();
  const int perm[24][4] = {{0, 1, 2, 3}, {0, 1, 3, 2}, {0, 2, 1, 3}, {0, 2, 3, 1}, {0, 3, 1, 2}, {0, 3, 2, 1},
                           {1, 0, 2, 3}, {1, 0, 3, 2}, {1, 2, 0, 3}, {1, 2, 3, 0}, {1, 3, 0, 2}, {1, 3, 2, 0},
                           {2, 0, 1, 3}, {2, 0, 3, 1}, {2, 1, 0, 3}, {2, 1, 3, 0}, {2, 3, 0, 1}, {2, 3, 1, 0},
                           {3, 0, 1, 2}, {3, 0, 2, 1}, {3, 1, 0, 2}, {3, 1, 2, 0}, {3, 2, 0, 1}, {3, 2, 1, 0}};
  for (const auto& p : perm) {
    int inv = 0;
    for (int a = 0; a < 4; ++a)
      for (int b = a + 1; b < 4; ++b) inv += p[a] > p[b];
    const double sign = inv % 2 ? -1.0 : 1.0;
    S(p[0], p[1]) += 0.5 * sign * W(p[2], p[3]);
  }
  return S;
}

}  // namespace

TEST_CASE("Hodge star agrees with the Levi-Civita contraction") {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 20; ++i) {
    const TwoForm4 b = random_form(rng);
    CHECK((form_matrix(hodge_star(b)) - star_by_epsilon(form_matrix(b))).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((hodge_star(hodge_star(b)) - b).norm() < 1e-15);
    const auto [sp, sm] = sd_decompose(b);
    CHECK((hodge_star(sp) - sp).norm() < 1e-15);
    CHECK((hodge_star(sm) + sm).norm() < 1e-15);
    CHECK((sp + sm - b).norm() < 1e-15);
    CHECK((form_from_matrix(form_matrix(b)) - b).norm() < 1e-15);
  }
}

TEST_CASE("SD and ASD coordinates are orthonormal") {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 20; ++i) {
    const TwoForm4 b = random_form(rng);
    const Vec3 a = sd_coords(b), c = asd_coords(b);
    CHECK((from_sd_coords(a) + from_asd_coords(c) - b).norm() < 1e-14);
    CHECK(std::abs(a.squaredNorm() + c.squaredNorm() - b.squaredNorm()) < 1e-13);
  }
}

TEST_CASE("wedge of a vector pair is decomposable") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 1.0);
  const Vec4 u(g(rng), g(rng), g(rng), g(rng)), w(g(rng), g(rng), g(rng), g(rng));
  const TwoForm4 b = wedge(u, w);
  CHECK(std::abs(b.dot(hodge_star(b))) < 1e-13);
  const Mat4 W = form_matrix(b);
  CHECK(std::abs(u.dot(W * w) - (u.squaredNorm() * w.squaredNorm() - std::pow(u.dot(w), 2))) < 1e-12);
}

TEST_CASE("osculating J is an orthogonal complex structure") {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 10; ++i) {
    const Vec3 c = Vec3::Random().normalized();
    const Mat4 J = osculating_J(from_sd_coords(c) / std::sqrt(2.0));
    CHECK((J * J + Mat4::Identity()).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((J.transpose() * J - Mat4::Identity()).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((J + J.transpose()).cwiseAbs().maxCoeff() < 1e-15);
  }
  CHECK_THROWS_AS(osculating_J(from_sd_coords(Vec3(1.0, 0.0, 0.0))), DomainError);
}

TEST_CASE("perturbed congruence has the requested Lipschitz constant") {
  for (double L : {0.1, 0.3, 0.5}) {
    const CongruenceMap f = default_perturbed_congruence(L, 3);
    const double est = f.estimate_lipschitz(4000, 99);
    CHECK(est <= L * 1.02);
    CHECK(est >= L * 0.9);
  }
  CHECK(constant_congruence().estimate_lipschitz(1000) == 0.0);
}

TEST_CASE("fiber solve finds the plane through v") {
  const CongruenceMap f = default_perturbed_congruence(0.5, 1);
  std::mt19937_64 rng(8);
  for (const Vec4& v : random_sphere_points(50, 17)) {
    const FiberSolution s = fiber_solve(f, 3.0 * v);
    CHECK(s.residual < 1e-12);
    CHECK(s.iterations < 50);
    CHECK((f(s.sigma_minus) - s.sigma_plus).norm() < 1e-13);
    const Mat4 J = congruence_J(f, v);
    CHECK((J * J + Mat4::Identity()).cwiseAbs().maxCoeff() < 1e-12);
    // v and Jv span the fiber: J v lies in the plane of sigma_plus + sigma_minus.
    const Mat4 W = form_matrix(s.sigma_plus + s.sigma_minus);
    CHECK((v + W * (W * v)).norm() < 1e-12);
    CHECK((congruence_J(f, 2.5 * v) - J).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("contact data of a congruence") {
  const CongruenceMap f = default_perturbed_congruence(0.3);
  for (const Vec4& v : random_sphere_points(20, 5)) {
    const CongruenceContact c = contact_from_congruence(f, v);
    CHECK(std::abs(c.lambda.dot(c.X) - 1.0) < 1e-12);
    CHECK((c.X + c.J * v).norm() < 1e-14);
    CHECK(std::abs(c.X.dot(v)) < 1e-12);
  }
  CHECK_THROWS_AS(contact_from_congruence(f, Vec4(2.0, 0.0, 0.0, 0.0)), DomainError);
}

TEST_CASE("audit of a constant congruence") {
  const CongruenceAudit a = congruence_audit(constant_congruence(Vec3(0.0, 1.0, 0.0)), 100, 3);
  for (double d : a.defects) CHECK(d < 1e-9);
  CHECK(a.primitive_samples == a.samples);
  CHECK(a.primitive_residual < 1e-6);
}

TEST_CASE("audit of a perturbed congruence reports non-closedness") {
  const CongruenceAudit a = congruence_audit(default_perturbed_congruence(0.3), 100, 3);
  CHECK(a.defects[1] < 1e-9);
  CHECK(a.defects[5] < 1e-9);
  CHECK(a.defects[0] > 1e-3);
  CHECK(a.max_fiber_iterations < 50);
}

TEST_CASE("random orthogonal matrices") {
  int positive = 0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const Mat4 Q = random_orthogonal(s);
    CHECK((Q.transpose() * Q - Mat4::Identity()).cwiseAbs().maxCoeff() < 1e-14);
    positive += Q.determinant() > 0.0;
  }
  CHECK(positive > 0);
  CHECK(positive < 20);
  for (const Vec4& v : random_sphere_points(10, 1)) CHECK(std::abs(v.norm() - 1.0) < 1e-15);
}

TEST_CASE("orthogonal transport preserves the contact form") {
  const CongruenceMap f = default_perturbed_congruence(0.3);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const Mat4 Q = random_orthogonal(100 + s);
    const TransportResult t = o4_transport(f, Q, 50, s);
    CHECK(t.residual < 1e-8);
    CHECK(t.transported.has_value() == (Q.determinant() > 0.0));
  }
  Mat4 D = Mat4::Identity();
  D(0, 0) = 2.0;
  CHECK(o4_transport(f, D).residual > 0.1);
}
