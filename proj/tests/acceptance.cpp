// Acceptance criteria, one line each. Exit status is nonzero if any criterion fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/LU>

#include "reeb/branch.hpp"
#include "reeb/congruence.hpp"
#include "reeb/dbar.hpp"
#include "reeb/linking.hpp"
#include "reeb/reeb_flow.hpp"

using namespace reeb;

namespace {

struct Outcome {
  bool ok = true;
  std::ostringstream why;
  void require(bool cond, const std::string& what) {
    if (!cond) {
      if (!ok) why << "; ";
      ok = false;
      why << what;
    }
  }
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

AlgebroidGerm germ(int n, const Series& rho) {
  AlgebroidGerm g;
  g.n = n;
  g.rho = rho;
  return g;
}

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void sphere_curve(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const FiniteEnergyCurve c = build_sphere_curve(germ(2, Series::monomial(3)));
  const CrReport cr = cr_residual(c, polar_grid(0.05, 0.5, 64, 64), Partials::Analytic);
  o.require(cr.sup < 1e-9, "cr sup " + num(cr.sup));
  const double q = charge(c).value;
  o.require(std::abs(q - 2.0) < 1e-6, "charge " + num(q));
  double psi = 0.0;
  for (const Complex& z : cr.points) psi = std::max(psi, std::abs(c.psi(z).norm() - 1.0));
  std::mt19937_64 rng(0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    const Complex z = std::polar(u(rng), kTwoPi * u(rng));
    if (std::abs(z) > 0.0) psi = std::max(psi, std::abs(c.psi(z).norm() - 1.0));
  }
  o.require(psi < 1e-12, "|psi| - 1 = " + num(psi));
  const double t = elapsed(t0);
  o.require(t < 10.0, "runtime " + num(t));
}

void trivial_cylinder(Outcome& o) {
  for (int n = 1; n <= 3; ++n) {
    const FiniteEnergyCurve c = build_sphere_curve(germ(n, Series(16)));
    const double e = dlambda_energy(c, 0.05, 0.9);
    o.require(std::abs(e) < 1e-12, "energy " + num(e));
    const double q = charge(c).value;
    o.require(q == static_cast<double>(n), "charge " + num(q) + " for n=" + std::to_string(n));
    const QuasiSectorDecomposition d = quasi_sector_decompose(c, 0.0);
    const double dev = d.max_ray_deviation(d.radii.front());
    o.require(dev < 1e-12, "ray deviation " + num(dev));
  }
}

void return_map(Outcome& o) {
  auto run = [&](const ContactChart& chart, const Section& S, ReturnClass want, double angle, double tol,
                 const std::string& tag) {
    const auto t0 = std::chrono::steady_clock::now();
    const ReturnMapReport r = classify_return_map(chart, S, 16);
    o.require(r.classification == want, tag + " classified " + to_string(r.classification));
    const double err = std::abs(wrap_signed(r.angle - angle));
    o.require(err < tol, tag + " angle error " + num(err));
    double res = 0.0;
    for (double x : r.residuals) res = std::max(res, x);
    o.require(res < tol, tag + " residual " + num(res));
    o.require(elapsed(t0) < 30.0, tag + " runtime");
  };
  const Ellipsoid e12(1.0, 2.0), e23(2.0, 3.0);
  const StandardSphere s3;
  run(e12, axis_section(e12), ReturnClass::Identity, 0.0, 1e-5, "E(1,2)");
  run(e23, axis_section(e23), ReturnClass::Rotation, kPi, 1e-4, "E(2,3)");
  run(s3, axis_section(s3), ReturnClass::Identity, 0.0, 1e-5, "S3");
}

void holonomy_suite(Outcome& o) {
  for (auto [p, q] : {std::pair{1.0, 2.0}, std::pair{2.0, 3.0}, std::pair{3.0, 5.0}}) {
    const Ellipsoid E(p, q);
    const HolonomyResult h = holonomy(E, axis_orbit(E), axis_section(E));
    o.require(std::abs(h.transverse.determinant() - 1.0) < 1e-6, "det " + num(h.transverse.determinant()));
    for (const Complex& mu : h.multipliers)
      o.require(std::abs(std::abs(mu) - 1.0) < 1e-5, "|mu| " + num(std::abs(mu)));
  }
}

void dbar_suite(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  QuadratureConfig q;
  q.n_r = q.n_theta = 128;
  const auto one = DiscGridFunction::from_evaluator([](Complex) { return Complex(1.0); }, 1.0, 128, 128);
  std::mt19937_64 rng(0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Complex z = std::polar(0.95 * std::sqrt(u(rng)), kTwoPi * u(rng));
    worst = std::max(worst, std::abs(cauchy_green(one, z, q) - Complex(0.0, kTwoPi) * std::conj(z)));
  }
  o.require(worst < 1e-4, "transform of 1 off by " + num(worst));

  const std::vector<std::function<Complex(Complex)>> fs = {
      [](Complex z) { return z; },
      [](Complex z) { return std::conj(z); },
      [](Complex z) { return z * std::conj(z); },
      [](Complex z) { return z * z + Complex(0.0, 2.0) * std::conj(z) * std::conj(z); },
      [](Complex z) { return z * z * std::conj(z) - 0.5 * z + 1.0; },
  };
  for (size_t i = 0; i < fs.size(); ++i) {
    const auto f = DiscGridFunction::from_evaluator(fs[i], 1.0, 128, 128);
    const double r = dbar_residual(dbar_solution(f, q, 16, 32), f, 0.1, 0.8);
    o.require(r < 5e-3, "residual f" + std::to_string(i) + " " + num(r));
  }

  // Non-polynomial right-hand side so the quadrature error is visible at both sizes.
  auto g = [](Complex z) { return std::exp(std::conj(z)) * std::sqrt(std::norm(z) + 0.05); };
  double res[2];
  for (int j = 0; j < 2; ++j) {
    QuadratureConfig c;
    c.n_r = c.n_theta = 16 << j;
    const auto G = DiscGridFunction::from_evaluator(g, 1.0, c.n_r, c.n_theta);
    res[j] = dbar_residual(dbar_solution(G, c, 8, 16), G, 0.1, 0.8);
  }
  const double order = std::log2(res[0] / res[1]);
  o.require(order >= 1.5, "order " + num(order));

  for (int which = 0; which < 2; ++which) {
    const auto G = DiscGridFunction::from_evaluator(
        [which](Complex z) { return which == 0 ? Complex(1.0) : z; }, 1.0, 128, 128);
    const BoundCertificate c = bound_certificate(G, q);
    o.require(c.sup_ratio <= G.sup_abs() + 1e-3, "bound ratio " + num(c.sup_ratio));
  }
  const double t = elapsed(t0);
  o.require(t < 60.0, "runtime " + num(t));
}

void ellipsoid_curve(Outcome& o) {
  EllipsoidCurveParams P;
  P.Phi = Series::monomial(3, 0.05);
  P.radius = 0.6;
  const EllipsoidExample ex = build_ellipsoid_curve(P);
  const BranchFamily& fam = ex.family;
  // Ratio of neighbouring branches on interior arcs, directly.
  double ratio = 0.0;
  const auto& dec = *fam.sectors;
  for (size_t i = 0; i < dec.radii.size(); ++i)
    for (int k = 0; k + 1 < fam.n; ++k) {
      const Complex z = dec.arc_point(k + 1, i);
      ratio = std::max(ratio, std::abs(fam.F(k + 1, z) / fam.F(k, z) + 1.0));
    }
  o.require(ratio < 1e-12, "branch ratio off -1 by " + num(ratio));
  const BranchAuditReport a = branch_audit(fam);
  o.require(a.passed, "audit: " + a.witness);
  o.require(a.arc_matching < 1e-6, "arc matching " + num(a.arc_matching));
  o.require(a.c_increment < 1e-6, "c increment " + num(a.c_increment));
  o.require(a.u_defect < 1e-4, "u defect " + num(a.u_defect));
  const CrReport cr = cr_residual(ex.curve, polar_grid(0.05, 0.5, 64, 64), Partials::FiniteDifference,
                                  [&](Complex z) { return dec.arc_distance(z) < 1e-3; });
  o.require(cr.sup < 1e-4, "cr sup " + num(cr.sup));
  const double q = charge(ex.curve, {}, 512, Partials::FiniteDifference).value;
  o.require(std::abs(q - 2.0) < 1e-4, "charge " + num(q));
  double deg = 0.0;
  for (double s : {0.0, 1e-3, 0.1, 0.5, 1.0, 3.0, 10.0}) deg = std::max(deg, std::abs(gamma_hat(1, 1, 1, 1, s) - std::log1p(s)));
  o.require(deg < 1e-8, "degenerate gamma_hat " + num(deg));
}

void congruence_suite(Outcome& o) {
  const CongruenceMap c = constant_congruence();
  Mat4 J0 = Mat4::Zero();
  J0(1, 0) = 1.0;
  J0(0, 1) = -1.0;
  J0(3, 2) = 1.0;
  J0(2, 3) = -1.0;
  double dev = 0.0;
  for (const Vec4& v : random_sphere_points(1000, 0)) {
    const CongruenceContact k = contact_from_congruence(c, v);
    // Standard structure up to the global orientation of J.
    dev = std::max(dev, std::min((k.J - J0).cwiseAbs().maxCoeff(), (k.J + J0).cwiseAbs().maxCoeff()));
    dev = std::max(dev, std::abs(k.lambda.dot(k.X) - 1.0));
  }
  o.require(dev < 1e-12, "constant structure off by " + num(dev));
  const CongruenceAudit ca = congruence_audit(c, 200, 0);
  for (int i = 0; i < 6; ++i) o.require(ca.defects[i] < 1e-9, "constant defect " + std::to_string(i) + " " + num(ca.defects[i]));
  const CongruenceMap f = default_perturbed_congruence(0.3, 0);
  const CongruenceAudit pa = congruence_audit(f, 200, 0);
  o.require(pa.defects[1] < 1e-9, "perturbed (b) " + num(pa.defects[1]));
  o.require(pa.defects[5] < 1e-9, "perturbed (f) " + num(pa.defects[5]));
  std::printf("    perturbed defect (a) = %.3e over %d samples\n", pa.defects[0], pa.samples);
  o.require(ca.primitive_samples > 0 && ca.primitive_residual < 1e-5, "closed-form identity " + num(ca.primitive_residual));
  if (pa.primitive_samples > 0) o.require(pa.primitive_residual < 1e-5, "closed-form identity (perturbed)");
  for (int i = 0; i < 5; ++i) {
    const double r = o4_transport(f, random_orthogonal(1000 + i)).residual;
    o.require(r < 1e-8, "o4 residual " + num(r));
  }
  Mat4 D = Mat4::Identity();
  D(0, 0) = 2.0;
  const double neg = o4_transport(f, D).residual;
  o.require(neg > 0.1, "negative control " + num(neg));
}

void linking_suite(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const int m = 512;
  o.require(gauss_linking(axis_circle_w1_zero(m), axis_circle_w2_zero(m)).value == 1, "Hopf");
  const SpaceLoop K = boundary_knot(germ(2, Series::monomial(3)), 0.1, m);
  const SpaceLoop C1 = axis_circle_w1_zero(m), C2 = axis_circle_w2_zero(m);
  const LinkingValue l1 = gauss_linking(K, C1), l2 = gauss_linking(K, C2);
  o.require(l1.value == 2, "lk with w1=0 is " + std::to_string(l1.value));
  o.require(l2.value == 3, "lk with w2=0 is " + std::to_string(l2.value));
  o.require(gauss_linking(K, C1, Vec4(0.5, -0.5, 0.5, 0.5)).value == 2, "pole change");
  o.require(gauss_linking(K, C1, -l1.pole).value == 2, "antipodal pole");
  o.require(gauss_linking(K.reversed(), C1).value == -2, "reversal");
  o.require(gauss_linking(K, C2.reversed()).value == -3, "reversal of the axis");
  o.require(winding_profile(K) == std::pair{2, 3}, "winding profile");
  const double t = elapsed(t0);
  o.require(t < 30.0, "runtime " + num(t));
}

void cross_module(Outcome& o) {
  const std::vector<AlgebroidGerm> germs = {
      germ(1, Series::monomial(2)),
      germ(2, Series::monomial(3)),
      germ(2, Series::monomial(5) + Series::monomial(6, Complex(0.3, 0.1))),
      germ(3, Series::monomial(4) + Series::monomial(5, 0.2)),
      germ(4, Series::monomial(6, Complex(0.0, 1.0))),
  };
  for (const AlgebroidGerm& g : germs) {
    const int lk = linking_with_refinement([&](int m) { return boundary_knot(g, 0.1, std::max(m, 64 * g.n)); },
                                           axis_circle_w1_zero)
                       .result.value;
    const double q = charge(build_sphere_curve(g)).value;
    o.require(lk == g.n, "lk " + std::to_string(lk) + " vs n " + std::to_string(g.n));
    o.require(std::abs(q - g.n) < 1e-6, "charge " + num(q) + " vs n " + std::to_string(g.n));
  }
}

// Taylor coefficients by a discrete Cauchy integral on |z| = r.
std::vector<Complex> cauchy_coefficients(const std::function<Complex(Complex)>& f, int upto, double r) {
  const int m = 128;
  std::vector<Complex> c(upto + 1);
  for (int j = 0; j < m; ++j) {
    const double t = kTwoPi * j / m;
    const Complex v = f(std::polar(r, t));
    for (int k = 0; k <= upto; ++k) c[k] += v * std::polar(1.0, -k * t);
  }
  for (int k = 0; k <= upto; ++k) c[k] /= m * std::pow(r, k);
  return c;
}

void normal_form_round_trip(Outcome& o) {
  struct Case {
    AlgebroidGerm g;
    Series F;
  };
  const std::vector<Case> cases = {
      {germ(2, Series::monomial(2) + Series::monomial(3, 0.3)), Series::monomial(1) + Series::monomial(2, 0.5)},
      {germ(3, Series::monomial(3) + Series::monomial(5, Complex(0.2, -0.4))),
       Series::monomial(1, Complex(0.0, 1.0)) + Series::monomial(4, 0.25)},
      {germ(1, Series::monomial(1, 2.0) + Series::monomial(2, -1.0) + Series::monomial(4, 0.5)),
       Series::monomial(2) + Series::monomial(3, Complex(1.0, 1.0))},
  };
  for (const Case& c : cases) {
    const NormalForm nf = normal_form(c.g, c.F);
    const auto lhs = cauchy_coefficients([&](Complex z) { return nf.w_prime.eval(nf.f.eval(z)); }, 8, 0.2);
    double err = 0.0;
    for (int k = 0; k <= 8; ++k) err = std::max(err, std::abs(lhs[k] - c.F[k]));
    o.require(err < 1e-10, "n=" + std::to_string(c.g.n) + " coefficient error " + num(err));
  }
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    void (*run)(Outcome&);
  };
  const Criterion all[] = {
      {"1 sphere-curve", sphere_curve},
      {"2 trivial cylinder", trivial_cylinder},
      {"3 return map", return_map},
      {"4 holonomy", holonomy_suite},
      {"5 dbar", dbar_suite},
      {"6 ellipsoid curve", ellipsoid_curve},
      {"7 congruence", congruence_suite},
      {"8 linking", linking_suite},
      {"9 cross-module consistency", cross_module},
      {"10 normal-form round trip", normal_form_round_trip},
  };
  int failed = 0;
  for (const Criterion& c : all) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double t = elapsed(t0);
    std::printf("%s criterion %-28s %7.2fs%s%s\n", o.ok ? "PASS" : "FAIL", c.name, t, o.ok ? "" : "  ",
                o.why.str().c_str());
    std::fflush(stdout);
    failed += !o.ok;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(all)) - failed, std::size(all));
  return failed == 0 ? 0 : 1;
}
