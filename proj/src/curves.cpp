#include "reeb/curves.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "reeb/dbar.hpp"
#include "reeb/parallel.hpp"

namespace reeb {

void AlgebroidGerm::validate_standard_form() const {
  if (n < 1) throw DomainError("germ: n must be positive");
  for (const Complex& c : rho.coeffs())
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw DomainError("germ: non-finite coefficient");
  const auto v = rho.valuation();
  if (v && *v < n + 1) throw DomainError("germ: ord(rho) must be at least n + 1");
}

double AlgebroidGerm::convergence_radius() const {
  int last = -1;
  for (int k = 0; k <= rho.order(); ++k)
    if (rho[k] != Complex{}) last = k;
  // A series that stops before the truncation order is taken as a polynomial.
  if (last < rho.order() || last <= 0) return std::numeric_limits<double>::infinity();
  return std::pow(std::abs(rho[last]), -1.0 / last);
}

void FiniteEnergyCurve::check_point(Complex z) const {
  const double r = std::abs(z);
  if (!(r > 0.0)) throw DomainError("curve: z = 0 is not in the punctured disc");
  if (!(r < radius)) throw DomainError("curve: |z| outside the evaluation disc");
}

CurveJet FiniteEnergyCurve::jet(Complex z, Partials mode) const {
  check_point(z);
  if (mode == Partials::Analytic && analytic) return analytic(z);
  const double h = fd_step * std::max(1.0, std::abs(z));
  CurveJet j;
  j.psi = psi(z);
  j.a = a(z);
  const Complex dz[2] = {Complex(h, 0.0), Complex(0.0, h)};
  for (int d = 0; d < 2; ++d) {
    const Vector plus = psi(z + dz[d]);
    const Vector minus = psi(z - dz[d]);
    const Vector dpsi = chart->displacement(minus, plus) / (2.0 * h);
    const double da = (a(z + dz[d]) - a(z - dz[d])) / (2.0 * h);
    if (d == 0) {
      j.psi_eta = dpsi;
      j.a_eta = da;
    } else {
      j.psi_zeta = dpsi;
      j.a_zeta = da;
    }
  }
  return j;
}

FiniteEnergyCurve build_sphere_curve(const AlgebroidGerm& germ, double radius) {
  germ.validate_standard_form();
  if (!(radius > 0.0)) throw DomainError("sphere curve: radius must be positive");
  if (radius > germ.convergence_radius()) throw DomainError("sphere curve: radius exceeds the convergence disc of rho");

  FiniteEnergyCurve c;
  c.chart = std::make_shared<StandardSphere>();
  c.n = germ.n;
  c.period = kTwoPi;
  c.radius = radius;
  c.rotation = 1.0;
  c.provenance = "sphere germ n=" + std::to_string(germ.n);

  const int n = germ.n;
  const Series rho = germ.rho;
  const Series drho = rho.derivative();

  auto lift = [n, rho](Complex z) -> Vec4 { return from_c2(std::pow(z, n), rho.eval(z)); };
  c.psi = [lift](Complex z) -> Vector {
    const Vec4 P = lift(z);
    return P / P.norm();
  };
  c.a = [lift](Complex z) { return -0.5 * std::log(lift(z).squaredNorm()); };
  c.analytic = [n, rho, drho](Complex z) {
    const Complex p1 = std::pow(z, n), p2 = rho.eval(z);
    const Complex d1 = static_cast<double>(n) * std::pow(z, n - 1), d2 = drho.eval(z);
    const Vec4 P = from_c2(p1, p2);
    const double norm2 = P.squaredNorm();
    const double norm = std::sqrt(norm2);
    CurveJet j;
    j.psi = P / norm;
    j.a = -0.5 * std::log(norm2);
    const Vec4 dirs[2] = {from_c2(d1, d2), from_c2(kI * d1, kI * d2)};
    for (int d = 0; d < 2; ++d) {
      const double pd = P.dot(dirs[d]);
      const Vector dpsi = dirs[d] / norm - P * (pd / (norm2 * norm));
      const double da = -pd / norm2;
      if (d == 0) {
        j.psi_eta = dpsi;
        j.a_eta = da;
      } else {
        j.psi_zeta = dpsi;
        j.a_zeta = da;
      }
    }
    return j;
  };
  c.theta = [n](Complex z) { return wrap_angle(n * std::arg(z)); };
  c.ambient = [lift](Complex z, double) -> Vec4 {
    const Vec4 P = lift(z);
    return P / P.norm();
  };
  return c;
}

std::vector<Complex> polar_grid(double r0, double r1, int n_r, int n_theta, double phase) {
  if (!(r0 > 0.0) || !(r1 >= r0) || n_r < 1 || n_theta < 1) throw DomainError("polar_grid: bad ranges");
  std::vector<Complex> pts;
  pts.reserve(static_cast<size_t>(n_r) * n_theta);
  for (int i = 0; i < n_r; ++i) {
    const double r = n_r == 1 ? r0 : r0 + (r1 - r0) * i / (n_r - 1);
    for (int j = 0; j < n_theta; ++j) pts.push_back(std::polar(r, kTwoPi * (j + phase) / n_theta));
  }
  return pts;
}

CrReport cr_residual(const FiniteEnergyCurve& curve, const std::vector<Complex>& grid, Partials mode,
                     const std::function<bool(Complex)>& excluded) {
  CrReport rep;
  std::vector<char> keep(grid.size(), 1);
  if (excluded)
    for (size_t i = 0; i < grid.size(); ++i) keep[i] = excluded(grid[i]) ? 0 : 1;

  std::vector<std::array<double, 3>> res(grid.size());
  const ContactChart& M = *curve.chart;
  parallel_for(grid.size(), [&](size_t i) {
    if (!keep[i]) return;
    const CurveJet j = curve.jet(grid[i], mode);
    const Vector X = M.reeb(j.psi);
    const Vector lam = M.lambda(j.psi);
    const double l_eta = lam.dot(j.psi_eta), l_zeta = lam.dot(j.psi_zeta);
    const Vector pi_eta = j.psi_eta - l_eta * X;
    const Vector pi_zeta = j.psi_zeta - l_zeta * X;
    const Vector cr = pi_eta + M.complex_structure(j.psi, pi_zeta);
    res[i] = {cr.norm(), std::abs(l_zeta + j.a_eta), std::abs(l_eta - j.a_zeta)};
  });

  for (size_t i = 0; i < grid.size(); ++i) {
    if (!keep[i]) {
      ++rep.skipped;
      continue;
    }
    rep.points.push_back(grid[i]);
    rep.residuals.push_back(res[i]);
    for (int c = 0; c < 3; ++c) {
      if (!std::isfinite(res[i][c])) throw NumericError("cr_residual: non-finite residual");
      rep.sup_components[c] = std::max(rep.sup_components[c], res[i][c]);
    }
  }
  rep.sup = *std::max_element(rep.sup_components.begin(), rep.sup_components.end());
  return rep;
}

namespace {

double circle_charge(const FiniteEnergyCurve& curve, double r, int n_phi, Partials mode) {
  std::vector<double> vals(n_phi);
  parallel_for(static_cast<size_t>(n_phi), [&](size_t j) {
    const Complex z = std::polar(r, kTwoPi * j / n_phi);
    const CurveJet jt = curve.jet(z, mode);
    // d/d phi = -zeta d/d eta + eta d/d zeta
    const Vector dphi = -z.imag() * jt.psi_eta + z.real() * jt.psi_zeta;
    vals[j] = curve.chart->lambda(jt.psi).dot(dphi);
  });
  double s = 0.0;
  for (double v : vals) s += v;
  return s * (kTwoPi / n_phi) / curve.period;
}

}  // namespace

ChargeResult charge(const FiniteEnergyCurve& curve, const std::vector<double>& radii_in, int n_phi, Partials mode) {
  std::vector<double> radii = radii_in;
  if (radii.empty())
    for (int j = 0; j <= 4; ++j) radii.push_back(0.2 * std::pow(0.5, j));
  if (n_phi < 8) throw DomainError("charge: need at least 8 samples per circle");
  for (size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] > 0.0) || !(radii[i] < curve.radius)) throw DomainError("charge: radius outside the curve domain");
    if (i > 0 && !(radii[i] < radii[i - 1])) throw DomainError("charge: radii must decrease");
  }

  ChargeResult out;
  out.radii = radii;
  for (double r : radii) out.per_radius.push_back(circle_charge(curve, r, n_phi, mode));

  // Richardson in the radius, error expansion in powers of r.
  std::vector<double> col = out.per_radius;
  double prev_diag = col.back();
  double diag = col.back();
  for (size_t level = 1; level < radii.size(); ++level) {
    std::vector<double> next;
    for (size_t i = 0; i + 1 < col.size(); ++i) {
      const double ratio = std::pow(radii[i] / radii[i + 1], static_cast<double>(level));
      next.push_back((ratio * col[i + 1] - col[i]) / (ratio - 1.0));
    }
    col = std::move(next);
    prev_diag = diag;
    diag = col.back();
  }
  out.value = diag;
  out.extrapolation_spread = radii.size() > 1 ? std::abs(diag - prev_diag) : 0.0;
  if (!std::isfinite(out.value)) throw NumericError("charge: non-finite extrapolation");
  const double scale = std::max(1.0, std::abs(out.value));
  if (out.extrapolation_spread > 1e-2 * scale) throw NumericError("charge: extrapolation does not settle");
  out.integer_defect = std::abs(out.value - std::round(out.value));
  return out;
}

double dlambda_energy(const FiniteEnergyCurve& curve, double r0, double r1, int n_r, int n_theta, Partials mode) {
  if (!(r0 > 0.0) || !(r1 > r0) || !(r1 < curve.radius)) throw DomainError("dlambda_energy: annulus outside domain");
  const GaussLegendre& gl = gauss_legendre(n_r);
  std::vector<double> rows(n_r, 0.0);
  const ContactChart& M = *curve.chart;
  parallel_for(static_cast<size_t>(n_r), [&](size_t i) {
    const double r = 0.5 * (r0 + r1) + 0.5 * (r1 - r0) * gl.nodes[i];
    double acc = 0.0;
    for (int j = 0; j < n_theta; ++j) {
      const Complex z = std::polar(r, kTwoPi * j / n_theta);
      const CurveJet jt = curve.jet(z, mode);
      const Matrix D = M.dlambda(jt.psi);
      double val = 0.0;
      for (const Vector* d : {&jt.psi_eta, &jt.psi_zeta}) {
        const Vector pw = xi_project(M, jt.psi, *d);
        const Vector jw = M.complex_structure(jt.psi, pw);
        val += pw.dot(D * jw);
      }
      acc += 0.5 * val;
    }
    rows[i] = gl.weights[i] * r * acc;
  });
  double total = 0.0;
  for (double v : rows) total += v;
  return total * 0.5 * (r1 - r0) * (kTwoPi / n_theta);
}

AsymptoticReport asymptotic_check(const FiniteEnergyCurve& curve, const std::vector<double>& r_list, int n_phi,
                                  double noise_floor) {
  if (r_list.empty()) throw DomainError("asymptotic_check: empty radius list");
  for (size_t i = 1; i < r_list.size(); ++i)
    if (!(r_list[i] > r_list[i - 1])) throw DomainError("asymptotic_check: r_list must increase");

  AsymptoticReport rep;
  rep.r = r_list;
  const double T_theta = curve.n;
  rep.T = curve.n * curve.period / kTwoPi;

  auto sample = [&](double r, std::vector<double>& a_dev, std::vector<double>& th_dev) {
    a_dev.resize(n_phi);
    th_dev.resize(n_phi);
    for (int j = 0; j < n_phi; ++j) {
      const double phi = kTwoPi * j / n_phi;
      const Complex z = std::polar(std::exp(-r), phi);
      a_dev[j] = curve.a(z) - rep.T * r;
      th_dev[j] = wrap_signed(curve.theta(z) - T_theta * phi);
    }
  };

  std::vector<double> a_dev, th_dev;
  sample(r_list.back(), a_dev, th_dev);
  double sum_a = 0.0;
  Complex sum_th{};
  for (int j = 0; j < n_phi; ++j) {
    sum_a += a_dev[j];
    sum_th += std::polar(1.0, th_dev[j]);
  }
  rep.a0 = sum_a / n_phi;
  rep.theta0 = std::abs(sum_th) > 0.0 ? std::arg(sum_th) : 0.0;

  for (double r : r_list) {
    sample(r, a_dev, th_dev);
    double e = 0.0, d = 0.0;
    for (int j = 0; j < n_phi; ++j) {
      e = std::max(e, std::abs(a_dev[j] - rep.a0));
      d = std::max(d, std::abs(wrap_signed(th_dev[j] - rep.theta0)));
    }
    rep.eps_sup.push_back(e);
    rep.delta_sup.push_back(d);
  }
  for (size_t i = 1; i < r_list.size(); ++i) {
    if (rep.eps_sup[i] > rep.eps_sup[i - 1] + noise_floor) rep.eps_monotone = false;
    if (rep.delta_sup[i] > rep.delta_sup[i - 1] + noise_floor) rep.delta_monotone = false;
  }
  return rep;
}

}  // namespace reeb
