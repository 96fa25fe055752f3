#include "reeb/ellipsoid_model.hpp"

#include <cmath>
#include <numeric>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

namespace reeb {

double phi_radius(double p, double q, int k, int l, double s) {
  if (!(p > 0.0) || !(q > 0.0)) throw DomainError("phi_radius: p and q must be positive");
  if (k < 1 || l < 1) throw DomainError("phi_radius: k and l must be positive");
  if (!(s >= 0.0)) throw DomainError("phi_radius: s must be nonnegative");
  const double top = 1.0 / std::sqrt(p);
  if (s == 0.0) return top;
  const double coef = q * std::pow(s, 2.0 / k);
  const double e = 2.0 * l / k;
  auto f = [&](double r) { return p * r * r + coef * std::pow(r, e) - 1.0; };
  if (!(f(top) > 0.0)) return top;
  // f(0) = -1 and f(1/sqrt p) >= 0 bracket the root.
  std::uintmax_t iters = 200;
  auto [lo, hi] = boost::math::tools::toms748_solve(f, 0.0, top, -1.0, f(top),
                                                    boost::math::tools::eps_tolerance<double>(52), iters);
  double r = 0.5 * (lo + hi);
  for (int i = 0; i < 2; ++i) {
    const double df = 2.0 * p * r + coef * e * std::pow(r, e - 1.0);
    if (df > 0.0) r -= f(r) / df;
  }
  return r;
}

double gamma_density(double p, double q, int k, int l, double s) {
  if (!(s > 0.0)) throw DomainError("gamma_density: s must be positive");
  const double phi = phi_radius(p, q, k, l, std::sqrt(s));
  return (q / l) * std::pow(s, 1.0 / k - 1.0) * std::pow(phi, 2.0 * l / k);
}

double gamma_hat(double p, double q, int k, int l, double s) {
  if (!(s >= 0.0)) throw DomainError("gamma_hat: s must be nonnegative");
  if (s == 0.0) return 0.0;
  // tau = u^k removes the endpoint singularity of the density.
  auto integrand = [&](double u) {
    return (k * q / l) * std::pow(phi_radius(p, q, k, l, std::pow(u, 0.5 * k)), 2.0 * l / k);
  };
  const double upper = std::pow(s, 1.0 / k);
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  double err = 0.0;
  // Non-adaptive first so the result is a smooth function of s.
  double val = GK::integrate(integrand, 0.0, upper, 0, 1e-14, &err);
  if (err > 1e-12 * std::max(1.0, std::abs(val))) val = GK::integrate(integrand, 0.0, upper, 15, 1e-14, &err);
  if (!std::isfinite(val) || err > 1e-9 * std::max(1.0, std::abs(val)))
    throw NumericError("gamma_hat: quadrature did not converge");
  return val;
}

void EllipsoidCurveParams::validate() const {
  if (!(p > 0.0) || !(q > 0.0)) throw DomainError("ellipsoid params: p, q must be positive");
  if (k < 1 || l < 1) throw DomainError("ellipsoid params: k, l must be positive");
  if (std::gcd(k, l) != 1) throw DomainError("ellipsoid params: k and l must be coprime");
  if (!(l > k || (k == 1 && l == 1))) throw DomainError("ellipsoid params: need l > k");
  if (std::abs(q / p - static_cast<double>(l) / k) > 1e-12 * l / k)
    throw DomainError("ellipsoid params: q/p must equal l/k");
  if (n < 1 || n % k != 0) throw DomainError("ellipsoid params: n must be a positive multiple of k");
  if (!(radius > 0.0)) throw DomainError("ellipsoid params: radius must be positive");
  for (const Complex& c : Phi.coeffs())
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw DomainError("ellipsoid params: non-finite Phi");
  const auto v = Phi.valuation();
  if (v && *v % l != 0) throw DomainError("ellipsoid params: ord(Phi) must be a multiple of l");
}

int EllipsoidCurveParams::b() const {
  const auto v = Phi.valuation();
  return v ? *v / l : 0;
}

TubePoint beta_project(const EllipsoidCurveParams& params, Complex w2, double theta) {
  const Complex c = std::pow(w2, params.k) * std::polar(1.0, -params.l * theta);
  const double target = std::abs(c);
  TubePoint out;
  out.theta = theta;
  if (target == 0.0) return out;

  auto g = [&](double rho) {
    return rho * std::pow(phi_radius(params.p, params.q, params.k, params.l, rho), params.l) - target;
  };
  double lo = 0.0;
  double hi = target * std::pow(params.p, 0.5 * params.l);
  double g_prev = g(hi);
  for (int i = 0; g_prev < 0.0; ++i) {
    if (i > 60) throw NumericError("beta_project: radius exceeds the tube");
    lo = hi;
    hi *= 2.0;
    const double g_next = g(hi);
    if (g_next <= g_prev) throw NumericError("beta_project: chi is not invertible at this radius");
    g_prev = g_next;
  }
  std::uintmax_t iters = 200;
  auto [a, b] = boost::math::tools::toms748_solve(g, lo, hi, boost::math::tools::eps_tolerance<double>(52), iters);
  const double rho = 0.5 * (a + b);
  if (!std::isfinite(rho)) throw NumericError("beta_project: non-finite radius");
  out.nu = std::polar(rho, std::arg(c));
  return out;
}

std::shared_ptr<MartinetTube> make_quotient_chart(double p, double q, int k, int l) {
  auto f1 = [=](double x, double y) {
    const double s = x * x + y * y;
    return s == 0.0 ? 0.0 : -y * gamma_density(p, q, k, l, s);
  };
  auto f2 = [=](double x, double y) {
    const double s = x * x + y * y;
    return s == 0.0 ? 0.0 : x * gamma_density(p, q, k, l, s);
  };
  return std::make_shared<MartinetTube>(f1, f2, kTwoPi, nullptr, "ellipsoid-quotient");
}

Vec4 ellipsoid_point(const EllipsoidCurveParams& P, const Series& log_unit, Complex z, double arg_z) {
  const Complex nu = P.Phi.eval(z);
  const double phi = phi_radius(P.p, P.q, P.k, P.l, std::abs(nu));
  const Complex w1 = std::polar(phi, P.n * arg_z);
  if (nu == Complex{}) return from_c2(w1, 0.0);
  const int bl = P.b() * P.l;
  const Complex expo = (bl * std::log(std::abs(z)) + kI * static_cast<double>((P.n + P.b()) * P.l) * arg_z +
                        log_unit.eval(z)) /
                       static_cast<double>(P.k);
  const Complex w2 = std::pow(phi, static_cast<double>(P.l) / P.k) * std::exp(expo);
  return from_c2(w1, w2);
}

FiniteEnergyCurve ellipsoid_quotient_curve(const EllipsoidCurveParams& P) {
  P.validate();
  FiniteEnergyCurve c;
  auto chart = make_quotient_chart(P.p, P.q, P.k, P.l);
  c.chart = chart;
  c.n = P.n;
  c.period = kTwoPi;
  c.radius = P.radius;
  c.rotation = P.rotation();
  c.branched = !P.Phi.is_zero();
  c.provenance = "ellipsoid E(" + std::to_string(P.p) + "," + std::to_string(P.q) + ") n=" + std::to_string(P.n);

  const Series Phi = P.Phi;
  const int n = P.n;
  const double p = P.p, q = P.q;
  const int k = P.k, l = P.l;
  c.psi = [Phi, n](Complex z) -> Vector {
    const Complex nu = Phi.eval(z);
    return Vec3(nu.real(), nu.imag(), wrap_angle(n * std::arg(z)));
  };
  c.a = [Phi, n, p, q, k, l](Complex z) {
    return -n * std::log(std::abs(z)) - 0.5 * gamma_hat(p, q, k, l, std::norm(Phi.eval(z)));
  };
  c.theta = [n](Complex z) { return wrap_angle(n * std::arg(z)); };

  Series log_unit(P.Phi.order());
  if (!P.Phi.is_zero()) log_unit = P.Phi.shift_down(P.b() * P.l).log();
  c.ambient = [P, log_unit](Complex z, double arg_z) -> Vec4 { return ellipsoid_point(P, log_unit, z, arg_z); };
  return c;
}

}  // namespace reeb
