#pragma once

#include <memory>

#include "reeb/curves.hpp"
#include "reeb/geometry.hpp"
#include "reeb/series.hpp"

namespace reeb {

/// Unique positive root r of p r^2 + q s^{2/k} r^{2l/k} = 1.
double phi_radius(double p, double q, int k, int l, double s);

/// (1 - p phi(sqrt s)^2) / (l s), written as (q / l) s^{1/k - 1} phi^{2l/k}. Needs s > 0.
double gamma_density(double p, double q, int k, int l, double s);

/// Integral of gamma_density over [0, s].
double gamma_hat(double p, double q, int k, int l, double s);

struct EllipsoidCurveParams {
  double p = 2.0;
  double q = 3.0;
  int k = 2;
  int l = 3;
  int n = 2;
  Series Phi;            ///< transverse coordinate nu = Phi(z) of the quotient tube
  double radius = 0.5;   ///< evaluation disc

  /// Checks q/p = l/k, gcd(k, l) = 1, l > k (or k = l = 1), k | n, ord(Phi) = b l with b >= 0.
  void validate() const;
  int b() const;  ///< ord(Phi) / l (0 when Phi vanishes identically)
  int c() const { return n / k; }
  double rotation() const { return static_cast<double>(l) / k; }
  /// True when the transverse coordinate closes up around the puncture (k | b l).
  bool single_valued() const { return (b() * l) % k == 0; }
};

/// (nu, theta) with nu = chi^{-1}(w2^k e^{-i l theta}) and chi(nu) = nu phi(|nu|)^l.
struct TubePoint {
  Complex nu;
  double theta = 0.0;
};
TubePoint beta_project(const EllipsoidCurveParams& params, Complex w2, double theta);

/// Tube (x, y, theta) with lambda = d theta + gamma(|nu|^2)(x dy - y dx), the quotient of
/// p * lambda_0 on E(p, q) by the k-fold covering; J is the standard structure of the nu-plane.
std::shared_ptr<MartinetTube> make_quotient_chart(double p, double q, int k, int l);

/// Point of E(p, q) over z with arg z = arg_z: w1 = phi e^{i n arg_z}, w2^k = Phi(z) w1^l.
Vec4 ellipsoid_point(const EllipsoidCurveParams& params, const Series& log_unit, Complex z, double arg_z);

/// The curve z -> (Phi(z), n arg z) in the quotient tube with a = -n ln|z| - gamma_hat(|Phi|^2) / 2.
/// Partials are by finite differences.
FiniteEnergyCurve ellipsoid_quotient_curve(const EllipsoidCurveParams& params);

}  // namespace reeb
