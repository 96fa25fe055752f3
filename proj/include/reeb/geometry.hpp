#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "reeb/types.hpp"

namespace reeb {

enum class ChartKind { StandardSphere, Ellipsoid, MartinetTube, BlowupChart, Congruence };

std::string to_string(ChartKind kind);

/// 2x2 real matrix field value j(x, y) with j^2 = -Id.
struct PlanarJ {
  Mat2 entries;

  static PlanarJ standard();
  double square_defect() const;  // |j^2 + Id|_max
};

using PlanarJField = std::function<Mat2(double x, double y)>;

/// Coordinate presentation of a contact manifold (M, lambda, J).
///
/// Points and tangent vectors are stored in ambient coordinates: R^4 for the
/// charts living on S^3 or an ellipsoid, R^3 = (x, y, t) for tube charts.
/// The covector returned by lambda() is the coefficient vector of the contact
/// form in those coordinates, so lambda(w) = lambda(v).dot(w).
///
/// Charts are immutable after construction and safe to share across threads.
class ContactChart {
 public:
  virtual ~ContactChart() = default;

  virtual ChartKind kind() const = 0;
  virtual std::string name() const = 0;
  virtual int dim() const = 0;

  /// Defining function of the locus (zero on it). Tube charts are open sets.
  virtual double constraint(const Vector& v) const;
  virtual std::optional<Vector> constraint_gradient(const Vector& v) const;
  virtual Vector project_to_locus(const Vector& v) const;

  Vector lambda(const Vector& v) const { return sign_ * raw_lambda(v); }
  Vector reeb(const Vector& v) const { return raw_reeb(v); }

  /// Matrix D with d lambda(u, w) = u^T D w. Defaults to central differences
  /// of the lambda coefficients with step 1e-5 * max(1, |v|).
  virtual Matrix dlambda(const Vector& v) const;
  /// Jacobian of the Reeb field in ambient coordinates (central differences, h = 1e-6).
  virtual Matrix reeb_jacobian(const Vector& v) const;

  /// J restricted to xi = ker(lambda) at v. Only meaningful for w in xi.
  virtual Vector complex_structure(const Vector& v, const Vector& w) const = 0;

  /// to - from, with periodic coordinates unwrapped.
  virtual Vector displacement(const Vector& from, const Vector& to) const { return to - from; }

  /// Columns span xi_v (2 columns). Orthonormal for the R^4 charts.
  Matrix xi_basis(const Vector& v) const;

  bool on_locus(const Vector& v, double tol = 1e-8) const;
  bool is_tangent(const Vector& v, const Vector& w, double tol = 1e-8) const;

  double lambda_sign() const { return sign_; }

 protected:
  virtual Vector raw_lambda(const Vector& v) const = 0;
  virtual Vector raw_reeb(const Vector& v) const = 0;

  /// Fixes the orientation sign so that lambda(X) = +1 at `basepoint`.
  void calibrate_sign(const Vector& basepoint);

  double sign_ = 1.0;
};

using ChartPtr = std::shared_ptr<const ContactChart>;

/// S^3 in C^2 with lambda_0 = Re(-i (conj(w1) dw1 + conj(w2) dw2)) and J = J_0.
class StandardSphere : public ContactChart {
 public:
  StandardSphere();
  ChartKind kind() const override { return ChartKind::StandardSphere; }
  std::string name() const override { return "standard-sphere"; }
  int dim() const override { return 4; }
  double constraint(const Vector& v) const override;
  std::optional<Vector> constraint_gradient(const Vector& v) const override;
  Vector project_to_locus(const Vector& v) const override;
  Matrix dlambda(const Vector& v) const override;
  Matrix reeb_jacobian(const Vector& v) const override;
  Vector complex_structure(const Vector& v, const Vector& w) const override;

 protected:
  Vector raw_lambda(const Vector& v) const override;
  Vector raw_reeb(const Vector& v) const override;
};

/// E(p, q) = { p|w1|^2 + q|w2|^2 = 1 } with the restriction of lambda_0.
/// Reeb field A J_0 v with A = diag(p, p, q, q), i.e. diag(p, q) on C^2.
/// J on xi is the quarter turn in the Euclidean metric of xi, oriented by d lambda.
class Ellipsoid : public ContactChart {
 public:
  Ellipsoid(double p, double q);
  ChartKind kind() const override { return ChartKind::Ellipsoid; }
  std::string name() const override;
  int dim() const override { return 4; }
  double p() const { return p_; }
  double q() const { return q_; }
  const Mat4& weight_matrix() const { return a_; }

  double constraint(const Vector& v) const override;
  std::optional<Vector> constraint_gradient(const Vector& v) const override;
  Vector project_to_locus(const Vector& v) const override;
  Matrix dlambda(const Vector& v) const override;
  Matrix reeb_jacobian(const Vector& v) const override;
  Vector complex_structure(const Vector& v, const Vector& w) const override;

  /// Point of E(p, q) with the given phases and |w2| = rho2.
  Vec4 point(double rho2, double arg1, double arg2) const;

 protected:
  Vector raw_lambda(const Vector& v) const override;
  Vector raw_reeb(const Vector& v) const override;

 private:
  double p_;
  double q_;
  Mat4 a_;
};

/// Straightened tube (x, y, t) with lambda = dt + f1 dx + f2 dy, Reeb = d/dt,
/// and J = mu^{-1} j(x, y) mu, where mu is the projection (v1, v2, v3) -> (v1, v2).
/// The coordinate t is periodic with the given period.
class MartinetTube : public ContactChart {
 public:
  using Coefficient = std::function<double(double x, double y)>;

  MartinetTube(Coefficient f1, Coefficient f2, double period = 1.0,
               PlanarJField j = nullptr, std::string label = "martinet-tube");
  ChartKind kind() const override { return ChartKind::MartinetTube; }
  std::string name() const override { return label_; }
  int dim() const override { return 3; }
  double period() const { return period_; }

  Matrix reeb_jacobian(const Vector& v) const override;
  Vector complex_structure(const Vector& v, const Vector& w) const override;
  Vector displacement(const Vector& from, const Vector& to) const override;

  Mat2 planar_j(double x, double y) const;
  double f1(double x, double y) const { return f1_(x, y); }
  double f2(double x, double y) const { return f2_(x, y); }

 protected:
  Vector raw_lambda(const Vector& v) const override;
  Vector raw_reeb(const Vector& v) const override;

  Coefficient f1_;
  Coefficient f2_;
  double period_;
  PlanarJField j_;
  std::string label_;
};

/// The chart of S^3 minus {w1 = 0} given by nu = w2 / w1 = x + iy and theta = arg(w1):
/// h(x, y, theta) = (mu, mu nu) with mu = e^{i theta} (1 + |nu|^2)^{-1/2}.
/// h^* lambda_0 = d theta + (x dy - y dx) / (1 + |nu|^2).
/// J is transported from J_0 through h rather than assumed.
class BlowupChart : public MartinetTube {
 public:
  BlowupChart();
  ChartKind kind() const override { return ChartKind::BlowupChart; }
  Vector complex_structure(const Vector& v, const Vector& w) const override;

  static Vec4 to_sphere(const Vector& xyt);
  static Vec3 from_sphere(const Vec4& v);
  /// 4x3 Jacobian of h.
  static Eigen::Matrix<double, 4, 3> jacobian(const Vector& xyt);
};

// --- Operations -----------------------------------------------------------

/// lambda_v(w). Throws DomainError off the locus or for non-tangent w.
double eval_contact_form(const ContactChart& chart, const Vector& v, const Vector& w);
/// X_lambda(v). Throws DomainError off the locus.
Vector reeb_field(const ContactChart& chart, const Vector& v);
/// pi(w) = w - lambda(w) X_lambda.
Vector xi_project(const ContactChart& chart, const Vector& v, const Vector& w);
/// d lambda_v(u, w).
double d_lambda(const ContactChart& chart, const Vector& v, const Vector& u, const Vector& w);
/// j(x, y) = mu J mu^{-1} for tube charts, evaluated on the slice t = 0.
PlanarJ mu_conjugate_j(const ContactChart& chart, double x, double y);

/// Result of straightening a planar complex structure along the flow of j e1.
struct Straightening {
  Vec2 image;          ///< phi(x, s)
  Mat2 jacobian;       ///< d phi at (x, s)
  Mat2 conjugated;     ///< phi_*^{-1} j(phi) phi_*
  double defect = 0;   ///< |conjugated - j0|_max
};

/// phi(x, s): solve dX/ds = j(X) e1 from X(0) = (x, 0).
Straightening straighten_planar_j(const PlanarJField& j, double x, double s);

}  // namespace reeb
