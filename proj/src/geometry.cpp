#include "reeb/geometry.hpp"

#include <array>
#include <cmath>

#include <Eigen/Dense>
#include <boost/numeric/odeint.hpp>

namespace reeb {

namespace {

Mat4 j0_matrix() {
  Mat4 j = Mat4::Zero();
  j(1, 0) = 1.0;
  j(0, 1) = -1.0;
  j(3, 2) = 1.0;
  j(2, 3) = -1.0;
  return j;
}

const Mat4& J0() {
  static const Mat4 j = j0_matrix();
  return j;
}

Mat2 j0_planar() {
  Mat2 j;
  j << 0.0, -1.0, 1.0, 0.0;
  return j;
}

}  // namespace

std::string to_string(ChartKind kind) {
  switch (kind) {
    case ChartKind::StandardSphere: return "StandardSphere";
    case ChartKind::Ellipsoid: return "Ellipsoid";
    case ChartKind::MartinetTube: return "MartinetTube";
    case ChartKind::BlowupChart: return "BlowupChart";
    case ChartKind::Congruence: return "Congruence";
  }
  return "unknown";
}

PlanarJ PlanarJ::standard() { return {j0_planar()}; }

double PlanarJ::square_defect() const {
  return (entries * entries + Mat2::Identity()).cwiseAbs().maxCoeff();
}

// --- ContactChart defaults -------------------------------------------------

double ContactChart::constraint(const Vector&) const { return 0.0; }

std::optional<Vector> ContactChart::constraint_gradient(const Vector&) const { return std::nullopt; }

Vector ContactChart::project_to_locus(const Vector& v) const { return v; }

Matrix ContactChart::dlambda(const Vector& v) const {
  const int d = dim();
  const double h = 1e-5 * std::max(1.0, v.norm());
  Matrix grad(d, d);  // grad(i, j) = d_i c_j
  for (int i = 0; i < d; ++i) {
    Vector vp = v, vm = v;
    vp[i] += h;
    vm[i] -= h;
    if (vp[i] == v[i] || vm[i] == v[i]) throw NumericError("dlambda: finite-difference step underflow");
    grad.row(i) = (lambda(vp) - lambda(vm)).transpose() / (2.0 * h);
  }
  return grad - grad.transpose();
}

Matrix ContactChart::reeb_jacobian(const Vector& v) const {
  const int d = dim();
  const double h = 1e-6 * std::max(1.0, v.norm());
  Matrix jac(d, d);
  for (int i = 0; i < d; ++i) {
    Vector vp = v, vm = v;
    vp[i] += h;
    vm[i] -= h;
    if (vp[i] == v[i]) throw NumericError("reeb_jacobian: finite-difference step underflow");
    jac.col(i) = (reeb(vp) - reeb(vm)) / (2.0 * h);
  }
  if (!jac.allFinite()) throw NumericError("reeb_jacobian: non-finite entries");
  return jac;
}

Matrix ContactChart::xi_basis(const Vector& v) const {
  const Vector c = lambda(v);
  const auto grad = constraint_gradient(v);
  if (dim() == 3) {
    if (std::abs(c[2]) < 1e-12) throw DomainError("xi_basis: contact plane contains the t-direction");
    Matrix b(3, 2);
    b << 1.0, 0.0, 0.0, 1.0, -c[0] / c[2], -c[1] / c[2];
    return b;
  }
  Matrix normals(dim(), grad ? 2 : 1);
  int col = 0;
  if (grad) normals.col(col++) = *grad;
  normals.col(col) = c;
  Eigen::HouseholderQR<Matrix> qr(normals);
  Matrix q = qr.householderQ() * Matrix::Identity(dim(), dim());
  return q.rightCols(2);
}

bool ContactChart::on_locus(const Vector& v, double tol) const {
  if (v.size() != dim() || !v.allFinite()) return false;
  return std::abs(constraint(v)) <= tol;
}

bool ContactChart::is_tangent(const Vector& v, const Vector& w, double tol) const {
  if (w.size() != dim() || !w.allFinite()) return false;
  const auto grad = constraint_gradient(v);
  if (!grad) return true;
  return std::abs(grad->normalized().dot(w)) <= tol;
}

void ContactChart::calibrate_sign(const Vector& basepoint) {
  const double val = raw_lambda(basepoint).dot(raw_reeb(basepoint));
  if (std::abs(val - 1.0) < 1e-6) {
    sign_ = 1.0;
  } else if (std::abs(val + 1.0) < 1e-6) {
    sign_ = -1.0;
  } else {
    throw ConstructionError("chart: lambda(X) = " + std::to_string(val) + " at basepoint, expected +-1");
  }
}

// --- StandardSphere --------------------------------------------------------

StandardSphere::StandardSphere() { calibrate_sign(Vec4(1.0, 0.0, 0.0, 0.0)); }

double StandardSphere::constraint(const Vector& v) const { return v.squaredNorm() - 1.0; }

std::optional<Vector> StandardSphere::constraint_gradient(const Vector& v) const { return Vector(2.0 * v); }

Vector StandardSphere::project_to_locus(const Vector& v) const {
  const double n = v.norm();
  if (n == 0.0) throw DomainError("sphere: cannot project the origin");
  return v / n;
}

Vector StandardSphere::raw_lambda(const Vector& v) const { return J0() * v; }

Vector StandardSphere::raw_reeb(const Vector& v) const { return J0() * v; }

Matrix StandardSphere::dlambda(const Vector&) const { return 2.0 * sign_ * J0().transpose(); }

Matrix StandardSphere::reeb_jacobian(const Vector&) const { return J0(); }

Vector StandardSphere::complex_structure(const Vector&, const Vector& w) const { return J0() * w; }

// --- Ellipsoid -------------------------------------------------------------

Ellipsoid::Ellipsoid(double p, double q) : p_(p), q_(q) {
  if (!(p > 0.0) || !(q > 0.0) || !std::isfinite(p) || !std::isfinite(q))
    throw ConstructionError("ellipsoid: p and q must be positive");
  a_ = Vec4(p, p, q, q).asDiagonal();
  calibrate_sign(Vec4(1.0 / std::sqrt(p), 0.0, 0.0, 0.0));
}

std::string Ellipsoid::name() const {
  return "ellipsoid(" + std::to_string(p_) + "," + std::to_string(q_) + ")";
}

double Ellipsoid::constraint(const Vector& v) const { return v.dot(a_ * v) - 1.0; }

std::optional<Vector> Ellipsoid::constraint_gradient(const Vector& v) const { return Vector(2.0 * (a_ * v)); }

Vector Ellipsoid::project_to_locus(const Vector& v) const {
  const double s = v.dot(a_ * v);
  if (!(s > 0.0)) throw DomainError("ellipsoid: cannot project the origin");
  return v / std::sqrt(s);
}

Vector Ellipsoid::raw_lambda(const Vector& v) const { return J0() * v; }

Vector Ellipsoid::raw_reeb(const Vector& v) const { return a_ * (J0() * v); }

Matrix Ellipsoid::dlambda(const Vector&) const { return 2.0 * sign_ * J0().transpose(); }

Matrix Ellipsoid::reeb_jacobian(const Vector&) const { return a_ * J0(); }

Vector Ellipsoid::complex_structure(const Vector& v, const Vector& w) const {
  const Matrix b = xi_basis(v);
  Vector e1 = b.col(0);
  Vector e2 = b.col(1);
  if (e1.dot(dlambda(v) * e2) < 0.0) e2 = -e2;
  return w.dot(e1) * e2 - w.dot(e2) * e1;
}

Vec4 Ellipsoid::point(double rho2, double arg1, double arg2) const {
  const double rest = 1.0 - q_ * rho2 * rho2;
  if (rho2 < 0.0 || rest < 0.0) throw DomainError("ellipsoid: |w2| too large for a point of E(p,q)");
  const double r1 = std::sqrt(rest / p_);
  return from_c2(std::polar(r1, arg1), std::polar(rho2, arg2));
}

// --- MartinetTube ----------------------------------------------------------

MartinetTube::MartinetTube(Coefficient f1, Coefficient f2, double period, PlanarJField j, std::string label)
    : f1_(std::move(f1)), f2_(std::move(f2)), period_(period), j_(std::move(j)), label_(std::move(label)) {
  if (!f1_ || !f2_) throw ConstructionError("tube: coefficient functions required");
  if (!(period_ > 0.0)) throw ConstructionError("tube: period must be positive");
  if (PlanarJ{planar_j(0.0, 0.0)}.square_defect() > 1e-9)
    throw ConstructionError("tube: planar structure does not square to -Id");
  calibrate_sign(Vec3(0.0, 0.0, 0.0));
}

Vector MartinetTube::raw_lambda(const Vector& v) const { return Vec3(f1_(v[0], v[1]), f2_(v[0], v[1]), 1.0); }

Vector MartinetTube::raw_reeb(const Vector&) const { return Vec3(0.0, 0.0, 1.0); }

Matrix MartinetTube::reeb_jacobian(const Vector&) const { return Matrix::Zero(3, 3); }

Mat2 MartinetTube::planar_j(double x, double y) const { return j_ ? j_(x, y) : j0_planar(); }

Vector MartinetTube::complex_structure(const Vector& v, const Vector& w) const {
  const Vector c = lambda(v);
  const Vec2 jw = planar_j(v[0], v[1]) * w.head<2>();
  return Vec3(jw[0], jw[1], -(c[0] * jw[0] + c[1] * jw[1]) / c[2]);
}

Vector MartinetTube::displacement(const Vector& from, const Vector& to) const {
  Vector d = to - from;
  d[2] -= period_ * std::round(d[2] / period_);
  return d;
}

// --- BlowupChart -----------------------------------------------------------

BlowupChart::BlowupChart()
    : MartinetTube([](double x, double y) { return -y / (1.0 + x * x + y * y); },
                   [](double x, double y) { return x / (1.0 + x * x + y * y); }, kTwoPi, nullptr, "blowup-chart") {}

Vec4 BlowupChart::to_sphere(const Vector& xyt) {
  const Complex nu(xyt[0], xyt[1]);
  const Complex mu = std::polar(1.0 / std::sqrt(1.0 + std::norm(nu)), xyt[2]);
  return from_c2(mu, mu * nu);
}

Vec3 BlowupChart::from_sphere(const Vec4& v) {
  const Complex w1 = w1_of(v);
  if (std::abs(w1) < 1e-14) throw DomainError("blowup chart: w1 = 0 is outside the chart");
  const Complex nu = w2_of(v) / w1;
  return {nu.real(), nu.imag(), wrap_angle(std::arg(w1))};
}

Eigen::Matrix<double, 4, 3> BlowupChart::jacobian(const Vector& xyt) {
  const double x = xyt[0], y = xyt[1];
  const Complex nu(x, y);
  const double s = 1.0 + x * x + y * y;
  const Complex mu = std::polar(1.0 / std::sqrt(s), xyt[2]);
  const Complex dx1 = mu * (-x / s), dy1 = mu * (-y / s), dt1 = kI * mu;
  const Complex dx2 = dx1 * nu + mu, dy2 = dy1 * nu + kI * mu, dt2 = kI * mu * nu;
  Eigen::Matrix<double, 4, 3> h;
  h.col(0) = from_c2(dx1, dx2);
  h.col(1) = from_c2(dy1, dy2);
  h.col(2) = from_c2(dt1, dt2);
  return h;
}

Vector BlowupChart::complex_structure(const Vector& v, const Vector& w) const {
  const Eigen::Matrix<double, 4, 3> h = jacobian(v);
  const Vec4 image = J0() * (h * w.head<3>());
  return (h.transpose() * h).ldlt().solve(h.transpose() * image);
}

// --- Operations ------------------------------------------------------------

namespace {

void require_on_locus(const ContactChart& chart, const Vector& v) {
  if (!chart.on_locus(v)) throw DomainError(chart.name() + ": base point off the chart locus");
}

void require_tangent(const ContactChart& chart, const Vector& v, const Vector& w) {
  if (!chart.is_tangent(v, w)) throw DomainError(chart.name() + ": vector not tangent at base point");
}

}  // namespace

double eval_contact_form(const ContactChart& chart, const Vector& v, const Vector& w) {
  require_on_locus(chart, v);
  require_tangent(chart, v, w);
  return chart.lambda(v).dot(w);
}

Vector reeb_field(const ContactChart& chart, const Vector& v) {
  require_on_locus(chart, v);
  return chart.reeb(v);
}

Vector xi_project(const ContactChart& chart, const Vector& v, const Vector& w) {
  const double l = eval_contact_form(chart, v, w);
  return w - l * chart.reeb(v);
}

double d_lambda(const ContactChart& chart, const Vector& v, const Vector& u, const Vector& w) {
  require_on_locus(chart, v);
  require_tangent(chart, v, u);
  require_tangent(chart, v, w);
  return u.dot(chart.dlambda(v) * w);
}

PlanarJ mu_conjugate_j(const ContactChart& chart, double x, double y) {
  if (chart.dim() != 3) throw DomainError("mu_conjugate_j: requires tube coordinates (x, y, t)");
  const Vec3 v(x, y, 0.0);
  const Vector c = chart.lambda(v);
  // mu restricted to xi is invertible iff xi is transverse to d/dt.
  if (std::abs(c[2]) < 1e-8 * c.norm()) throw DomainError("mu_conjugate_j: mu is singular (tube too thick)");
  const Matrix b = chart.xi_basis(v);
  Mat2 j;
  for (int i = 0; i < 2; ++i) j.col(i) = chart.complex_structure(v, b.col(i)).head<2>();
  return {j};
}

Straightening straighten_planar_j(const PlanarJField& j, double x, double s) {
  namespace odeint = boost::numeric::odeint;
  using State = std::array<double, 2>;
  auto rhs = [&j](const State& st, State& d, double) {
    const Mat2 m = j(st[0], st[1]);
    d[0] = m(0, 0);
    d[1] = m(1, 0);
  };
  auto solve = [&](double x0) {
    State st{x0, 0.0};
    if (s != 0.0) {
      auto stepper = odeint::make_controlled<odeint::runge_kutta_dopri5<State>>(1e-13, 1e-13);
      odeint::integrate_adaptive(stepper, rhs, st, 0.0, s, s / 64.0);
    }
    return Vec2(st[0], st[1]);
  };

  Straightening out;
  out.image = solve(x);
  const double h = 1e-5;
  const Vec2 dx = (solve(x + h) - solve(x - h)) / (2.0 * h);
  const Mat2 jm = j(out.image[0], out.image[1]);
  out.jacobian.col(0) = dx;
  out.jacobian.col(1) = jm.col(0);
  if (std::abs(out.jacobian.determinant()) < 1e-12) throw DomainError("straighten: degenerate flow box");
  out.conjugated = out.jacobian.inverse() * jm * out.jacobian;
  out.defect = (out.conjugated - j0_planar()).cwiseAbs().maxCoeff();
  return out;
}

}  // namespace reeb
