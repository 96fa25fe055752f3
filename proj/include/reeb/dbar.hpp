#pragma once

#include <functional>
#include <string>
#include <vector>

#include "reeb/types.hpp"

namespace reeb {

/// Gauss-Legendre nodes and weights on [-1, 1] (cached per order).
struct GaussLegendre {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussLegendre& gauss_legendre(int n);

enum class SingularMode { Recentered };

struct QuadratureConfig {
  int n_r = 128;
  int n_theta = 128;
  SingularMode mode = SingularMode::Recentered;
};

/// Complex function on the disc |z| < radius, sampled on a polar tensor grid
/// (Gauss-Legendre in r, uniform in theta). Off-node values come from the
/// evaluator when present, otherwise from local 4x4 Lagrange interpolation.
class DiscGridFunction {
 public:
  using Evaluator = std::function<Complex(Complex)>;

  /// Tabulates f at the nodes unless `tabulate` is false (then values are computed on demand).
  static DiscGridFunction from_evaluator(Evaluator f, double radius, int n_r, int n_theta, bool tabulate = true);
  static DiscGridFunction from_values(double radius, int n_r, int n_theta, std::vector<Complex> values);

  double radius() const { return radius_; }
  int n_r() const { return n_r_; }
  int n_theta() const { return n_theta_; }
  double node_r(int i) const { return r_[i]; }
  double node_theta(int j) const { return kTwoPi * j / n_theta_; }
  Complex node(int i, int j) const { return std::polar(r_[i], node_theta(j)); }
  Complex value(int i, int j) const;
  bool has_evaluator() const { return static_cast<bool>(eval_); }

  Complex operator()(Complex z) const;
  double sup_abs() const;

  /// Columns r, theta, Re, Im.
  void write_csv(const std::string& path) const;

 private:
  DiscGridFunction(double radius, int n_r, int n_theta);
  Complex interpolate(Complex z) const;

  double radius_;
  int n_r_;
  int n_theta_;
  std::vector<double> r_;
  std::vector<Complex> values_;  // row-major in (r, theta); empty when untabulated
  Evaluator eval_;
};

/// Singular integral int_D G(mu) / (mu - z) dmu ^ dmu-bar with dmu ^ dmu-bar = -2i dA.
/// The polar frame is centred at z, which turns the kernel into the bounded factor e^{-i phi}.
Complex cauchy_green(const DiscGridFunction& g, Complex z, const QuadratureConfig& cfg = {});

/// (1/2 pi i) times the transform of g: a solution of du/dz-bar = g on the disc.
DiscGridFunction dbar_solution(const DiscGridFunction& g, const QuadratureConfig& cfg, int probe_r, int probe_theta);

struct DbarResidualOptions {
  double step = 1e-5;
};

/// sup over nodes of u with r0 <= |z| <= r1 of |du/dz-bar - f| (central differences).
double dbar_residual(const DiscGridFunction& u, const DiscGridFunction& f, double r0, double r1,
                     const DbarResidualOptions& opt = {});

/// g(w) = (1/2 pi i) int (1/2)(f1 + i f2)(mu) / (mu - w) dmu ^ dmu-bar, so that dg/dw-bar = (1/2)(f1 + i f2).
/// `f12` holds the complex combination f1 + i f2.
Complex g_potential(const DiscGridFunction& f12, Complex w, const QuadratureConfig& cfg = {});

struct BoundCertificate {
  double K = 0.0;                   ///< sup |G| over the grid nodes
  double sup_ratio = 0.0;           ///< sup (1/2 pi) |G^(z) - G^(0)| / |z| on the probe ring
  double raw_sup_ratio = 0.0;       ///< same without subtracting G^(0)
  double origin_value = 0.0;        ///< |G^(0)|
  bool raw_exceeds_bound = false;   ///< raw ratio above K near the origin
};

struct BoundOptions {
  double r_min = 0.1;
  double r_max_fraction = 0.95;
  int probe_r = 12;
  int probe_theta = 24;
  double slack = 1e-3;
};

BoundCertificate bound_certificate(const DiscGridFunction& g, const QuadratureConfig& cfg = {},
                                   const BoundOptions& opt = {});

}  // namespace reeb
