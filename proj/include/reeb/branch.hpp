#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "reeb/curves.hpp"
#include "reeb/ellipsoid_model.hpp"
#include "reeb/series.hpp"

namespace reeb {

struct QuasiSectorOptions {
  double r_max = 0.2;
  double r_min = 1e-3;
  int n_circles = 40;
  int samples_per_branch = 64;
};

/// The level set theta(z) = theta0 near 0, strung into n arcs.
/// Arcs are indexed clockwise: arc k starts near the ray arg z = (theta0 - 2 pi k) / n,
/// and the sector Q_k lies clockwise from arc k up to arc k + 1 (arc n = arc 0).
class QuasiSectorDecomposition {
 public:
  double theta0 = 0.0;
  int n = 1;
  std::vector<double> radii;                    ///< decreasing
  std::vector<std::vector<double>> arc_angles;  ///< [k][i], unwrapped near ray(k)
  double max_step_ratio = 0.0;                  ///< max |z_i - z_{i+1}| / (r_i - r_{i+1}) along arcs

  double ray(int k) const { return (theta0 - kTwoPi * k) / n; }
  /// Angle of arc k at radius r (linear in r, clamped to the sampled range).
  double arc_angle(int k, double r) const;
  Complex arc_point(int k, int i) const { return std::polar(radii[i], arc_angles[k][i]); }
  /// Sector containing z (0..n-1).
  int sector_of(Complex z) const;
  /// Continuous argument on the closure of Q_k, equal to ray-side values near arc k.
  double clockwise_arg(Complex z, int k) const;
  /// Angular distance from arg z to the nearest arc.
  double arc_distance(Complex z) const;
  /// max over arcs and radii r <= r_upto of |arc angle - ray| (radians).
  double max_ray_deviation(double r_upto) const;
};

QuasiSectorDecomposition quasi_sector_decompose(const FiniteEnergyCurve& curve, double theta0,
                                                const QuasiSectorOptions& opt = {});

/// Holomorphic data of a constructed curve, organised by sectors.
struct BranchFamily {
  FiniteEnergyCurve curve;
  std::shared_ptr<const QuasiSectorDecomposition> sectors;
  int n = 1;
  double rotation = 1.0;  ///< alpha = e^{2 pi i rotation}
  Complex alpha{1.0, 0.0};
  std::vector<double> c;  ///< branch constants, c_0 = 0

  std::function<Complex(Complex)> G_hat;      ///< handle with dG^/dz-bar = 2 pi i G
  std::function<Complex(Complex)> G_density;  ///< G
  std::function<Complex(Complex)> single_F;   ///< global transverse coordinate when alpha = 1
  bool single_valued = true;                  ///< transverse coordinate closes up around 0

  /// theta-coordinate of the tube measured from the slice, in [0, 2 pi) on Q_k.
  double slice_angle(int k, Complex z) const;
  /// Transverse coordinate of branch k on the closure of Q_k.
  Complex F(int k, Complex z) const;
  double h_hat(int k, Complex z) const;
  Complex H(int k, Complex z) const;
  Complex rho(Complex z) const { return std::pow(z, n); }
  /// t + i a / period from the curve itself.
  Complex u_curve(Complex z) const;
};

BranchFamily make_branch_family(const FiniteEnergyCurve& curve, std::shared_ptr<const QuasiSectorDecomposition> sectors,
                                std::function<Complex(Complex)> G_hat, std::function<Complex(Complex)> G_density,
                                std::function<Complex(Complex)> single_F, bool single_valued);

/// Sphere curve with F = rho / z^n, G^ = -(1/2) ln(1 + |F|^2).
BranchFamily sphere_branch_family(const AlgebroidGerm& germ, const FiniteEnergyCurve& curve,
                                  const QuasiSectorOptions& opt = {});

struct EllipsoidExample {
  EllipsoidCurveParams params;
  FiniteEnergyCurve curve;
  BranchFamily family;
};

/// Builds the quotient-tube curve and its branches. Throws ConstructionError when
/// branches disagree on an interior arc.
EllipsoidExample build_ellipsoid_curve(const EllipsoidCurveParams& params, const QuasiSectorOptions& opt = {});

struct BranchAuditOptions {
  double r_lo = 0.02;
  double r_hi = 0.15;
  int n_r = 6;
  int per_sector = 6;
  double arc_tol = 1e-6;
  double c_tol = 1e-6;
  double u_tol = 1e-4;
  double handle_tol = 1e-6;
};

struct BranchAuditReport {
  double arc_matching = 0.0;      ///< (a) max |F_k - alpha F_{k+1}| on interior arcs
  double ratio_defect = 0.0;      ///< max |F_{k+1} / F_k - 1 / alpha| on interior arcs
  double closing_defect = 0.0;    ///< same as (a) across arc 0
  std::vector<double> c_estimated;
  double c_increment = 0.0;       ///< (b) max |c_{k+1} - c_k - 1| from the estimates
  double c_consistency = 0.0;     ///< (b) max |c_k - estimate|
  double c_spread = 0.0;          ///< variation of the estimate within a sector
  double u_defect = 0.0;          ///< (c)
  double h_defect = 0.0;          ///< (d) max |Im H_k - h| and jump of Im H across arcs
  double h_laplacian = 0.0;       ///< (d) discrete Laplacian of h, scaled by |z|^2
  double handle_defect = 0.0;     ///< d/dz-bar [G^ / 2 pi i] - G
  bool single_valued = true;
  bool passed = false;
  std::string witness;            ///< first failing check, with location
};

BranchAuditReport branch_audit(const BranchFamily& family, const BranchAuditOptions& opt = {});

struct NormalForm {
  int n = 1;
  Series f;          ///< f^n = rho e^{-H}
  Series f_inverse;
  Series w_prime;    ///< F o f^{-1}
};

/// Needs ord(rho) = n exactly and truncation order >= 2n.
NormalForm normal_form(const AlgebroidGerm& germ, const Series& F, const Series& H_hat);
NormalForm normal_form(const AlgebroidGerm& germ, const Series& F);

}  // namespace reeb
