#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "reeb/geometry.hpp"
#include "reeb/series.hpp"

namespace reeb {

/// Plane-curve germ z -> (z^n, rho(z)).
struct AlgebroidGerm {
  int n = 1;
  Series rho;

  /// n >= 1 and ord(rho) >= n + 1 (or rho = 0).
  void validate_standard_form() const;
  /// Root-test estimate of the convergence radius of rho (infinite for polynomials).
  double convergence_radius() const;
};

struct CurveJet {
  Vector psi;
  double a = 0.0;
  Vector psi_eta;
  Vector psi_zeta;
  double a_eta = 0.0;
  double a_zeta = 0.0;
};

enum class Partials { Analytic, FiniteDifference };

/// (psi, a): D \ {0} -> M x R, with z = eta + i zeta.
struct FiniteEnergyCurve {
  ChartPtr chart;               ///< (psi, a) is pseudoholomorphic into chart x R
  int n = 1;                    ///< multiplicity of the germ
  double period = kTwoPi;       ///< minimal period of the asymptotic orbit in `chart`
  double radius = 1.0;          ///< evaluation disc
  double rotation = 1.0;        ///< q / p; the return map near the orbit is e^{2 pi i rotation}
  double fd_step = 1e-6;
  bool branched = false;        ///< ambient point depends on the branch of arg z
  std::string provenance;

  std::function<Vector(Complex)> psi;
  std::function<double(Complex)> a;
  std::function<CurveJet(Complex)> analytic;           ///< empty when only differences are available
  std::function<double(Complex)> theta;                ///< angular tube coordinate in [0, 2 pi)
  std::function<Vec4(Complex z, double arg_z)> ambient;  ///< point of C^2, arg z chosen by the caller

  CurveJet jet(Complex z, Partials mode) const;
  void check_point(Complex z) const;
};

/// psi = P / |P| with P = (z^n, rho), a = -(1/2) ln |P|^2, on the standard sphere.
FiniteEnergyCurve build_sphere_curve(const AlgebroidGerm& germ, double radius = 1.0);

/// Polar grid with radii linearly spaced in [r0, r1] and angles offset by `phase` (fractions of a cell).
std::vector<Complex> polar_grid(double r0, double r1, int n_r, int n_theta, double phase = 0.0);

struct CrReport {
  std::vector<Complex> points;
  std::vector<std::array<double, 3>> residuals;  ///< |pi psi_eta + J pi psi_zeta|, |lambda(psi_zeta) + a_eta|, |lambda(psi_eta) - a_zeta|
  double sup = 0.0;
  std::array<double, 3> sup_components{};
  int skipped = 0;
};

CrReport cr_residual(const FiniteEnergyCurve& curve, const std::vector<Complex>& grid, Partials mode,
                     const std::function<bool(Complex)>& excluded = nullptr);

struct ChargeResult {
  double value = 0.0;
  std::vector<double> radii;
  std::vector<double> per_radius;
  double extrapolation_spread = 0.0;  ///< |last two diagonal entries of the Richardson table|
  double integer_defect = 0.0;        ///< distance of value to the nearest integer
};

/// (1/period) * int lambda(d psi / d phi) over |z| = r, extrapolated to r -> 0.
ChargeResult charge(const FiniteEnergyCurve& curve, const std::vector<double>& radii = {}, int n_phi = 512,
                    Partials mode = Partials::Analytic);

/// Integral over r0 <= |z| <= r1 of (1/2)(d lambda(pi psi_eta, J pi psi_eta) + d lambda(pi psi_zeta, J pi psi_zeta)).
double dlambda_energy(const FiniteEnergyCurve& curve, double r0, double r1, int n_r = 48, int n_theta = 128,
                      Partials mode = Partials::Analytic);

struct AsymptoticReport {
  std::vector<double> r;           ///< cylinder coordinate -ln |z|
  std::vector<double> eps_sup;     ///< sup_phi |a - T r - a0|
  std::vector<double> delta_sup;   ///< sup_phi |theta - T phi - theta0| (mod 2 pi)
  double a0 = 0.0;
  double theta0 = 0.0;
  double T = 0.0;
  bool eps_monotone = true;
  bool delta_monotone = true;
};

/// Fits a0, theta0 at the largest r in r_list (increasing) and reports the deviations.
AsymptoticReport asymptotic_check(const FiniteEnergyCurve& curve, const std::vector<double>& r_list,
                                  int n_phi = 256, double noise_floor = 1e-12);

}  // namespace reeb
