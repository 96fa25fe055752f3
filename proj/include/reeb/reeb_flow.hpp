#pragma once

#include <array>
#include <functional>
#include <map>
#include <vector>

#include "reeb/geometry.hpp"

namespace reeb {

struct FlowConfig {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  double max_step = 0.1;
  double min_step = 1e-13;
  double t_max = 100.0;          ///< horizon for return-time searches
  double event_tol = 1e-10;      ///< crossing localization in t
  double transversality = 1e-8;  ///< minimal |dg(X)| at a crossing
};

/// Integrates the Reeb field of a chart (adaptive Dormand-Prince 5(4)),
/// projecting back onto the chart's locus after every accepted step.
/// Holds scratch state; use one instance per thread.
class ReebIntegrator {
 public:
  ReebIntegrator(const ContactChart& chart, FlowConfig cfg = {});

  Vector advance(const Vector& p, double t);

  /// Steps forward until `stop(t, x)` returns true or t exceeds t_end.
  /// Calls `on_step(t0, x0, t1, x1)` after each accepted step. Returns the last state.
  using StepHook = std::function<bool(double t0, const Vector& x0, double t1, const Vector& x1)>;
  Vector march(const Vector& p, double t_end, const StepHook& on_step, double* t_reached = nullptr);

  const ContactChart& chart() const { return chart_; }
  const FlowConfig& config() const { return cfg_; }
  long steps_taken() const { return steps_; }

 private:
  Vector march_signed(const Vector& p, double t_end, double direction, const StepHook& on_step,
                      double* t_reached);

  const ContactChart& chart_;
  FlowConfig cfg_;
  long steps_ = 0;
};

Vector flow(const ContactChart& chart, const Vector& p, double t, const FlowConfig& cfg = {});

/// Transverse slice through a periodic orbit. The functional vanishes on the
/// slice and increases along the flow; `coordinate` and `lift` identify the
/// slice with a disc in C.
struct Section {
  Vector base_point;
  double radius = 0.1;
  std::function<double(const Vector&)> functional;
  std::function<Vector(const Vector&)> functional_gradient;
  std::function<Complex(const Vector&)> coordinate;
  std::function<Vector(Complex)> lift;
};

/// Slice {arg w1 = theta0} of E(p, q) (or S^3 when p = q = 1) near the orbit {w2 = 0},
/// with disc coordinate w2.
Section axis_section(const Ellipsoid& chart, double theta0 = 0.0, double radius = 0.1);
Section axis_section(const StandardSphere& chart, double theta0 = 0.0, double radius = 0.1);

struct ReturnHit {
  Vector point;
  double time = 0.0;
};

ReturnHit first_return(const ContactChart& chart, const Section& section, const Vector& p,
                       const FlowConfig& cfg = {});

enum class ReturnClass { Identity, Rotation, Other };
std::string to_string(ReturnClass c);

struct ReturnMapReport {
  ReturnClass classification = ReturnClass::Other;
  double angle = 0.0;               ///< in [0, 2 pi)
  double radial_distortion = 0.0;   ///< max | |alpha(w)| / |w| - 1 |
  std::vector<double> residuals;    ///< |alpha(w) - e^{i angle} w| per sample
  Complex fixed_point{};            ///< section coordinate of alpha(base point)
  double mean_return_time = 0.0;
};

struct ReturnMapOptions {
  double ring_radius = 0.05;
  double identity_tol = 1e-4;
  double distortion_tol = 1e-3;
};

ReturnMapReport classify_return_map(const ContactChart& chart, const Section& section, int n_samples,
                                    const FlowConfig& cfg = {}, const ReturnMapOptions& opt = {});

struct OrbitData {
  Vector base_point;
  double period = 0.0;
  std::vector<Vector> samples;
};

/// The orbit {w2 = 0} of E(p, q): period 2 pi / p.
OrbitData axis_orbit(const Ellipsoid& chart, int n_samples = 64);
/// Closes an orbit numerically: returns |flow(p0, tau) - p0|.
double closure_defect(const ContactChart& chart, const OrbitData& orbit, const FlowConfig& cfg = {});

struct HolonomyResult {
  Matrix monodromy;                       ///< full d x d period map in ambient coordinates
  Mat3 full_block = Mat3::Zero();         ///< in the frame (X, s1, s2)
  Mat2 transverse = Mat2::Zero();         ///< linearized return map on the slice
  std::array<Complex, 2> multipliers{};
  double det = 0.0;
  double flow_multiplier_defect = 0.0;    ///< |A X - X|
};

HolonomyResult holonomy(const ContactChart& chart, const OrbitData& orbit, const Section& section,
                        const FlowConfig& cfg = {});

struct RecurrenceReport {
  double max_radius = 0.0;
  double max_radius_drift = 0.0;   ///< max over points of | |alpha^j w| - |w| |
  bool stays_inside = true;
  std::map<int, int> closure_histogram;  ///< minimal m with |alpha^m w - w| < tol (0: none)
  int points = 0;
};

RecurrenceReport recurrence_probe(const ContactChart& chart, const Section& section, int iterations,
                                  const std::vector<Complex>& grid, const FlowConfig& cfg = {},
                                  double closure_tol = 1e-6);

}  // namespace reeb
