#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "reeb/curves.hpp"

namespace reeb {

/// Closed polyline on S^3; the last sample repeats the first.
struct SpaceLoop {
  std::vector<Vec4> points;
  std::string provenance;

  double closure_gap() const;
  double max_step() const;
  SpaceLoop reversed() const;
  void write_csv(const std::string& path) const;
};

/// Phi(eps e^{i phi}) / |Phi| for phi in [0, 2 pi], Phi = (z^n, rho).
SpaceLoop boundary_knot(const AlgebroidGerm& germ, double eps, int m);
/// {w1 = 0} and {w2 = 0} on S^3, oriented by the complex structure.
SpaceLoop axis_circle_w1_zero(int m);
SpaceLoop axis_circle_w2_zero(int m);

/// Point of S^3 far from both loops (coarse search, deterministic).
Vec4 choose_pole(const SpaceLoop& a, const SpaceLoop& b);

struct LinkingValue {
  int value = 0;
  double raw = 0.0;
  Vec4 pole = Vec4::Zero();
};

/// Gauss double sum after stereographic projection from `pole` (chosen automatically when empty).
/// Throws ProximityError when loops or pole are too close and ResolutionError when |raw - round| >= 0.1.
LinkingValue gauss_linking(const SpaceLoop& a, const SpaceLoop& b, std::optional<Vec4> pole = std::nullopt);

struct RefinedLinking {
  LinkingValue result;
  int m = 0;
};

/// Resamples both loops with m, 2m, ... until the rounding residual drops below 0.05.
RefinedLinking linking_with_refinement(const std::function<SpaceLoop(int)>& a, const std::function<SpaceLoop(int)>& b,
                                       int m0 = 512, int m_max = 16384, std::optional<Vec4> pole = std::nullopt);

/// Winding numbers of w1 and w2 around 0 along the loop.
std::pair<int, int> winding_profile(const SpaceLoop& loop);

}  // namespace reeb
