#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "reeb/geometry.hpp"

namespace reeb {

/// Real 2-form on R^4, coefficients of e01, e02, e03, e12, e13, e23.
using TwoForm4 = Eigen::Matrix<double, 6, 1>;

TwoForm4 hodge_star(const TwoForm4& b);
/// (B + *B) / 2 and (B - *B) / 2.
std::pair<TwoForm4, TwoForm4> sd_decompose(const TwoForm4& b);
/// Skew matrix W with B(x, y) = x^T W y.
Mat4 form_matrix(const TwoForm4& b);
TwoForm4 form_from_matrix(const Mat4& w);
TwoForm4 wedge(const Vec4& u, const Vec4& w);

/// Coordinates in the orthonormal bases a_i (self-dual) and b_i (anti-self-dual):
/// a1 = (e01 + e23)/sqrt2, a2 = (e02 - e13)/sqrt2, a3 = (e03 + e12)/sqrt2,
/// b1 = (e01 - e23)/sqrt2, b2 = (e02 + e13)/sqrt2, b3 = (e03 - e12)/sqrt2.
Vec3 sd_coords(const TwoForm4& b);
Vec3 asd_coords(const TwoForm4& b);
TwoForm4 from_sd_coords(const Vec3& c);
TwoForm4 from_asd_coords(const Vec3& c);

/// Skew J = -W(2 sigma_plus); J^2 = -Id for |sigma_plus| = 1/sqrt2.
Mat4 osculating_J(const TwoForm4& sigma_plus);

/// Distance-decreasing map between the unit spheres of the ASD and SD coordinate spaces
/// (equivalently between the radius 1/sqrt2 spheres of forms).
struct CongruenceMap {
  std::function<Vec3(const Vec3&)> unit_map;
  double declared_L = 0.0;
  std::string description;

  /// sigma_minus (|.| = 1/sqrt2) -> sigma_plus (|.| = 1/sqrt2).
  TwoForm4 operator()(const TwoForm4& sigma_minus) const;
  /// Sup of |f(x) - f(y)| / |x - y| over random far and near pairs.
  double estimate_lipschitz(int pairs = 10000, std::uint64_t seed = 0) const;
};

/// f = constant, centre given in SD coordinates (normalized internally).
CongruenceMap constant_congruence(const Vec3& center = Vec3(1.0, 0.0, 0.0));

/// f(x) = normalize(c + eps (M x + quad * (x1 x2, x2 x3, x3 x1))), with eps tuned so the
/// estimated Lipschitz constant equals L.
CongruenceMap perturbed_congruence(const Vec3& center, const Mat3& M, const Vec3& quad, double L,
                                   std::uint64_t seed = 0);
/// Default smooth perturbation used by the test suites.
CongruenceMap default_perturbed_congruence(double L, std::uint64_t seed = 0);

struct FiberSolveOptions {
  double tol = 1e-14;
  int max_iter = 200;
  int restarts = 3;
  std::uint64_t seed = 0;
};

struct FiberSolution {
  TwoForm4 sigma_minus;
  TwoForm4 sigma_plus;
  int iterations = 0;
  double residual = 0.0;  ///< distance of v/|v| from the plane of sigma_plus + sigma_minus
};

FiberSolution fiber_solve(const CongruenceMap& f, const Vec4& v, const FiberSolveOptions& opt = {});

/// [J]_v, constant along rays.
Mat4 congruence_J(const CongruenceMap& f, const Vec4& v, const FiberSolveOptions& opt = {});

struct CongruenceContact {
  Mat4 J = Mat4::Zero();
  Vec4 lambda = Vec4::Zero();  ///< lambda(w) = -(w, J v)
  Vec4 X = Vec4::Zero();       ///< -J v
  Mat4 omega = Mat4::Zero();   ///< omega(x, y) = x^T omega y
};

CongruenceContact contact_from_congruence(const CongruenceMap& f, const Vec4& v, const FiberSolveOptions& opt = {});

/// The contact structure of a congruence as a chart on S^3.
class CongruenceChart : public ContactChart {
 public:
  explicit CongruenceChart(CongruenceMap f, FiberSolveOptions opt = {});
  ChartKind kind() const override { return ChartKind::Congruence; }
  std::string name() const override { return "congruence"; }
  int dim() const override { return 4; }
  double constraint(const Vector& v) const override;
  std::optional<Vector> constraint_gradient(const Vector& v) const override;
  Vector project_to_locus(const Vector& v) const override;
  Vector complex_structure(const Vector& v, const Vector& w) const override;
  const CongruenceMap& map() const { return f_; }

 protected:
  Vector raw_lambda(const Vector& v) const override;
  Vector raw_reeb(const Vector& v) const override;

 private:
  CongruenceMap f_;
  FiberSolveOptions opt_;
};

struct CongruenceAudit {
  /// (a) |d omega|, (b) |lambda(X) - 1|, (c) |i_X d lambda| on xi, (d) |omega(w, Jw) + |w|^2|,
  /// (e) |L_X J|, (f) |d/dr J|.
  std::array<double, 6> defects{};
  double primitive_residual = 0.0;  ///< max |omega - d(-J x / 2)| over samples where |d omega| < closed_tol
  int primitive_samples = 0;
  int samples = 0;
  double lipschitz = 0.0;
  int max_fiber_iterations = 0;
};

CongruenceAudit congruence_audit(const CongruenceMap& f, int n_samples = 200, std::uint64_t seed = 0,
                                 double closed_tol = 1e-6);

struct TransportResult {
  std::optional<CongruenceMap> transported;  ///< present for orientation-preserving orthogonal delta
  double residual = 0.0;                     ///< sup |delta^* lambda' - lambda| over samples
};

TransportResult o4_transport(const CongruenceMap& f, const Mat4& delta, int n_samples = 100, std::uint64_t seed = 0);

/// Random element of O(4) (Haar via QR); determinant sign is random.
Mat4 random_orthogonal(std::uint64_t seed);

/// Uniform point on S^3.
std::vector<Vec4> random_sphere_points(int count, std::uint64_t seed);

}  // namespace reeb
