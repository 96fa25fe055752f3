#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace reeb {

using Complex = std::complex<double>;
using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

// R^4 <-> C^2 via (x1, y1, x2, y2) <-> (w1, w2).
inline Vec4 from_c2(Complex w1, Complex w2) { return {w1.real(), w1.imag(), w2.real(), w2.imag()}; }
inline Complex w1_of(const Eigen::Ref<const Vector>& v) { return {v[0], v[1]}; }
inline Complex w2_of(const Eigen::Ref<const Vector>& v) { return {v[2], v[3]}; }

/// Angle reduced to [0, 2*pi).
inline double wrap_angle(double a) {
  double r = std::fmod(a, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r -= kTwoPi;
  return r;
}

/// Angle reduced to (-pi, pi].
inline double wrap_signed(double a) {
  double r = wrap_angle(a);
  return r > kPi ? r - kTwoPi : r;
}

// Error taxonomy. Every failure the toolkit reports is one of these.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DomainError : Error {
  using Error::Error;
};
struct NumericError : Error {
  using Error::Error;
};
struct IntegrationError : Error {
  using Error::Error;
};
struct TimeoutError : Error {
  using Error::Error;
};
struct DegeneracyError : Error {
  using Error::Error;
};
struct ConstructionError : Error {
  using Error::Error;
};
struct DecompositionError : Error {
  using Error::Error;
};
struct SolverError : Error {
  using Error::Error;
};
struct ProximityError : Error {
  using Error::Error;
};
struct ResolutionError : Error {
  using Error::Error;
};
struct UsageError : Error {
  using Error::Error;
};

}  // namespace reeb
