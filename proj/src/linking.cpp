#include "reeb/linking.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include <Eigen/Dense>

#include "reeb/parallel.hpp"

namespace reeb {

double SpaceLoop::closure_gap() const {
  if (points.size() < 2) return std::numeric_limits<double>::infinity();
  return (points.front() - points.back()).norm();
}

double SpaceLoop::max_step() const {
  double m = 0.0;
  for (size_t i = 0; i + 1 < points.size(); ++i) m = std::max(m, (points[i + 1] - points[i]).norm());
  return m;
}

SpaceLoop SpaceLoop::reversed() const {
  SpaceLoop r;
  r.points.assign(points.rbegin(), points.rend());
  r.provenance = provenance + " (reversed)";
  return r;
}

void SpaceLoop::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out.precision(17);
  out << "x1,y1,x2,y2\n";
  for (const Vec4& p : points) out << p[0] << ',' << p[1] << ',' << p[2] << ',' << p[3] << '\n';
}

namespace {

SpaceLoop sample_loop(int m, const std::function<Vec4(double)>& at, std::string provenance) {
  SpaceLoop loop;
  loop.provenance = std::move(provenance);
  loop.points.reserve(m + 1);
  for (int j = 0; j < m; ++j) loop.points.push_back(at(kTwoPi * j / m));
  loop.points.push_back(loop.points.front());
  return loop;
}

}  // namespace

SpaceLoop boundary_knot(const AlgebroidGerm& germ, double eps, int m) {
  if (germ.n < 1) throw DomainError("boundary_knot: n must be positive");
  if (!(eps > 0.0)) throw DomainError("boundary_knot: eps must be positive");
  if (m < 64 * germ.n) throw DomainError("boundary_knot: need m >= 64 n samples");
  if (eps >= germ.convergence_radius()) throw DomainError("boundary_knot: eps outside the convergence disc");
  const Series rho = germ.rho;
  const int n = germ.n;
  SpaceLoop loop = sample_loop(
      m,
      [&](double phi) {
        const Complex z = std::polar(eps, phi);
        const Vec4 P = from_c2(std::pow(z, n), rho.eval(z));
        const double norm = P.norm();
        if (!(norm > 0.0)) throw DomainError("boundary_knot: Phi vanishes on the circle");
        return Vec4(P / norm);
      },
      "germ n=" + std::to_string(n));
  if (loop.max_step() >= 0.1) throw DomainError("boundary_knot: consecutive samples too far apart, increase m");
  return loop;
}

SpaceLoop axis_circle_w1_zero(int m) {
  return sample_loop(m, [](double t) { return from_c2(0.0, std::polar(1.0, t)); }, "{w1 = 0}");
}

SpaceLoop axis_circle_w2_zero(int m) {
  return sample_loop(m, [](double t) { return from_c2(std::polar(1.0, t), 0.0); }, "{w2 = 0}");
}

namespace {

double distance_to(const SpaceLoop& loop, const Vec4& x) {
  double d = std::numeric_limits<double>::infinity();
  for (const Vec4& p : loop.points) d = std::min(d, (p - x).norm());
  return d;
}

// Orthonormal basis of pole^perp with det[-pole, b1, b2, b3] > 0.
Eigen::Matrix<double, 4, 3> tangent_frame(const Vec4& pole) {
  Eigen::Matrix<double, 4, 1> n = pole;
  Eigen::HouseholderQR<Eigen::Matrix<double, 4, 1>> qr(n);
  Mat4 Q = qr.householderQ();
  Eigen::Matrix<double, 4, 3> b = Q.rightCols(3);
  Mat4 M;
  M.col(0) = -pole;
  M.rightCols(3) = b;
  if (M.determinant() < 0.0) b.col(0) = -b.col(0);
  return b;
}

std::vector<Vec3> project(const SpaceLoop& loop, const Vec4& pole, const Eigen::Matrix<double, 4, 3>& b) {
  std::vector<Vec3> out;
  out.reserve(loop.points.size());
  for (const Vec4& x : loop.points) {
    const double den = 1.0 - x.dot(pole);
    out.emplace_back(b.transpose() * x / den);
  }
  return out;
}

}  // namespace

Vec4 choose_pole(const SpaceLoop& a, const SpaceLoop& b) {
  std::mt19937_64 rng(12345);
  std::normal_distribution<double> g(0.0, 1.0);
  Vec4 best = Vec4::Zero();
  double best_d = -1.0;
  for (int i = 0; i < 600; ++i) {
    Vec4 x(g(rng), g(rng), g(rng), g(rng));
    x.normalize();
    const double d = std::min(distance_to(a, x), distance_to(b, x));
    if (d > best_d) {
      best_d = d;
      best = x;
    }
  }
  return best;
}

LinkingValue gauss_linking(const SpaceLoop& a, const SpaceLoop& b, std::optional<Vec4> pole_in) {
  if (a.points.size() < 4 || b.points.size() < 4) throw DomainError("gauss_linking: loops need at least 3 segments");
  if (a.closure_gap() > 1e-9 || b.closure_gap() > 1e-9) throw DomainError("gauss_linking: loops must be closed");

  double sep = std::numeric_limits<double>::infinity();
  for (const Vec4& p : a.points) sep = std::min(sep, distance_to(b, p));
  if (sep <= 1e-3) throw ProximityError("gauss_linking: loops are closer than 1e-3");

  const Vec4 pole = pole_in ? pole_in->normalized() : choose_pole(a, b);
  const double clearance = std::min(distance_to(a, pole), distance_to(b, pole));
  if (clearance <= 0.2) throw ProximityError("gauss_linking: pole within 0.2 of a loop");

  const auto frame = tangent_frame(pole);
  const std::vector<Vec3> pa = project(a, pole, frame), pb = project(b, pole, frame);
  const size_t na = pa.size() - 1, nb = pb.size() - 1;

  std::vector<double> rows(na, 0.0);
  parallel_for(na, [&](size_t i) {
    const Vec3 da = pa[i + 1] - pa[i];
    const Vec3 ma = 0.5 * (pa[i + 1] + pa[i]);
    double acc = 0.0;
    for (size_t j = 0; j < nb; ++j) {
      const Vec3 db = pb[j + 1] - pb[j];
      const Vec3 r = ma - 0.5 * (pb[j + 1] + pb[j]);
      const double d = r.norm();
      acc += r.dot(da.cross(db)) / (d * d * d);
    }
    rows[i] = acc;
  });
  double raw = 0.0;
  for (double v : rows) raw += v;
  raw /= 4.0 * kPi;

  LinkingValue out;
  out.raw = raw;
  out.value = static_cast<int>(std::lround(raw));
  out.pole = pole;
  if (std::abs(raw - out.value) >= 0.1) {
    std::ostringstream msg;
    msg << "gauss_linking: raw value " << raw << " is not near an integer, increase m";
    throw ResolutionError(msg.str());
  }
  return out;
}

RefinedLinking linking_with_refinement(const std::function<SpaceLoop(int)>& a, const std::function<SpaceLoop(int)>& b,
                                       int m0, int m_max, std::optional<Vec4> pole) {
  for (int m = m0;; m *= 2) {
    try {
      RefinedLinking r;
      r.result = gauss_linking(a(m), b(m), pole);
      r.m = m;
      if (std::abs(r.result.raw - r.result.value) < 0.05) return r;
    } catch (const ResolutionError&) {
      if (2 * m > m_max) throw;
    }
    if (2 * m > m_max) throw ResolutionError("linking: rounding residual stays above 0.05");
  }
}

std::pair<int, int> winding_profile(const SpaceLoop& loop) {
  if (loop.points.size() < 3) throw DomainError("winding_profile: loop too short");
  double turns[2] = {0.0, 0.0};
  for (size_t i = 0; i < loop.points.size(); ++i) {
    const Complex w1 = w1_of(loop.points[i]), w2 = w2_of(loop.points[i]);
    if (std::abs(w1) <= 1e-3 || std::abs(w2) <= 1e-3) throw DegeneracyError("winding_profile: loop meets an axis circle");
    if (i == 0) continue;
    const Vec4& prev = loop.points[i - 1];
    turns[0] += wrap_signed(std::arg(w1) - std::arg(w1_of(prev)));
    turns[1] += wrap_signed(std::arg(w2) - std::arg(w2_of(prev)));
  }
  int out[2];
  for (int c = 0; c < 2; ++c) {
    const double t = turns[c] / kTwoPi;
    out[c] = static_cast<int>(std::lround(t));
    if (std::abs(t - out[c]) > 1e-6) throw ResolutionError("winding_profile: loop does not close");
  }
  return {out[0], out[1]};
}

}  // namespace reeb
