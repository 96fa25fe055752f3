#include "reeb/congruence.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "reeb/parallel.hpp"

namespace reeb {

namespace {

constexpr int kPairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
const double kRootHalf = std::sqrt(0.5);

TwoForm4 basis_form(int which, bool self_dual) {
  TwoForm4 b = TwoForm4::Zero();
  const double s = self_dual ? 1.0 : -1.0;
  switch (which) {
    case 0: b[0] = 1.0; b[5] = s; break;
    case 1: b[1] = 1.0; b[4] = -s; break;
    default: b[2] = 1.0; b[3] = s; break;
  }
  return b * kRootHalf;
}

Mat4 raise(const TwoForm4& sigma) {
  if (std::abs(sigma.norm() - kRootHalf) > 1e-10) throw DomainError("osculating_J: form must have norm 1/sqrt2");
  return -form_matrix(2.0 * sigma);
}

Vec3 unit(const Vec3& x) {
  const double n = x.norm();
  if (!(n > 0.0)) throw DomainError("congruence: zero direction");
  return x / n;
}

}  // namespace

TwoForm4 hodge_star(const TwoForm4& b) {
  TwoForm4 s;
  s << b[5], -b[4], b[3], b[2], -b[1], b[0];
  return s;
}

std::pair<TwoForm4, TwoForm4> sd_decompose(const TwoForm4& b) {
  const TwoForm4 s = hodge_star(b);
  return {0.5 * (b + s), 0.5 * (b - s)};
}

Mat4 form_matrix(const TwoForm4& b) {
  Mat4 w = Mat4::Zero();
  for (int p = 0; p < 6; ++p) {
    w(kPairs[p][0], kPairs[p][1]) = b[p];
    w(kPairs[p][1], kPairs[p][0]) = -b[p];
  }
  return w;
}

TwoForm4 form_from_matrix(const Mat4& w) {
  TwoForm4 b;
  for (int p = 0; p < 6; ++p) b[p] = 0.5 * (w(kPairs[p][0], kPairs[p][1]) - w(kPairs[p][1], kPairs[p][0]));
  return b;
}

TwoForm4 wedge(const Vec4& u, const Vec4& w) {
  TwoForm4 b;
  for (int p = 0; p < 6; ++p) {
    const int i = kPairs[p][0], j = kPairs[p][1];
    b[p] = u[i] * w[j] - u[j] * w[i];
  }
  return b;
}

Vec3 sd_coords(const TwoForm4& b) {
  return {b.dot(basis_form(0, true)), b.dot(basis_form(1, true)), b.dot(basis_form(2, true))};
}
Vec3 asd_coords(const TwoForm4& b) {
  return {b.dot(basis_form(0, false)), b.dot(basis_form(1, false)), b.dot(basis_form(2, false))};
}
TwoForm4 from_sd_coords(const Vec3& c) {
  return c[0] * basis_form(0, true) + c[1] * basis_form(1, true) + c[2] * basis_form(2, true);
}
TwoForm4 from_asd_coords(const Vec3& c) {
  return c[0] * basis_form(0, false) + c[1] * basis_form(1, false) + c[2] * basis_form(2, false);
}

Mat4 osculating_J(const TwoForm4& sigma_plus) { return raise(sigma_plus); }

// --- Congruence maps -----------------------------------------------------------

TwoForm4 CongruenceMap::operator()(const TwoForm4& sigma_minus) const {
  const Vec3 x = unit(asd_coords(sigma_minus));
  return from_sd_coords(unit(unit_map(x))) * kRootHalf;
}

double CongruenceMap::estimate_lipschitz(int pairs, std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  auto rand_unit = [&] { return unit(Vec3(g(rng), g(rng), g(rng))); };
  double L = 0.0;
  for (int i = 0; i < pairs; ++i) {
    const Vec3 x = rand_unit();
    Vec3 y = rand_unit();
    if (i % 2 == 1) y = unit(x + 1e-3 * y);
    const double d = (x - y).norm();
    if (d < 1e-12) continue;
    L = std::max(L, (unit(unit_map(x)) - unit(unit_map(y))).norm() / d);
  }
  return L;
}

CongruenceMap constant_congruence(const Vec3& center) {
  const Vec3 c = unit(center);
  CongruenceMap f;
  f.unit_map = [c](const Vec3&) { return c; };
  f.declared_L = 0.0;
  f.description = "constant";
  return f;
}

CongruenceMap perturbed_congruence(const Vec3& center, const Mat3& M, const Vec3& quad, double L, std::uint64_t seed) {
  if (!(L >= 0.0) || !(L < 1.0)) throw DomainError("perturbed_congruence: L must lie in [0, 1)");
  const Vec3 c = unit(center);
  auto make = [c, M, quad](double eps) {
    return [c, M, quad, eps](const Vec3& x) {
      const Vec3 nl(quad[0] * x[0] * x[1], quad[1] * x[1] * x[2], quad[2] * x[2] * x[0]);
      return unit(c + eps * (M * x + nl));
    };
  };
  CongruenceMap f;
  f.description = "perturbed";
  if (L == 0.0) return constant_congruence(c);

  auto lip = [&](double eps) {
    CongruenceMap t;
    t.unit_map = make(eps);
    return t.estimate_lipschitz(4000, seed);
  };
  double lo = 0.0, hi = 0.05;
  for (int i = 0; lip(hi) < L; ++i) {
    if (i > 40) throw DomainError("perturbed_congruence: cannot reach the requested Lipschitz constant");
    lo = hi;
    hi *= 2.0;
  }
  for (int i = 0; i < 50; ++i) {
    const double mid = 0.5 * (lo + hi);
    (lip(mid) < L ? lo : hi) = mid;
  }
  f.unit_map = make(0.5 * (lo + hi));
  f.declared_L = L;
  const double est = f.estimate_lipschitz(10000, seed + 1);
  if (!(est < 1.0)) throw DomainError("perturbed_congruence: map is not distance-decreasing");
  return f;
}

CongruenceMap default_perturbed_congruence(double L, std::uint64_t seed) {
  Mat3 M;
  M << 0.3, -0.5, 0.2, 0.7, 0.1, -0.4, -0.2, 0.6, 0.5;
  return perturbed_congruence(Vec3(1.0, 0.0, 0.0), M, Vec3(0.4, -0.3, 0.5), L, seed);
}

// --- Fibers ----------------------------------------------------------------------

namespace {

double plane_residual(const TwoForm4& plane, const Vec4& v) {
  const Mat4 W = form_matrix(plane);
  return (v + W * (W * v)).norm();
}

TwoForm4 normalized_asd(const TwoForm4& b) {
  const TwoForm4 m = sd_decompose(b).second;
  return m * (kRootHalf / m.norm());
}

}  // namespace

FiberSolution fiber_solve(const CongruenceMap& f, const Vec4& v_in, const FiberSolveOptions& opt) {
  const double nv = v_in.norm();
  if (!(nv > 0.0)) throw DomainError("fiber_solve: v must be nonzero");
  const Vec4 v = v_in / nv;

  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> g(0.0, 1.0);
  FiberSolution sol;
  double last_change = 0.0;
  for (int attempt = 0; attempt <= opt.restarts; ++attempt) {
    TwoForm4 sm;
    if (attempt == 0) {
      const Mat4 J = raise(f(basis_form(0, false)));
      sm = normalized_asd(wedge(v, J * v));
    } else {
      sm = from_asd_coords(unit(Vec3(g(rng), g(rng), g(rng)))) * kRootHalf;
    }
    // Plain iteration first; restarts are damped.
    const double damping = attempt == 0 ? 1.0 : 0.5;
    for (int it = 1; it <= opt.max_iter; ++it) {
      const Mat4 J = raise(f(sm));
      const TwoForm4 target = normalized_asd(wedge(v, J * v));
      TwoForm4 next = sm + damping * (target - sm);
      next *= kRootHalf / next.norm();
      last_change = (next - sm).norm();
      sm = next;
      if (last_change <= opt.tol) {
        sol.sigma_minus = sm;
        sol.sigma_plus = f(sm);
        sol.iterations = it;
        sol.residual = plane_residual(sol.sigma_plus + sol.sigma_minus, v);
        return sol;
      }
    }
  }
  throw SolverError("fiber_solve: no convergence, last change " + std::to_string(last_change));
}

Mat4 congruence_J(const CongruenceMap& f, const Vec4& v, const FiberSolveOptions& opt) {
  return raise(fiber_solve(f, v, opt).sigma_plus);
}

CongruenceContact contact_from_congruence(const CongruenceMap& f, const Vec4& v, const FiberSolveOptions& opt) {
  if (std::abs(v.norm() - 1.0) > 1e-10) throw DomainError("contact_from_congruence: v must be a unit vector");
  CongruenceContact c;
  c.J = congruence_J(f, v, opt);
  c.X = -c.J * v;
  c.lambda = -c.J * v;
  c.omega = c.J;
  return c;
}

// --- Chart -----------------------------------------------------------------------

CongruenceChart::CongruenceChart(CongruenceMap f, FiberSolveOptions opt) : f_(std::move(f)), opt_(opt) {
  calibrate_sign(Vec4(1.0, 0.0, 0.0, 0.0));
}

double CongruenceChart::constraint(const Vector& v) const { return v.squaredNorm() - 1.0; }
std::optional<Vector> CongruenceChart::constraint_gradient(const Vector& v) const { return Vector(2.0 * v); }
Vector CongruenceChart::project_to_locus(const Vector& v) const { return v / v.norm(); }
Vector CongruenceChart::complex_structure(const Vector& v, const Vector& w) const {
  return congruence_J(f_, Vec4(v), opt_) * Vec4(w);
}
Vector CongruenceChart::raw_lambda(const Vector& v) const { return -congruence_J(f_, Vec4(v), opt_) * Vec4(v); }
Vector CongruenceChart::raw_reeb(const Vector& v) const { return -congruence_J(f_, Vec4(v), opt_) * Vec4(v); }

// --- Audit -----------------------------------------------------------------------

std::vector<Vec4> random_sphere_points(int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<Vec4> pts;
  pts.reserve(count);
  while (static_cast<int>(pts.size()) < count) {
    const Vec4 x(g(rng), g(rng), g(rng), g(rng));
    const double n = x.norm();
    if (n > 1e-8) pts.push_back(x / n);
  }
  return pts;
}

Mat4 random_orthogonal(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Mat4 a;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) a(i, j) = g(rng);
  Eigen::HouseholderQR<Mat4> qr(a);
  Mat4 q = qr.householderQ();
  const Mat4 r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < 4; ++i)
    if (r(i, i) < 0.0) q.col(i) = -q.col(i);
  return q;
}

CongruenceAudit congruence_audit(const CongruenceMap& f, int n_samples, std::uint64_t seed, double closed_tol) {
  if (n_samples < 100) throw DomainError("congruence_audit: need at least 100 samples");
  const std::vector<Vec4> pts = random_sphere_points(n_samples, seed);
  struct Local {
    std::array<double, 6> d{};
    double primitive = 0.0;
    bool closed = false;
    int iters = 0;
  };
  std::vector<Local> loc(pts.size());
  FiberSolveOptions fo;
  fo.seed = seed;

  parallel_for(pts.size(), [&](size_t s) {
    const Vec4 v = pts[s];
    Local& L = loc[s];
    const FiberSolution sol = fiber_solve(f, v, fo);
    L.iters = sol.iterations;
    const Mat4 J = raise(sol.sigma_plus);
    const double h = 1e-5;
    std::array<Mat4, 4> dJ;
    for (int i = 0; i < 4; ++i) {
      const Vec4 e = Vec4::Unit(i) * h;
      dJ[i] = (congruence_J(f, v + e, fo) - congruence_J(f, v - e, fo)) / (2.0 * h);
    }
    // (a) d omega with omega = J as a bilinear form
    double da = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        for (int k = j + 1; k < 4; ++k)
          da = std::max(da, std::abs(dJ[i](j, k) + dJ[j](k, i) + dJ[k](i, j)));
    L.d[0] = da;

    // (b)
    const Vec4 X = -J * v;
    const Vec4 lam = -J * v;
    L.d[1] = std::abs(lam.dot(X) - 1.0);

    // d lambda from the Jacobian of c(x) = -J(x) x
    Mat4 G;
    for (int i = 0; i < 4; ++i) G.col(i) = -dJ[i] * v - J.col(i);
    const Mat4 D = G.transpose() - G;

    // xi = complement of v and J v
    Eigen::Matrix<double, 4, 2> nrm;
    nrm.col(0) = v;
    nrm.col(1) = J * v;
    Eigen::HouseholderQR<Eigen::Matrix<double, 4, 2>> qr(nrm);
    const Mat4 Q = qr.householderQ();
    const Vec4 w1 = Q.col(2), w2 = Q.col(3);

    // (c)
    L.d[2] = std::max(std::abs(X.dot(D * w1)), std::abs(X.dot(D * w2)));
    // (d) on a mixed xi vector
    const Vec4 w = 0.6 * w1 + 0.8 * w2;
    L.d[3] = std::abs(w.dot(J * (J * w)) + w.squaredNorm());
    // (e) L_X J = grad_X J - [DX, J], DX = G
    Mat4 gradX = Mat4::Zero();
    for (int i = 0; i < 4; ++i) gradX += X[i] * dJ[i];
    L.d[4] = (gradX - (G * J - J * G)).cwiseAbs().maxCoeff();
    // (f) radial constancy
    const double hr = 1e-3;
    L.d[5] = (congruence_J(f, (1.0 + hr) * v, fo) - J).cwiseAbs().maxCoeff() / hr;

    // omega = d(-J x / 2) when closed
    L.closed = da < closed_tol;
    L.primitive = (J - 0.5 * D).cwiseAbs().maxCoeff();
  });

  CongruenceAudit out;
  out.samples = n_samples;
  for (const Local& L : loc) {
    for (int i = 0; i < 6; ++i) out.defects[i] = std::max(out.defects[i], L.d[i]);
    out.max_fiber_iterations = std::max(out.max_fiber_iterations, L.iters);
    if (L.closed) {
      ++out.primitive_samples;
      out.primitive_residual = std::max(out.primitive_residual, L.primitive);
    }
  }
  out.lipschitz = f.estimate_lipschitz(10000, seed);
  return out;
}

// --- Transport ---------------------------------------------------------------------

TransportResult o4_transport(const CongruenceMap& f, const Mat4& delta, int n_samples, std::uint64_t seed) {
  const double det = delta.determinant();
  if (!(std::abs(det) > 1e-12)) throw DomainError("o4_transport: delta is singular");
  TransportResult out;
  const std::vector<Vec4> pts = random_sphere_points(n_samples, seed);
  std::vector<double> res(pts.size());
  parallel_for(pts.size(), [&](size_t s) {
    const Vec4 v = pts[s];
    const Mat4 J = congruence_J(f, v);
    const Vec4 a = delta * v, b = delta * (J * v);
    TwoForm4 plane = wedge(a, b);
    plane /= plane.norm();
    const auto [sp, sm] = sd_decompose(plane);
    const TwoForm4 part = det > 0.0 ? sp : sm;
    const Mat4 Jp = raise(part * (kRootHalf / part.norm()));
    const Vec4 pulled = delta.transpose() * (-Jp * a);
    res[s] = (pulled - (-J * v)).norm();
  });
  for (double r : res) out.residual = std::max(out.residual, r);

  const bool orthogonal = (delta.transpose() * delta - Mat4::Identity()).cwiseAbs().maxCoeff() < 1e-10;
  if (orthogonal && det > 0.0) {
    Mat3 Rp, Rm;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const TwoForm4 ap = form_from_matrix(delta * form_matrix(basis_form(j, true)) * delta.transpose());
        const TwoForm4 am = form_from_matrix(delta * form_matrix(basis_form(j, false)) * delta.transpose());
        Rp(i, j) = basis_form(i, true).dot(ap);
        Rm(i, j) = basis_form(i, false).dot(am);
      }
    CongruenceMap g;
    auto inner = f.unit_map;
    g.unit_map = [inner, Rp, Rm](const Vec3& y) { return Vec3(Rp * inner(Rm.transpose() * y)); };
    g.declared_L = f.declared_L;
    g.description = f.description + " (transported)";
    out.transported = g;
  }
  return out;
}

}  // namespace reeb
