#include "reeb/dbar.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>

namespace reeb {

const GaussLegendre& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, GaussLegendre> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  if (n < 1) throw DomainError("gauss_legendre: order must be positive");

  GaussLegendre gl;
  gl.nodes.resize(n);
  gl.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    gl.nodes[i] = x;
    gl.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return cache.emplace(n, std::move(gl)).first->second;
}

// --- DiscGridFunction ------------------------------------------------------

DiscGridFunction::DiscGridFunction(double radius, int n_r, int n_theta)
    : radius_(radius), n_r_(n_r), n_theta_(n_theta) {
  if (!(radius > 0.0)) throw DomainError("grid: radius must be positive");
  if (n_r < 4 || n_theta < 4) throw DomainError("grid: need at least 4 nodes per direction");
  const GaussLegendre& gl = gauss_legendre(n_r);
  r_.resize(n_r);
  // Nodes in increasing radius.
  for (int i = 0; i < n_r; ++i) r_[i] = 0.5 * radius * (1.0 + gl.nodes[n_r - 1 - i]);
}

DiscGridFunction DiscGridFunction::from_evaluator(Evaluator f, double radius, int n_r, int n_theta, bool tabulate) {
  DiscGridFunction g(radius, n_r, n_theta);
  g.eval_ = std::move(f);
  if (tabulate) {
    g.values_.resize(static_cast<size_t>(n_r) * n_theta);
    for (int i = 0; i < n_r; ++i)
      for (int j = 0; j < n_theta; ++j) {
        const Complex v = g.eval_(g.node(i, j));
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw NumericError("grid: non-finite value");
        g.values_[static_cast<size_t>(i) * n_theta + j] = v;
      }
  }
  return g;
}

DiscGridFunction DiscGridFunction::from_values(double radius, int n_r, int n_theta, std::vector<Complex> values) {
  DiscGridFunction g(radius, n_r, n_theta);
  if (values.size() != static_cast<size_t>(n_r) * n_theta) throw DomainError("grid: value count mismatch");
  for (const Complex& v : values)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw NumericError("grid: non-finite value");
  g.values_ = std::move(values);
  return g;
}

Complex DiscGridFunction::value(int i, int j) const {
  if (!values_.empty()) return values_[static_cast<size_t>(i) * n_theta_ + j];
  return eval_(node(i, j));
}

Complex DiscGridFunction::operator()(Complex z) const {
  if (eval_) return eval_(z);
  return interpolate(z);
}

Complex DiscGridFunction::interpolate(Complex z) const {
  const double r = std::abs(z);
  const double th = wrap_angle(std::arg(z));
  // four nearest radial nodes
  int i0 = static_cast<int>(std::lower_bound(r_.begin(), r_.end(), r) - r_.begin()) - 2;
  i0 = std::clamp(i0, 0, n_r_ - 4);
  const double dth = kTwoPi / n_theta_;
  const int j1 = static_cast<int>(std::floor(th / dth));
  const double u = th / dth - j1;

  double wr[4], wt[4];
  for (int a = 0; a < 4; ++a) {
    wr[a] = 1.0;
    wt[a] = 1.0;
    for (int b = 0; b < 4; ++b) {
      if (a == b) continue;
      wr[a] *= (r - r_[i0 + b]) / (r_[i0 + a] - r_[i0 + b]);
      wt[a] *= (u - (b - 1)) / static_cast<double>(a - b);
    }
  }
  Complex acc{};
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      const int j = ((j1 + b - 1) % n_theta_ + n_theta_) % n_theta_;
      acc += wr[a] * wt[b] * value(i0 + a, j);
    }
  return acc;
}

double DiscGridFunction::sup_abs() const {
  double m = 0.0;
  for (int i = 0; i < n_r_; ++i)
    for (int j = 0; j < n_theta_; ++j) m = std::max(m, std::abs(value(i, j)));
  return m;
}

void DiscGridFunction::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out.precision(17);
  out << "r,theta,re,im\n";
  for (int i = 0; i < n_r_; ++i)
    for (int j = 0; j < n_theta_; ++j) {
      const Complex v = value(i, j);
      out << r_[i] << ',' << node_theta(j) << ',' << v.real() << ',' << v.imag() << '\n';
    }
}

// --- Transforms ------------------------------------------------------------

Complex cauchy_green(const DiscGridFunction& g, Complex z, const QuadratureConfig& cfg) {
  const double radius = g.radius();
  if (!(std::abs(z) < radius)) throw DomainError("cauchy_green: evaluation point outside the disc");
  if (cfg.n_r < 16 || cfg.n_theta < 16) throw DomainError("cauchy_green: need n_r, n_theta >= 16");
  const GaussLegendre& gl = gauss_legendre(cfg.n_r);
  const double gap = radius * radius - std::norm(z);
  Complex total{};
  for (int j = 0; j < cfg.n_theta; ++j) {
    const Complex e = std::polar(1.0, kTwoPi * j / cfg.n_theta);
    const double c = (std::conj(z) * e).real();
    const double rho_max = -c + std::sqrt(c * c + gap);
    Complex inner{};
    for (int i = 0; i < cfg.n_r; ++i) {
      const double rho = 0.5 * rho_max * (1.0 + gl.nodes[i]);
      inner += gl.weights[i] * g(z + rho * e);
    }
    total += std::conj(e) * (0.5 * rho_max) * inner;
  }
  return Complex(0.0, -2.0) * (kTwoPi / cfg.n_theta) * total;
}

DiscGridFunction dbar_solution(const DiscGridFunction& g, const QuadratureConfig& cfg, int probe_r, int probe_theta) {
  auto u = [g, cfg](Complex z) { return cauchy_green(g, z, cfg) / Complex(0.0, kTwoPi); };
  return DiscGridFunction::from_evaluator(u, g.radius(), probe_r, probe_theta, false);
}

double dbar_residual(const DiscGridFunction& u, const DiscGridFunction& f, double r0, double r1,
                     const DbarResidualOptions& opt) {
  const double h = opt.step;
  double sup = 0.0;
  int count = 0;
  for (int i = 0; i < u.n_r(); ++i) {
    const double r = u.node_r(i);
    if (r < r0 || r > r1) continue;
    for (int j = 0; j < u.n_theta(); ++j) {
      const Complex z = u.node(i, j);
      if (std::abs(z) + h >= u.radius()) continue;
      const Complex ux = (u(z + h) - u(z - h)) / (2.0 * h);
      const Complex uy = (u(z + Complex(0.0, h)) - u(z - Complex(0.0, h))) / (2.0 * h);
      const Complex dbar = 0.5 * (ux + kI * uy);
      sup = std::max(sup, std::abs(dbar - f(z)));
      ++count;
    }
  }
  if (count == 0) throw DomainError("dbar_residual: ring contains no grid nodes");
  return sup;
}

Complex g_potential(const DiscGridFunction& f12, Complex w, const QuadratureConfig& cfg) {
  return 0.5 * cauchy_green(f12, w, cfg) / Complex(0.0, kTwoPi);
}

BoundCertificate bound_certificate(const DiscGridFunction& g, const QuadratureConfig& cfg, const BoundOptions& opt) {
  BoundCertificate out;
  out.K = g.sup_abs();
  const Complex origin = cauchy_green(g, Complex{}, cfg);
  out.origin_value = std::abs(origin);
  const double r_hi = opt.r_max_fraction * g.radius();
  for (int i = 0; i < opt.probe_r; ++i) {
    const double r = opt.probe_r == 1 ? opt.r_min : opt.r_min + (r_hi - opt.r_min) * i / (opt.probe_r - 1);
    for (int j = 0; j < opt.probe_theta; ++j) {
      const Complex z = std::polar(r, kTwoPi * (j + 0.5) / opt.probe_theta);
      const Complex v = cauchy_green(g, z, cfg);
      out.sup_ratio = std::max(out.sup_ratio, std::abs(v - origin) / (kTwoPi * r));
      out.raw_sup_ratio = std::max(out.raw_sup_ratio, std::abs(v) / (kTwoPi * r));
    }
  }
  out.raw_exceeds_bound = out.raw_sup_ratio > out.K * (1.0 + opt.slack);
  return out;
}

}  // namespace reeb
