#include "reeb/branch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/tools/roots.hpp>

namespace reeb {

// --- Quasi-sectors -----------------------------------------------------------

double QuasiSectorDecomposition::arc_angle(int k, double r) const {
  const auto& a = arc_angles.at(static_cast<size_t>(k));
  if (radii.size() == 1 || r >= radii.front()) return a.front();
  if (r <= radii.back()) return a.back();
  // radii decrease
  size_t i = 0;
  while (i + 1 < radii.size() && radii[i + 1] > r) ++i;
  const double s = (radii[i] - r) / (radii[i] - radii[i + 1]);
  return a[i] + s * (a[i + 1] - a[i]);
}

int QuasiSectorDecomposition::sector_of(Complex z) const {
  const double r = std::abs(z);
  const double arg = std::arg(z);
  for (int k = 0; k < n; ++k) {
    const double ak = arc_angle(k, r);
    const double ak1 = arc_angle((k + 1) % n, r);
    const double gap = n == 1 ? kTwoPi : wrap_angle(ak - ak1);
    if (wrap_angle(ak - arg) < gap) return k;
  }
  return n - 1;
}

double QuasiSectorDecomposition::clockwise_arg(Complex z, int k) const {
  const double ak = arc_angle(k, std::abs(z));
  // With one sector the window is the whole turn, so only rounding slack is left.
  const double slack = n == 1 ? 1e-9 : kPi / n;
  const double d = wrap_angle(ak - std::arg(z) + slack) - slack;
  return ak - d;
}

double QuasiSectorDecomposition::arc_distance(Complex z) const {
  const double r = std::abs(z);
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < n; ++k) best = std::min(best, std::abs(wrap_signed(std::arg(z) - arc_angle(k, r))));
  return best;
}

double QuasiSectorDecomposition::max_ray_deviation(double r_upto) const {
  double m = 0.0;
  for (int k = 0; k < n; ++k)
    for (size_t i = 0; i < radii.size(); ++i)
      if (radii[i] <= r_upto) m = std::max(m, std::abs(arc_angles[k][i] - ray(k)));
  return m;
}

namespace {

std::vector<double> circle_roots(const FiniteEnergyCurve& curve, double theta0, double r, int samples) {
  auto g = [&](double phi) { return wrap_signed(curve.theta(std::polar(r, phi)) - theta0); };
  std::vector<double> vals(samples + 1);
  for (int j = 0; j < samples; ++j) vals[j] = g(kTwoPi * j / samples);
  vals[samples] = vals[0];
  std::vector<double> roots;
  for (int j = 0; j < samples; ++j) {
    const double g0 = vals[j], g1 = vals[j + 1];
    if (!(g0 < 0.0 && g1 >= 0.0) || g1 - g0 >= kPi) continue;
    const double a = kTwoPi * j / samples, b = kTwoPi * (j + 1) / samples;
    if (g1 == 0.0) {
      roots.push_back(b);
      continue;
    }
    // Work with the continuous branch on [a, b].
    auto gc = [&](double phi) {
      const double v = g(phi);
      return v - g0 > kPi ? v - kTwoPi : v;
    };
    std::uintmax_t iters = 100;
    auto [lo, hi] = boost::math::tools::toms748_solve(gc, a, b, g0, g1, boost::math::tools::eps_tolerance<double>(50),
                                                      iters);
    roots.push_back(0.5 * (lo + hi));
  }
  return roots;
}

}  // namespace

QuasiSectorDecomposition quasi_sector_decompose(const FiniteEnergyCurve& curve, double theta0,
                                                const QuasiSectorOptions& opt) {
  if (!curve.theta) throw DomainError("quasi_sector_decompose: curve has no angular coordinate");
  if (!(opt.r_min > 0.0) || !(opt.r_max > opt.r_min) || opt.n_circles < 2)
    throw DomainError("quasi_sector_decompose: bad radius range");
  if (!(opt.r_max < curve.radius)) throw DomainError("quasi_sector_decompose: r_max outside the curve domain");

  QuasiSectorDecomposition dec;
  dec.theta0 = theta0;
  dec.n = curve.n;
  const int n = curve.n;
  dec.arc_angles.assign(n, {});
  const int samples = std::max(16, opt.samples_per_branch * n);

  for (int i = 0; i < opt.n_circles; ++i) {
    const double r = opt.r_max + (opt.r_min - opt.r_max) * i / (opt.n_circles - 1);
    const std::vector<double> roots = circle_roots(curve, theta0, r, samples);
    if (static_cast<int>(roots.size()) != n) {
      std::ostringstream msg;
      msg << "quasi_sector_decompose: found " << roots.size() << " roots on |z| = " << r << ", expected " << n;
      throw DecompositionError(msg.str());
    }
    std::vector<char> taken(n, 0);
    for (int k = 0; k < n; ++k) {
      // Reference angle: the ray on the first circle, the previous arc point afterwards.
      const double ref = i == 0 ? dec.ray(k) : dec.arc_angles[k].back();
      int best = -1;
      double best_d = std::numeric_limits<double>::infinity();
      for (int j = 0; j < n; ++j) {
        if (taken[j]) continue;
        const double d = std::abs(wrap_signed(roots[j] - ref));
        if (d < best_d) {
          best_d = d;
          best = j;
        }
      }
      taken[best] = 1;
      const double angle = ref + wrap_signed(roots[best] - ref);
      if (i > 0) {
        const Complex prev = std::polar(dec.radii.back(), dec.arc_angles[k].back());
        const double step = dec.radii.back() - r;
        dec.max_step_ratio = std::max(dec.max_step_ratio, std::abs(std::polar(r, angle) - prev) / step);
      }
      dec.arc_angles[k].push_back(angle);
    }
    dec.radii.push_back(r);
  }
  return dec;
}

// --- Branch family -------------------------------------------------------------

double BranchFamily::slice_angle(int k, Complex z) const {
  const double A = sectors->clockwise_arg(z, k);
  return n * A - sectors->theta0 + kTwoPi * (k + 1);
}

Complex BranchFamily::F(int k, Complex z) const {
  const double A = sectors->clockwise_arg(z, k);
  const Vec4 v = curve.ambient(z, A);
  return w2_of(v) * std::polar(1.0, -rotation * slice_angle(k, z));
}

double BranchFamily::h_hat(int k, Complex z) const {
  const double A = sectors->clockwise_arg(z, k);
  return (n * A - sectors->theta0) / kTwoPi + 1.0;
}

Complex BranchFamily::H(int k, Complex z) const {
  const double A = sectors->clockwise_arg(z, k);
  const Complex log_rho(n * std::log(std::abs(z)), n * A - sectors->theta0);
  return log_rho / Complex(0.0, kTwoPi) + 1.0 + c.at(static_cast<size_t>(k));
}

Complex BranchFamily::u_curve(Complex z) const {
  const double t = wrap_angle(curve.theta(z) - sectors->theta0) / kTwoPi;
  return {t, curve.a(z) / curve.period};
}

BranchFamily make_branch_family(const FiniteEnergyCurve& curve, std::shared_ptr<const QuasiSectorDecomposition> sectors,
                                std::function<Complex(Complex)> G_hat, std::function<Complex(Complex)> G_density,
                                std::function<Complex(Complex)> single_F, bool single_valued) {
  if (!sectors || sectors->n != curve.n) throw DomainError("branch family: decomposition does not match the curve");
  BranchFamily fam;
  fam.curve = curve;
  fam.sectors = std::move(sectors);
  fam.n = curve.n;
  fam.rotation = curve.rotation;
  fam.alpha = std::polar(1.0, kTwoPi * curve.rotation);
  fam.c.resize(curve.n);
  for (int k = 0; k < curve.n; ++k) fam.c[k] = k;
  fam.G_hat = std::move(G_hat);
  fam.G_density = std::move(G_density);
  fam.single_F = std::move(single_F);
  fam.single_valued = single_valued;
  return fam;
}

BranchFamily sphere_branch_family(const AlgebroidGerm& germ, const FiniteEnergyCurve& curve,
                                  const QuasiSectorOptions& opt) {
  auto dec = std::make_shared<QuasiSectorDecomposition>(quasi_sector_decompose(curve, 0.0, opt));
  const Series Fs = germ.rho.shift_down(germ.n);
  const Series dF = Fs.derivative();
  auto F = [Fs](Complex z) { return Fs.eval(z); };
  auto G_hat = [Fs](Complex z) { return Complex(-0.5 * std::log1p(std::norm(Fs.eval(z)))); };
  auto G = [Fs, dF](Complex z) {
    const Complex f = Fs.eval(z);
    return kI * f * std::conj(dF.eval(z)) / (2.0 * kTwoPi * (1.0 + std::norm(f)));
  };
  return make_branch_family(curve, dec, G_hat, G, F, true);
}

EllipsoidExample build_ellipsoid_curve(const EllipsoidCurveParams& params, const QuasiSectorOptions& opt_in) {
  params.validate();
  EllipsoidExample ex;
  ex.params = params;
  ex.curve = ellipsoid_quotient_curve(params);

  QuasiSectorOptions opt = opt_in;
  opt.r_max = std::min(opt.r_max, 0.9 * params.radius);
  auto dec = std::make_shared<QuasiSectorDecomposition>(quasi_sector_decompose(ex.curve, 0.0, opt));

  const Series Phi = params.Phi;
  const Series dPhi = Phi.derivative();
  const double p = params.p, q = params.q;
  const int k = params.k, l = params.l;
  auto G_hat = [=](Complex z) { return Complex(-0.5 * gamma_hat(p, q, k, l, std::norm(Phi.eval(z)))); };
  auto G = [=](Complex z) {
    const Complex f = Phi.eval(z);
    const double s = std::norm(f);
    if (s == 0.0) return Complex{};
    return kI * f * gamma_density(p, q, k, l, s) * std::conj(dPhi.eval(z)) / (2.0 * kTwoPi);
  };
  ex.family = make_branch_family(ex.curve, dec, G_hat, G, nullptr, params.single_valued());

  // Interior arcs must glue through the return map.
  const BranchFamily& fam = ex.family;
  for (int j = 1; j < fam.n; ++j)
    for (size_t i = 0; i < dec->radii.size(); ++i) {
      const Complex z = dec->arc_point(j, i);
      const double err = std::abs(fam.F(j - 1, z) - fam.alpha * fam.F(j, z));
      if (err > 1e-6) {
        std::ostringstream msg;
        msg << "ellipsoid curve: branches " << j - 1 << " and " << j << " disagree by " << err << " at z = " << z;
        throw ConstructionError(msg.str());
      }
    }
  return ex;
}

// --- Audit -----------------------------------------------------------------------

namespace {

void note(BranchAuditReport& rep, bool ok, const std::string& what) {
  if (!ok && rep.witness.empty()) rep.witness = what;
}

std::string where(const char* check, int k, Complex z, double value) {
  std::ostringstream s;
  s << check << " fails on sector " << k << " at z = (" << z.real() << ", " << z.imag() << "): " << value;
  return s.str();
}

}  // namespace

BranchAuditReport branch_audit(const BranchFamily& fam, const BranchAuditOptions& opt) {
  BranchAuditReport rep;
  const QuasiSectorDecomposition& dec = *fam.sectors;
  const int n = fam.n;
  rep.single_valued = fam.single_valued;

  // (a) interior arcs and the closing arc
  Complex arc_w{};
  int arc_k = -1;
  for (int j = 0; j < n; ++j) {
    const int left = (j + n - 1) % n;
    for (size_t i = 0; i < dec.radii.size(); ++i) {
      const Complex z = dec.arc_point(j, i);
      const Complex Fl = fam.F(left, z), Fr = fam.F(j, z);
      const double err = std::abs(Fl - fam.alpha * Fr);
      if (j == 0) {
        rep.closing_defect = std::max(rep.closing_defect, err);
        continue;
      }
      if (err > rep.arc_matching) {
        rep.arc_matching = err;
        arc_w = z;
        arc_k = left;
      }
      if (std::abs(Fl) > 1e-300) rep.ratio_defect = std::max(rep.ratio_defect, std::abs(Fr / Fl - 1.0 / fam.alpha));
    }
  }
  note(rep, rep.arc_matching < opt.arc_tol, where("arc matching", arc_k, arc_w, rep.arc_matching));

  // Sample points inside each sector.
  struct Sample {
    int k;
    Complex z;
  };
  std::vector<Sample> samples;
  for (int ir = 0; ir < opt.n_r; ++ir) {
    const double r = opt.n_r == 1 ? opt.r_lo : opt.r_lo + (opt.r_hi - opt.r_lo) * ir / (opt.n_r - 1);
    for (int k = 0; k < n; ++k) {
      const double ak = dec.arc_angle(k, r);
      const double gap = n == 1 ? kTwoPi : wrap_angle(ak - dec.arc_angle((k + 1) % n, r));
      for (int j = 0; j < opt.per_sector; ++j)
        samples.push_back({k, std::polar(r, ak - gap * (j + 0.5) / opt.per_sector)});
    }
  }

  // (b) branch constants
  rep.c_estimated.assign(n, 0.0);
  std::vector<double> lo(n, std::numeric_limits<double>::infinity()), hi(n, -std::numeric_limits<double>::infinity());
  std::vector<int> count(n, 0);
  for (const Sample& s : samples) {
    const double t = fam.u_curve(s.z).real();
    const double est = t + fam.G_hat(s.z).imag() / kTwoPi - fam.h_hat(s.k, s.z);
    rep.c_estimated[s.k] += est;
    lo[s.k] = std::min(lo[s.k], est);
    hi[s.k] = std::max(hi[s.k], est);
    ++count[s.k];
  }
  for (int k = 0; k < n; ++k) {
    rep.c_estimated[k] /= std::max(1, count[k]);
    rep.c_spread = std::max(rep.c_spread, hi[k] - lo[k]);
    rep.c_consistency = std::max(rep.c_consistency, std::abs(fam.c[k] - rep.c_estimated[k]));
  }
  for (int k = 0; k + 1 < n; ++k)
    rep.c_increment = std::max(rep.c_increment, std::abs(rep.c_estimated[k + 1] - rep.c_estimated[k] - 1.0));
  {
    std::ostringstream s;
    s << "branch constants: increment defect " << rep.c_increment << ", mismatch with stored constants "
      << rep.c_consistency;
    note(rep, rep.c_increment < opt.c_tol && rep.c_consistency < opt.c_tol && rep.c_spread < opt.c_tol, s.str());
  }

  // (c) u = H_k - G^ / (2 pi i), (d) Im H_k = h, (e) handle
  const Complex two_pi_i(0.0, kTwoPi);
  Complex u_w{}, h_w{}, g_w{};
  int u_k = -1, h_k = -1, g_k = -1;
  for (const Sample& s : samples) {
    const Complex u = fam.u_curve(s.z);
    const Complex model = fam.H(s.k, s.z) - fam.G_hat(s.z) / two_pi_i;
    const double du = std::abs(u - model);
    if (du > rep.u_defect) {
      rep.u_defect = du;
      u_w = s.z;
      u_k = s.k;
    }
    auto h_of = [&](Complex w) { return (fam.u_curve(w) + fam.G_hat(w) / two_pi_i).imag(); };
    const double dh = std::abs(fam.H(s.k, s.z).imag() - h_of(s.z));
    if (dh > rep.h_defect) {
      rep.h_defect = dh;
      h_w = s.z;
      h_k = s.k;
    }
    const double step = 1e-3 * std::abs(s.z);
    const double lap = h_of(s.z + step) + h_of(s.z - step) + h_of(s.z + kI * step) + h_of(s.z - kI * step) -
                       4.0 * h_of(s.z);
    rep.h_laplacian = std::max(rep.h_laplacian, std::abs(lap) / (step * step) * std::norm(s.z));

    const double e = 1e-5;
    const Complex gx = (fam.G_hat(s.z + e) - fam.G_hat(s.z - e)) / (2.0 * e);
    const Complex gy = (fam.G_hat(s.z + kI * e) - fam.G_hat(s.z - kI * e)) / (2.0 * e);
    const double dg = std::abs(0.5 * (gx + kI * gy) / two_pi_i - fam.G_density(s.z));
    if (dg > rep.handle_defect) {
      rep.handle_defect = dg;
      g_w = s.z;
      g_k = s.k;
    }
  }
  for (int j = 1; j < n; ++j)
    for (size_t i = 0; i < dec.radii.size(); ++i) {
      const Complex z = dec.arc_point(j, i);
      rep.h_defect = std::max(rep.h_defect, std::abs(fam.H(j - 1, z).imag() - fam.H(j, z).imag()));
    }
  note(rep, rep.u_defect < opt.u_tol, where("u-representation", u_k, u_w, rep.u_defect));
  note(rep, rep.h_defect < opt.u_tol, where("harmonic part", h_k, h_w, rep.h_defect));
  note(rep, rep.handle_defect < opt.handle_tol, where("G handle", g_k, g_w, rep.handle_defect));
  rep.passed = rep.witness.empty();
  return rep;
}

// --- Normal form -------------------------------------------------------------------

NormalForm normal_form(const AlgebroidGerm& germ, const Series& F, const Series& H_hat) {
  const int n = germ.n;
  if (n < 1) throw DomainError("normal_form: n must be positive");
  const int N = germ.rho.order();
  if (N < 2 * n) throw DomainError("normal_form: truncation order must be at least 2n");
  const auto v = germ.rho.valuation();
  if (!v || *v != n) throw DomainError("normal_form: ord(rho) must equal n");
  if (std::abs(F[0]) > 0.0) throw DomainError("normal_form: F must vanish at 0");

  const int M = N - n + 1;  // order to which f is determined
  const Series unit = germ.rho.shift_down(n) * (-H_hat.truncated(N - n)).exp();
  const Series root = unit.power(1.0 / n);
  std::vector<Complex> fc(M + 1);
  for (int j = 0; j + 1 <= M; ++j) fc[j + 1] = root[j];

  NormalForm out;
  out.n = n;
  out.f = Series(fc, M);
  out.f_inverse = out.f.reversion();
  out.w_prime = F.truncated(std::min(F.order(), M)).compose(out.f_inverse);
  return out;
}

NormalForm normal_form(const AlgebroidGerm& germ, const Series& F) {
  return normal_form(germ, F, Series(germ.rho.order()));
}

}  // namespace reeb
