#include "reeb/reeb_flow.hpp"

#include <cmath>

#include <Eigen/Dense>
#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint.hpp>

namespace reeb {

namespace odeint = boost::numeric::odeint;
using State = std::vector<double>;

namespace {

Vector to_vec(const State& s) { return Eigen::Map<const Vector>(s.data(), static_cast<Eigen::Index>(s.size())); }

State to_state(const Vector& v) { return State(v.data(), v.data() + v.size()); }

}  // namespace

ReebIntegrator::ReebIntegrator(const ContactChart& chart, FlowConfig cfg) : chart_(chart), cfg_(cfg) {
  if (!(cfg_.abs_tol > 0) || !(cfg_.rel_tol > 0) || !(cfg_.max_step > 0))
    throw DomainError("flow config: tolerances and max_step must be positive");
}

Vector ReebIntegrator::march(const Vector& p, double t_end, const StepHook& on_step, double* t_reached) {
  return march_signed(p, t_end, 1.0, on_step, t_reached);
}

Vector ReebIntegrator::march_signed(const Vector& p, double t_end, double direction, const StepHook& on_step,
                                    double* t_reached) {
  if (!p.allFinite()) throw DomainError("flow: non-finite start point");
  const ContactChart& chart = chart_;
  auto system = [&chart, direction](const State& x, State& dxdt, double) {
    const Vector v = to_vec(x);
    const Vector f = chart.reeb(v);
    for (Eigen::Index i = 0; i < f.size(); ++i) dxdt[i] = direction * f[i];
  };
  auto stepper = odeint::make_controlled<odeint::runge_kutta_dopri5<State>>(cfg_.abs_tol, cfg_.rel_tol);

  Vector x = p;
  double s = 0.0;
  double dt = std::min(cfg_.max_step, 1e-2);
  const double end_slop = 1e-14 * std::max(1.0, t_end);
  while (t_end - s > end_slop) {
    double h = std::min({dt, t_end - s, cfg_.max_step});
    State xs = to_state(x);
    double s_new = s;
    const auto res = stepper.try_step(system, xs, s_new, h);
    if (res == odeint::fail) {
      if (h < cfg_.min_step) throw IntegrationError("flow: step size collapsed below minimum");
      dt = h;
      continue;
    }
    Vector x1 = to_vec(xs);
    if (!x1.allFinite()) throw DomainError("flow: trajectory left the chart domain");
    x1 = chart_.project_to_locus(x1);
    ++steps_;
    const bool stop = on_step && on_step(s, x, s_new, x1);
    x = x1;
    s = s_new;
    dt = h;
    if (stop) break;
  }
  if (t_reached) *t_reached = s;
  return x;
}

Vector ReebIntegrator::advance(const Vector& p, double t) {
  if (t == 0.0) return p;
  return march_signed(p, std::abs(t), t > 0 ? 1.0 : -1.0, nullptr, nullptr);
}

Vector flow(const ContactChart& chart, const Vector& p, double t, const FlowConfig& cfg) {
  if (!chart.on_locus(p)) throw DomainError("flow: start point off the chart locus");
  ReebIntegrator integrator(chart, cfg);
  return integrator.advance(p, t);
}

// --- Sections and return maps ---------------------------------------------

namespace {

Section make_axis_section(double p, double q, double theta0, double radius) {
  Section s;
  const Complex rot = std::polar(1.0, -theta0);
  s.radius = radius;
  s.functional = [rot](const Vector& v) { return (w1_of(v) * rot).imag(); };
  s.functional_gradient = [theta0](const Vector&) {
    return Vector(Vec4(-std::sin(theta0), std::cos(theta0), 0.0, 0.0));
  };
  s.coordinate = [](const Vector& v) { return w2_of(v); };
  s.lift = [p, q, theta0](Complex c) -> Vector {
    const double rest = 1.0 - q * std::norm(c);
    if (rest <= 0.0) throw DomainError("section: disc coordinate outside the ellipsoid");
    return Vector(from_c2(std::polar(std::sqrt(rest / p), theta0), c));
  };
  s.base_point = s.lift(Complex{});
  return s;
}

}  // namespace

Section axis_section(const Ellipsoid& chart, double theta0, double radius) {
  return make_axis_section(chart.p(), chart.q(), theta0, radius);
}

Section axis_section(const StandardSphere&, double theta0, double radius) {
  return make_axis_section(1.0, 1.0, theta0, radius);
}

ReturnHit first_return(const ContactChart& chart, const Section& section, const Vector& p, const FlowConfig& cfg) {
  if (!chart.on_locus(p)) throw DomainError("first_return: start point off the chart locus");
  ReebIntegrator integrator(chart, cfg);

  double g_prev = section.functional(p);
  if (std::abs(g_prev) < 1e-8) g_prev = 0.0;  // starting on the slice
  bool found = false;
  double bracket_t0 = 0.0, bracket_h = 0.0;
  Vector bracket_x0;
  integrator.march(p, cfg.t_max, [&](double t0, const Vector& x0, double t1, const Vector& x1) {
    const double g1 = section.functional(x1);
    if (g_prev < 0.0 && g1 >= 0.0) {
      found = true;
      bracket_t0 = t0;
      bracket_h = t1 - t0;
      bracket_x0 = x0;
      return true;
    }
    g_prev = g1;
    return false;
  });
  if (!found) throw TimeoutError("first_return: no crossing before t_max");

  ReebIntegrator refine(chart, cfg);
  auto g_of = [&](double tau) { return section.functional(refine.advance(bracket_x0, tau)); };
  double lo = 0.0, hi = bracket_h;
  const double g_hi = g_of(hi);
  double tau = hi;
  if (g_hi != 0.0) {
    boost::uintmax_t max_iter = 200;
    auto tol = [&cfg](double a, double b) { return std::abs(b - a) < cfg.event_tol; };
    const auto r = boost::math::tools::toms748_solve(g_of, lo, hi, g_of(lo), g_hi, tol, max_iter);
    tau = 0.5 * (r.first + r.second);
  }
  ReturnHit hit;
  hit.point = refine.advance(bracket_x0, tau);
  hit.time = bracket_t0 + tau;

  const Vector grad = section.functional_gradient(hit.point);
  const double normal = grad.dot(chart.reeb(hit.point));
  if (std::abs(normal) < cfg.transversality * grad.norm())
    throw DegeneracyError("first_return: tangential crossing of the section");
  return hit;
}

std::string to_string(ReturnClass c) {
  switch (c) {
    case ReturnClass::Identity: return "Identity";
    case ReturnClass::Rotation: return "Rotation";
    case ReturnClass::Other: return "Other";
  }
  return "unknown";
}

ReturnMapReport classify_return_map(const ContactChart& chart, const Section& section, int n_samples,
                                    const FlowConfig& cfg, const ReturnMapOptions& opt) {
  if (n_samples < 8) throw DomainError("classify_return_map: need at least 8 samples");
  if (opt.ring_radius <= 0.0 || opt.ring_radius > section.radius)
    throw DomainError("classify_return_map: sample ring outside the section disc");

  ReturnMapReport rep;
  std::vector<Complex> start(n_samples), image(n_samples);
  Complex mean_dir{};
  double total_time = 0.0;
  for (int j = 0; j < n_samples; ++j) {
    start[j] = std::polar(opt.ring_radius, kTwoPi * j / n_samples);
    const ReturnHit hit = first_return(chart, section, section.lift(start[j]), cfg);
    image[j] = section.coordinate(hit.point);
    total_time += hit.time;
    mean_dir += image[j] / start[j] / std::abs(image[j] / start[j]);
    rep.radial_distortion = std::max(rep.radial_distortion, std::abs(std::abs(image[j]) / opt.ring_radius - 1.0));
  }
  rep.mean_return_time = total_time / n_samples;
  rep.angle = wrap_angle(std::arg(mean_dir));
  const Complex rot = std::polar(1.0, rep.angle);
  for (int j = 0; j < n_samples; ++j) rep.residuals.push_back(std::abs(image[j] - rot * start[j]));
  rep.fixed_point = section.coordinate(first_return(chart, section, section.lift(Complex{}), cfg).point);

  const double angle_from_zero = std::min(rep.angle, kTwoPi - rep.angle);
  if (rep.radial_distortion > opt.distortion_tol)
    rep.classification = ReturnClass::Other;
  else if (angle_from_zero < opt.identity_tol)
    rep.classification = ReturnClass::Identity;
  else
    rep.classification = ReturnClass::Rotation;
  return rep;
}

// --- Orbits and holonomy ---------------------------------------------------

OrbitData axis_orbit(const Ellipsoid& chart, int n_samples) {
  OrbitData orbit;
  orbit.base_point = Vec4(1.0 / std::sqrt(chart.p()), 0.0, 0.0, 0.0);
  orbit.period = kTwoPi / chart.p();
  for (int j = 0; j < n_samples; ++j) {
    const double phase = kTwoPi * j / n_samples;
    orbit.samples.push_back(Vec4(std::cos(phase), std::sin(phase), 0.0, 0.0) / std::sqrt(chart.p()));
  }
  return orbit;
}

double closure_defect(const ContactChart& chart, const OrbitData& orbit, const FlowConfig& cfg) {
  const Vector end = flow(chart, orbit.base_point, orbit.period, cfg);
  return chart.displacement(orbit.base_point, end).norm();
}

HolonomyResult holonomy(const ContactChart& chart, const OrbitData& orbit, const Section& section,
                        const FlowConfig& cfg) {
  if (!(orbit.period > 0.0)) throw DomainError("holonomy: orbit period must be positive");
  if (closure_defect(chart, orbit, cfg) > 1e-6) throw DomainError("holonomy: orbit does not close");
  const int d = chart.dim();
  auto system = [&chart, d](const State& s, State& ds, double) {
    const Vector x = Eigen::Map<const Vector>(s.data(), d);
    const Vector f = chart.reeb(x);
    const Matrix jac = chart.reeb_jacobian(x);
    if (!jac.allFinite()) throw NumericError("holonomy: Reeb Jacobian is not finite");
    Eigen::Map<const Matrix> phi(s.data() + d, d, d);
    Eigen::Map<Matrix> dphi(ds.data() + d, d, d);
    for (int i = 0; i < d; ++i) ds[i] = f[i];
    dphi = jac * phi;
  };
  State s(static_cast<size_t>(d + d * d), 0.0);
  for (int i = 0; i < d; ++i) s[i] = orbit.base_point[i];
  for (int i = 0; i < d; ++i) s[d + i * d + i] = 1.0;
  auto stepper = odeint::make_controlled<odeint::runge_kutta_dopri5<State>>(cfg.abs_tol, cfg.rel_tol);
  odeint::integrate_adaptive(stepper, system, s, 0.0, orbit.period, std::min(cfg.max_step, 1e-2));

  HolonomyResult out;
  out.monodromy = Eigen::Map<const Matrix>(s.data() + d, d, d);
  const Vector& p0 = orbit.base_point;
  const Vector x = chart.reeb(p0);
  const Vector gs = section.functional_gradient(p0);
  const auto gc = chart.constraint_gradient(p0);

  Matrix normals(d, gc ? 2 : 1);
  normals.col(0) = gs;
  if (gc) normals.col(1) = *gc;
  Eigen::HouseholderQR<Matrix> qr(normals);
  const Matrix q = qr.householderQ() * Matrix::Identity(d, d);
  const Matrix slice = q.rightCols(2);

  Matrix frame(d, 3);
  frame.col(0) = x;
  frame.rightCols(2) = slice;
  out.full_block = frame.colPivHouseholderQr().solve(out.monodromy * frame);

  for (int i = 0; i < 2; ++i) {
    Vector y = out.monodromy * slice.col(i);
    y -= (gs.dot(y) / gs.dot(x)) * x;
    out.transverse.col(i) = slice.transpose() * y;
  }
  out.det = out.transverse.determinant();
  Eigen::EigenSolver<Mat2> es(out.transverse);
  out.multipliers = {es.eigenvalues()[0], es.eigenvalues()[1]};
  out.flow_multiplier_defect = (out.monodromy * x - x).norm();
  return out;
}

RecurrenceReport recurrence_probe(const ContactChart& chart, const Section& section, int iterations,
                                  const std::vector<Complex>& grid, const FlowConfig& cfg, double closure_tol) {
  if (iterations < 1) throw DomainError("recurrence_probe: need at least one iteration");
  RecurrenceReport rep;
  for (const Complex& w0 : grid) {
    if (std::abs(w0) >= section.radius) throw DomainError("recurrence_probe: grid point outside the section disc");
    Vector x = section.lift(w0);
    int closure = 0;
    for (int j = 1; j <= iterations; ++j) {
      const ReturnHit hit = first_return(chart, section, x, cfg);
      const Complex w = section.coordinate(hit.point);
      rep.max_radius = std::max(rep.max_radius, std::abs(w));
      rep.max_radius_drift = std::max(rep.max_radius_drift, std::abs(std::abs(w) - std::abs(w0)));
      if (std::abs(w) >= section.radius) rep.stays_inside = false;
      if (closure == 0 && std::abs(w - w0) < closure_tol) closure = j;
      x = hit.point;
    }
    ++rep.closure_histogram[closure];
    ++rep.points;
  }
  return rep;
}

}  // namespace reeb
