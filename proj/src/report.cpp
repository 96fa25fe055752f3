#include "reeb/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <future>
#include <random>
#include <sstream>

#include "reeb/branch.hpp"
#include "reeb/dbar.hpp"
#include "reeb/linking.hpp"
#include "reeb/parallel.hpp"
#include "reeb/reeb_flow.hpp"

namespace reeb {

bool SuiteSection::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.passed; });
}

bool SuiteReport::passed() const {
  return std::all_of(sections.begin(), sections.end(), [](const SuiteSection& s) { return s.passed(); });
}

Json SuiteReport::to_json() const {
  Json doc;
  doc["schema"] = 1;
  doc["suite"] = suite;
  doc["seed"] = seed;
  doc["passed"] = passed();
  doc["environment"] = environment;
  Json secs = Json::array();
  for (const SuiteSection& s : sections) {
    Json js;
    js["suite"] = s.suite;
    js["passed"] = s.passed();
    js["runtime_s"] = s.runtime_s;
    js["artifacts"] = s.artifacts;
    Json checks = Json::array();
    for (const CheckRecord& c : s.checks) {
      Json jc;
      jc["name"] = c.name;
      jc["value"] = std::isfinite(c.value) ? Json(c.value) : Json(nullptr);
      jc["tolerance"] = c.tolerance;
      jc["relation"] = c.relation;
      jc["passed"] = c.passed;
      jc["runtime_s"] = c.runtime_s;
      if (!c.detail.empty()) jc["detail"] = c.detail;
      checks.push_back(jc);
    }
    js["checks"] = checks;
    secs.push_back(js);
  }
  doc["sections"] = secs;
  return doc;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"sphere-curve", "ellipsoid-curve", "return-map", "holonomy",
                                                 "dbar",         "congruence",      "linking"};
  return names;
}

SuiteConfig load_suite_config(const std::string& suite, const std::optional<std::filesystem::path>& config_path,
                              std::uint64_t seed, const std::filesystem::path& out_dir, bool parallel) {
  const auto& names = suite_names();
  if (suite != "all" && std::find(names.begin(), names.end(), suite) == names.end())
    throw UsageError("unknown suite '" + suite + "'");
  SuiteConfig cfg;
  cfg.suite = suite;
  cfg.seed = seed;
  cfg.out_dir = out_dir;
  cfg.parallel = parallel;
  if (config_path) {
    if (!std::filesystem::exists(*config_path)) throw UsageError("config file not found: " + config_path->string());
    cfg.params = read_json_file(*config_path);
    if (!cfg.params.is_object()) throw UsageError("config must be a JSON object");
    cfg.base_dir = config_path->parent_path();
  }
  for (const char* key : {"germ", "ellipsoid", "congruence"}) {
    const std::string file_key = std::string(key) + "_file";
    if (!cfg.params.contains(file_key)) continue;
    std::filesystem::path p = cfg.params[file_key].get<std::string>();
    if (p.is_relative()) p = cfg.base_dir / p;
    if (!std::filesystem::exists(p)) throw UsageError("referenced file not found: " + p.string());
    cfg.params[key] = read_json_file(p);
  }
  return cfg;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool compare(double value, const std::string& rel, double tol) {
  if (!std::isfinite(value)) return false;
  if (rel == "<") return value < tol;
  if (rel == "<=") return value <= tol;
  if (rel == ">") return value > tol;
  return value >= tol;
}

struct SectionBuilder {
  SuiteSection section;
  explicit SectionBuilder(std::string name) { section.suite = std::move(name); }

  void check(const std::string& name, const std::string& rel, double tol, const std::function<double()>& fn) {
    CheckRecord c;
    c.name = name;
    c.relation = rel;
    c.tolerance = tol;
    const auto t0 = Clock::now();
    try {
      c.value = fn();
      c.passed = compare(c.value, rel, tol);
    } catch (const std::exception& e) {
      c.value = std::nan("");
      c.passed = false;
      c.detail = e.what();
    }
    c.runtime_s = seconds_since(t0);
    section.checks.push_back(std::move(c));
  }
  void note(const std::string& detail) {
    if (!section.checks.empty() && section.checks.back().detail.empty()) section.checks.back().detail = detail;
  }
};

AlgebroidGerm default_sphere_germ() {
  AlgebroidGerm g;
  g.n = 2;
  g.rho = Series::monomial(3);
  return g;
}

EllipsoidCurveParams default_ellipsoid_params() {
  EllipsoidCurveParams P;
  P.p = 2.0;
  P.q = 3.0;
  P.k = 2;
  P.l = 3;
  P.n = 2;
  P.Phi = Series::monomial(3, 0.05);
  P.radius = 0.6;
  return P;
}

void save(SuiteSection& s, const SuiteConfig& cfg, const std::string& name, const std::string& contents) {
  write_file_atomic(cfg.out_dir / name, contents);
  s.artifacts.push_back(name);
}

SuiteSection run_sphere_curve(const SuiteConfig& cfg) {
  SectionBuilder b("sphere-curve");
  AlgebroidGerm germ = default_sphere_germ();
  if (cfg.params.contains("germ")) germ = germ_from_json(cfg.params["germ"]).germ;
  const Json grid = cfg.params.value("grid", Json::object());
  const int n_r = grid.value("n_r", 64), n_t = grid.value("n_theta", 64);
  const double r0 = grid.value("r_min", 0.05), r1 = grid.value("r_max", 0.5);

  std::optional<FiniteEnergyCurve> curve;
  b.check("build", "<=", 0.0, [&] {
    curve = build_sphere_curve(germ, std::max(1.0, 1.25 * r1));
    return 0.0;
  });
  if (!curve) return b.section;

  b.check("psi_norm", "<", 1e-12, [&] {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double m = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const Complex z = std::polar(r0 + (r1 - r0) * u(rng), kTwoPi * u(rng));
      m = std::max(m, std::abs(curve->psi(z).norm() - 1.0));
    }
    return m;
  });
  CrReport cr;
  b.check("cr_residual", "<", 1e-9, [&] {
    cr = cr_residual(*curve, polar_grid(r0, r1, n_r, n_t), Partials::Analytic);
    return cr.sup;
  });
  if (!cr.points.empty()) save(b.section, cfg, "sphere_cr_residual.csv", cr_residual_csv(cr));
  b.check("gradient_check", "<", 1e-6, [&] {
    double m = 0.0;
    for (const Complex& z : polar_grid(r0, r1, 6, 12, 0.5)) {
      const CurveJet a = curve->jet(z, Partials::Analytic), f = curve->jet(z, Partials::FiniteDifference);
      m = std::max({m, (a.psi_eta - f.psi_eta).norm(), (a.psi_zeta - f.psi_zeta).norm(), std::abs(a.a_eta - f.a_eta),
                    std::abs(a.a_zeta - f.a_zeta)});
    }
    return m;
  });
  b.check("charge", "<", 1e-6, [&] { return std::abs(charge(*curve).value - germ.n); });
  b.check("dlambda_energy", ">=", 0.0, [&] { return dlambda_energy(*curve, r0, r1); });
  b.check("asymptotics", ">=", 1.0, [&] {
    const AsymptoticReport a = asymptotic_check(*curve, {1.0, 2.0, 3.0, 4.0, 5.0, 6.0});
    return (a.eps_monotone && a.delta_monotone) ? 1.0 : 0.0;
  });
  b.check("quasi_sector_ray_deviation", "<=", 1.0, [&] {
    const QuasiSectorDecomposition dec = quasi_sector_decompose(*curve, 0.0);
    double worst = 0.0;
    for (int k = 0; k < dec.n; ++k)
      for (size_t i = 0; i < dec.radii.size(); ++i)
        if (dec.radii[i] <= 0.1) worst = std::max(worst, std::abs(dec.arc_angles[k][i] - dec.ray(k)) / dec.radii[i]);
    return worst;
  });
  b.check("branch_audit", ">=", 1.0, [&] {
    const BranchFamily fam = sphere_branch_family(germ, *curve);
    const BranchAuditReport rep = branch_audit(fam);
    if (!rep.passed) throw Error(rep.witness);
    return 1.0;
  });
  return b.section;
}

SuiteSection run_ellipsoid_curve(const SuiteConfig& cfg) {
  SectionBuilder b("ellipsoid-curve");
  EllipsoidCurveParams P = default_ellipsoid_params();
  if (cfg.params.contains("ellipsoid")) {
    const GermDocument doc = germ_from_json(cfg.params["ellipsoid"]);
    if (!doc.ellipsoid) throw UsageError("ellipsoid: target kind must be 'ellipsoid'");
    P = *doc.ellipsoid;
  }
  std::optional<EllipsoidExample> ex;
  b.check("build", "<=", 0.0, [&] {
    ex = build_ellipsoid_curve(P);
    return 0.0;
  });
  if (!ex) return b.section;
  const BranchFamily& fam = ex->family;

  BranchAuditReport audit;
  b.check("branch_audit", ">=", 1.0, [&] {
    audit = branch_audit(fam);
    if (!audit.passed) throw Error(audit.witness);
    return 1.0;
  });
  b.check("branch_ratio", "<", 1e-12, [&] { return audit.ratio_defect; });
  b.check("arc_matching", "<", 1e-6, [&] { return audit.arc_matching; });
  b.check("c_increments", "<", 1e-6, [&] { return std::max(audit.c_increment, audit.c_consistency); });
  b.check("u_representation", "<", 1e-4, [&] { return audit.u_defect; });
  b.check("closing_arc_consistent", ">=", 1.0, [&] {
    const bool closes = audit.closing_defect < 1e-6;
    return closes == P.single_valued() ? 1.0 : 0.0;
  });
  b.note("closing arc defect " + std::to_string(audit.closing_defect));

  const double r1 = std::min(0.5, 0.9 * P.radius);
  CrReport cr;
  b.check("cr_residual_fd", "<", 1e-4, [&] {
    const auto& dec = *fam.sectors;
    cr = cr_residual(ex->curve, polar_grid(0.05, r1, 64, 64), Partials::FiniteDifference,
                     [&](Complex z) { return dec.arc_distance(z) < 1e-3; });
    return cr.sup;
  });
  if (!cr.points.empty()) save(b.section, cfg, "ellipsoid_cr_residual.csv", cr_residual_csv(cr));
  b.check("charge", "<", 1e-4,
          [&] { return std::abs(charge(ex->curve, {}, 512, Partials::FiniteDifference).value - P.n); });
  b.check("ellipsoid_equation", "<", 1e-10, [&] {
    const Ellipsoid E(P.p, P.q);
    double m = 0.0;
    for (const Complex& z : polar_grid(0.05, r1, 8, 16, 0.5))
      m = std::max(m, std::abs(E.constraint(ex->curve.ambient(z, std::arg(z)))));
    return m;
  });
  b.check("asymptotics_r6", "<", 1e-3, [&] {
    const AsymptoticReport a = asymptotic_check(ex->curve, {2.0, 4.0, 6.0});
    return std::max(a.eps_sup.back(), a.delta_sup.back());
  });
  b.check("gamma_hat_degenerate", "<", 1e-8, [&] {
    double m = 0.0;
    for (double s : {0.0, 1e-4, 0.01, 0.1, 0.5, 1.0, 2.0, 5.0})
      m = std::max(m, std::abs(gamma_hat(1.0, 1.0, 1, 1, s) - std::log1p(s)));
    return m;
  });
  return b.section;
}

SuiteSection run_return_map(const SuiteConfig& cfg) {
  SectionBuilder b("return-map");
  const int n = cfg.params.value("return_map_samples", 16);
  auto run = [&](const std::string& name, double p, double q, double expected, double tol) {
    b.check(name, "<", tol, [&] {
      const Ellipsoid E(p, q);
      const Section S = axis_section(E);
      const ReturnMapReport r = classify_return_map(E, S, n);
      const ReturnClass want = expected == 0.0 ? ReturnClass::Identity : ReturnClass::Rotation;
      if (r.classification != want) throw Error("classified as " + to_string(r.classification));
      return std::abs(wrap_signed(r.angle - expected));
    });
  };
  run("ellipsoid_1_2_identity", 1.0, 2.0, 0.0, 1e-5);
  run("ellipsoid_2_3_rotation_pi", 2.0, 3.0, kPi, 1e-4);
  run("ellipsoid_3_5_rotation", 3.0, 5.0, wrap_angle(kTwoPi * 5.0 / 3.0), 1e-4);
  b.check("sphere_identity", "<", 1e-5, [&] {
    const StandardSphere S3;
    const Section S = axis_section(S3);
    const ReturnMapReport r = classify_return_map(S3, S, n);
    if (r.classification != ReturnClass::Identity) throw Error("classified as " + to_string(r.classification));
    return std::abs(wrap_signed(r.angle));
  });
  return b.section;
}

SuiteSection run_holonomy(const SuiteConfig&) {
  SectionBuilder b("holonomy");
  for (auto [p, q] : {std::pair{1.0, 2.0}, std::pair{2.0, 3.0}, std::pair{3.0, 5.0}, std::pair{1.0, 1.0}}) {
    const std::string tag = "E(" + std::to_string(static_cast<int>(p)) + "," + std::to_string(static_cast<int>(q)) + ")";
    std::optional<HolonomyResult> h;
    b.check(tag + " det", "<", 1e-6, [&] {
      const Ellipsoid E(p, q);
      h = holonomy(E, axis_orbit(E), axis_section(E));
      return std::abs(h->det - 1.0);
    });
    if (!h) continue;
    b.check(tag + " unimodular", "<", 1e-5, [&] {
      return std::max(std::abs(std::abs(h->multipliers[0]) - 1.0), std::abs(std::abs(h->multipliers[1]) - 1.0));
    });
    b.check(tag + " flow multiplier", "<", 1e-6, [&] { return h->flow_multiplier_defect; });
    const double angle = kTwoPi * q / p;
    b.check(tag + " transverse rotation", "<", 1e-6, [&] {
      Mat2 R;
      R << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
      // Only the spectrum is frame independent.
      const Complex want = std::polar(1.0, angle);
      double d = std::min(std::abs(h->multipliers[0] - want), std::abs(h->multipliers[0] - std::conj(want)));
      d = std::max(d, std::min(std::abs(h->multipliers[1] - want), std::abs(h->multipliers[1] - std::conj(want))));
      return std::max(d, std::abs(h->transverse.trace() - R.trace()));
    });
  }
  return b.section;
}

SuiteSection run_dbar(const SuiteConfig& cfg) {
  SectionBuilder b("dbar");
  const Json dj = cfg.params.value("dbar", Json::object());
  QuadratureConfig q;
  q.n_r = dj.value("n_r", 128);
  q.n_theta = dj.value("n_theta", 128);
  const auto one = DiscGridFunction::from_evaluator([](Complex) { return Complex(1.0); }, 1.0, q.n_r, q.n_theta);
  const auto mu = DiscGridFunction::from_evaluator([](Complex z) { return z; }, 1.0, q.n_r, q.n_theta);

  b.check("transform_of_one", "<", 1e-4, [&] {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double m = 0.0;
    for (int i = 0; i < 100; ++i) {
      const Complex z = std::polar(0.95 * std::sqrt(u(rng)), kTwoPi * u(rng));
      m = std::max(m, std::abs(cauchy_green(one, z, q) - Complex(0.0, kTwoPi) * std::conj(z)));
    }
    return m;
  });
  const std::vector<std::function<Complex(Complex)>> fs = {
      [](Complex) { return Complex(1.0); },
      [](Complex z) { return z; },
      [](Complex z) { return std::conj(z); },
      [](Complex z) { return z * std::conj(z); },
      [](Complex z) { return z * z * std::conj(z) + 0.5; },
  };
  for (size_t i = 0; i < fs.size(); ++i)
    b.check("dbar_residual_f" + std::to_string(i), "<", 5e-3, [&] {
      const auto f = DiscGridFunction::from_evaluator(fs[i], 1.0, q.n_r, q.n_theta);
      return dbar_residual(dbar_solution(f, q, 16, 32), f, 0.1, 0.8);
    });
  b.check("convergence_order", ">=", 1.5, [&] {
    auto f = [](Complex z) { return std::exp(std::conj(z)) * std::sqrt(std::norm(z) + 0.05); };
    double res[2];
    for (int j = 0; j < 2; ++j) {
      QuadratureConfig c;
      c.n_r = c.n_theta = 16 << j;
      const auto g = DiscGridFunction::from_evaluator(f, 1.0, c.n_r, c.n_theta);
      res[j] = dbar_residual(dbar_solution(g, c, 8, 16), g, 0.1, 0.8);
    }
    return std::log2(res[0] / res[1]);
  });
  for (auto [name, g] : {std::pair{"bound_certificate_one", &one}, std::pair{"bound_certificate_mu", &mu}})
    b.check(name, "<=", 0.0, [&, g = g] {
      const BoundCertificate c = bound_certificate(*g, q);
      return c.sup_ratio - (c.K + 1e-3);
    });
  save(b.section, cfg, "dbar_transform_one.csv", [&] {
    const auto u = dbar_solution(one, q, 16, 32);
    std::ostringstream out;
    out.precision(17);
    out << "r,theta,re,im\n";
    for (int i = 0; i < u.n_r(); ++i)
      for (int j = 0; j < u.n_theta(); ++j) {
        const Complex v = u.value(i, j);
        out << u.node_r(i) << ',' << u.node_theta(j) << ',' << v.real() << ',' << v.imag() << '\n';
      }
    return out.str();
  }());
  return b.section;
}

SuiteSection run_congruence(const SuiteConfig& cfg) {
  SectionBuilder b("congruence");
  CongruenceMap constant = constant_congruence();
  CongruenceMap perturbed;
  bool have_perturbed = false;
  if (cfg.params.contains("congruence")) {
    const CongruenceMap m = congruence_from_json(cfg.params["congruence"], cfg.seed);
    if (m.declared_L > 0.0) {
      perturbed = m;
      have_perturbed = true;
    } else {
      constant = m;
    }
  }
  b.check("constant_matches_standard", "<", 1e-12, [&] {
    const std::vector<Vec4> pts = random_sphere_points(1000, cfg.seed);
    const Mat4 J0 = osculating_J(constant(from_asd_coords(Vec3(1, 0, 0)) * std::sqrt(0.5)));
    double m = 0.0;
    for (const Vec4& v : pts) {
      const CongruenceContact c = contact_from_congruence(constant, v);
      m = std::max({m, (c.J - J0).cwiseAbs().maxCoeff(), (c.X + J0 * v).norm()});
    }
    return m;
  });
  CongruenceAudit ca;
  b.check("constant_audit", "<", 1e-9, [&] {
    ca = congruence_audit(constant, 200, cfg.seed);
    return *std::max_element(ca.defects.begin(), ca.defects.end());
  });
  if (!have_perturbed) b.check("perturbed_build", "<=", 0.0, [&] {
      perturbed = default_perturbed_congruence(0.3, cfg.seed);
      return 0.0;
    });
  CongruenceAudit pa;
  b.check("perturbed_defect_b", "<", 1e-9, [&] {
    pa = congruence_audit(perturbed, 200, cfg.seed);
    return pa.defects[1];
  });
  b.check("perturbed_defect_f", "<", 1e-9, [&] { return pa.defects[5]; });
  b.check("perturbed_defect_a_reported", ">=", 0.0, [&] { return pa.defects[0]; });
  b.check("primitive_where_closed", "<", 1e-5, [&] { return std::max(ca.primitive_residual, pa.primitive_residual); });
  b.check("o4_random_orthogonal", "<", 1e-8, [&] {
    double m = 0.0;
    for (int i = 0; i < 5; ++i) m = std::max(m, o4_transport(perturbed, random_orthogonal(cfg.seed + 17 + i)).residual);
    return m;
  });
  b.check("o4_negative_control", ">", 0.1, [&] {
    Mat4 d = Mat4::Identity();
    d(0, 0) = 2.0;
    return o4_transport(perturbed, d).residual;
  });
  return b.section;
}

SuiteSection run_linking(const SuiteConfig& cfg) {
  SectionBuilder b("linking");
  const int m = cfg.params.value("linking_m", 512);
  AlgebroidGerm germ = default_sphere_germ();
  if (cfg.params.contains("germ")) germ = germ_from_json(cfg.params["germ"]).germ;
  const double eps = 0.1;

  auto knot = [&](int mm) { return boundary_knot(germ, eps, std::max(mm, 64 * germ.n)); };
  b.check("hopf_fibers", "<", 0.5, [&] {
    const LinkingValue l = gauss_linking(axis_circle_w1_zero(m), axis_circle_w2_zero(m));
    return std::abs(l.value - 1.0);
  });
  int l1 = 0, l2 = 0;
  b.check("knot_vs_w1_zero", "<", 0.5, [&] {
    l1 = linking_with_refinement(knot, axis_circle_w1_zero, m).result.value;
    return std::abs(l1 - static_cast<double>(germ.n));
  });
  const auto ord = germ.rho.valuation();
  b.check("knot_vs_w2_zero", "<", 0.5, [&] {
    if (!ord) throw Error("rho vanishes identically; the knot lies on {w2 = 0}");
    l2 = linking_with_refinement(knot, axis_circle_w2_zero, m).result.value;
    return std::abs(l2 - static_cast<double>(*ord));
  });
  b.check("pole_independence", "<", 0.5, [&] {
    const SpaceLoop K = knot(m), C = axis_circle_w1_zero(m);
    const Vec4 p1 = choose_pole(K, C);
    const Vec4 p2 = -p1;
    const int a = gauss_linking(K, C, p1).value;
    const int c = gauss_linking(K, C, p2).value;
    return std::abs(static_cast<double>(a - c));
  });
  b.check("orientation_reversal", "<", 0.5, [&] {
    const SpaceLoop K = knot(m), C = axis_circle_w1_zero(m);
    return std::abs(static_cast<double>(gauss_linking(K.reversed(), C).value + gauss_linking(K, C).value));
  });
  b.check("winding_profile", "<", 0.5, [&] {
    if (!ord) throw Error("rho vanishes identically");
    const auto [a, c] = winding_profile(knot(m));
    return std::abs(static_cast<double>(a - germ.n)) + std::abs(static_cast<double>(c - *ord));
  });
  b.check("charge_equals_linking", "<", 0.5, [&] {
    const FiniteEnergyCurve curve = build_sphere_curve(germ, 1.0);
    return std::abs(charge(curve).value - l1);
  });
  save(b.section, cfg, "boundary_knot.csv", [&] {
    const SpaceLoop K = knot(m);
    std::ostringstream out;
    out.precision(17);
    out << "x1,y1,x2,y2\n";
    for (const Vec4& p : K.points) out << p[0] << ',' << p[1] << ',' << p[2] << ',' << p[3] << '\n';
    return out.str();
  }());
  return b.section;
}

SuiteSection dispatch(const std::string& name, const SuiteConfig& cfg) {
  const auto t0 = Clock::now();
  SuiteSection s;
  if (name == "sphere-curve") s = run_sphere_curve(cfg);
  else if (name == "ellipsoid-curve") s = run_ellipsoid_curve(cfg);
  else if (name == "return-map") s = run_return_map(cfg);
  else if (name == "holonomy") s = run_holonomy(cfg);
  else if (name == "dbar") s = run_dbar(cfg);
  else if (name == "congruence") s = run_congruence(cfg);
  else if (name == "linking") s = run_linking(cfg);
  else throw UsageError("unknown suite '" + name + "'");
  s.runtime_s = seconds_since(t0);
  return s;
}

Json environment_stamp() {
  Json env;
#if defined(__clang__)
  env["compiler"] = std::string("clang ") + __clang_version__;
#elif defined(__GNUC__)
  env["compiler"] = std::string("gcc ") + __VERSION__;
#else
  env["compiler"] = "unknown";
#endif
  env["cxx_standard"] = static_cast<long>(__cplusplus);
  env["threads"] = thread_count();
#ifdef NDEBUG
  env["build"] = "release";
#else
  env["build"] = "debug";
#endif
  return env;
}

}  // namespace

SuiteReport run_suite(const SuiteConfig& cfg) {
  SuiteReport rep;
  rep.suite = cfg.suite;
  rep.seed = cfg.seed;
  rep.environment = environment_stamp();
  std::filesystem::create_directories(cfg.out_dir);

  std::vector<std::string> names;
  if (cfg.suite == "all") names = suite_names();
  else names = {cfg.suite};
  for (const std::string& n : names)
    if (std::find(suite_names().begin(), suite_names().end(), n) == suite_names().end())
      throw UsageError("unknown suite '" + n + "'");

  auto guarded = [&cfg](const std::string& n) {
    try {
      return dispatch(n, cfg);
    } catch (const UsageError&) {
      throw;
    } catch (const std::exception& e) {
      SuiteSection s;
      s.suite = n;
      CheckRecord c;
      c.name = "suite";
      c.relation = "<=";
      c.value = std::nan("");
      c.detail = e.what();
      s.checks.push_back(c);
      return s;
    }
  };

  if (cfg.parallel && names.size() > 1) {
    std::vector<std::future<SuiteSection>> jobs;
    for (const std::string& n : names) jobs.push_back(std::async(std::launch::async, guarded, n));
    for (auto& j : jobs) rep.sections.push_back(j.get());
  } else {
    for (const std::string& n : names) rep.sections.push_back(guarded(n));
  }
  return rep;
}

std::filesystem::path write_report(const SuiteReport& rep, const std::filesystem::path& out_dir) {
  const std::filesystem::path path = out_dir / "report.json";
  write_file_atomic(path, rep.to_json().dump(2) + "\n");
  return path;
}

}  // namespace reeb
