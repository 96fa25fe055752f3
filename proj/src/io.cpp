#include "reeb/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace reeb {

Series series_from_json(const Json& coeffs, int order) {
  if (!coeffs.is_array()) throw UsageError("series: expected an array of [re, im] pairs");
  if (static_cast<int>(coeffs.size()) > order + 1) order = static_cast<int>(coeffs.size()) - 1;
  Series s(order);
  for (size_t k = 0; k < coeffs.size(); ++k) {
    const Json& c = coeffs[k];
    if (c.is_number()) {
      s[static_cast<int>(k)] = c.get<double>();
    } else if (c.is_array() && c.size() == 2 && c[0].is_number() && c[1].is_number()) {
      s[static_cast<int>(k)] = Complex(c[0].get<double>(), c[1].get<double>());
    } else {
      throw UsageError("series: coefficient " + std::to_string(k) + " is not [re, im]");
    }
  }
  return s;
}

Json series_to_json(const Series& s) {
  Json out = Json::array();
  int last = -1;
  for (int k = 0; k <= s.order(); ++k)
    if (s[k] != Complex{}) last = k;
  for (int k = 0; k <= last; ++k) out.push_back({s[k].real(), s[k].imag()});
  return out;
}

GermDocument germ_from_json(const Json& doc) {
  if (!doc.is_object()) throw UsageError("germ: expected a JSON object");
  if (!doc.contains("n") || !doc["n"].is_number_integer()) throw UsageError("germ: missing integer field n");
  GermDocument g;
  const int order = doc.value("order", Series::kDefaultOrder);
  g.germ.n = doc["n"].get<int>();
  g.germ.rho = doc.contains("rho") ? series_from_json(doc["rho"], order) : Series(order);
  if (doc.contains("target")) {
    const Json& t = doc["target"];
    g.target_kind = t.value("kind", std::string("standard-sphere"));
    if (g.target_kind == "ellipsoid") {
      EllipsoidCurveParams P;
      P.p = t.value("p", P.p);
      P.q = t.value("q", P.q);
      P.k = t.value("k", P.k);
      P.l = t.value("l", P.l);
      P.n = g.germ.n;
      P.Phi = g.germ.rho;
      P.radius = t.value("radius", P.radius);
      if (t.contains("b") && t["b"].get<int>() < 0)
        throw UsageError("germ: negative b (a pole of Phi) is not supported");
      try {
        P.validate();
      } catch (const DomainError& e) {
        throw UsageError(std::string("germ: ") + e.what());
      }
      if (t.contains("b") && t["b"].get<int>() != P.b()) throw UsageError("germ: b does not match ord(rho) / l");
      g.ellipsoid = P;
    } else if (g.target_kind != "standard-sphere") {
      throw UsageError("germ: unknown target kind '" + g.target_kind + "'");
    }
  }
  return g;
}

Json germ_to_json(const GermDocument& g) {
  Json doc;
  doc["n"] = g.germ.n;
  doc["order"] = g.germ.rho.order();
  doc["rho"] = series_to_json(g.germ.rho);
  Json t;
  t["kind"] = g.target_kind;
  if (g.ellipsoid) {
    t["p"] = g.ellipsoid->p;
    t["q"] = g.ellipsoid->q;
    t["k"] = g.ellipsoid->k;
    t["l"] = g.ellipsoid->l;
    t["b"] = g.ellipsoid->b();
    t["radius"] = g.ellipsoid->radius;
  }
  doc["target"] = t;
  return doc;
}

CongruenceMap congruence_from_json(const Json& doc, std::uint64_t seed) {
  if (!doc.is_object()) throw UsageError("congruence: expected a JSON object");
  Vec3 center(1.0, 0.0, 0.0);
  if (doc.contains("center")) {
    const Json& c = doc["center"];
    if (!c.is_array() || c.size() != 6) throw UsageError("congruence: center must have 6 entries");
    TwoForm4 b;
    for (int i = 0; i < 6; ++i) b[i] = c[i].get<double>();
    center = sd_coords(b);
    if (!(center.norm() > 1e-12)) throw UsageError("congruence: center has no self-dual part");
  }
  if (!doc.contains("perturbation")) return constant_congruence(center);
  const Json& p = doc["perturbation"];
  const double L = p.value("L", 0.0);
  if (!(L >= 0.0) || !(L < 1.0)) throw UsageError("congruence: L must lie in [0, 1)");
  if (L == 0.0) return constant_congruence(center);
  Mat3 M;
  M << 0.3, -0.5, 0.2, 0.7, 0.1, -0.4, -0.2, 0.6, 0.5;
  Vec3 quad(0.4, -0.3, 0.5);
  if (p.contains("coeffs")) {
    const Json& c = p["coeffs"];
    if (!c.is_array() || (c.size() != 9 && c.size() != 12))
      throw UsageError("congruence: coeffs must have 9 or 12 entries");
    for (int i = 0; i < 9; ++i) M(i / 3, i % 3) = c[i].get<double>();
    quad.setZero();
    if (c.size() == 12)
      for (int i = 0; i < 3; ++i) quad[i] = c[9 + i].get<double>();
  }
  return perturbed_congruence(center, M, quad, L, seed);
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw UsageError("invalid JSON in " + path.string() + ": " + e.what());
  }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << contents;
    if (!out) throw Error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string cr_residual_csv(const CrReport& rep) {
  std::ostringstream out;
  out.precision(17);
  out << "z_re,z_im,res1,res2,res3\n";
  for (size_t i = 0; i < rep.points.size(); ++i) {
    const auto& r = rep.residuals[i];
    out << rep.points[i].real() << ',' << rep.points[i].imag() << ',' << r[0] << ',' << r[1] << ',' << r[2] << '\n';
  }
  return out.str();
}

}  // namespace reeb
