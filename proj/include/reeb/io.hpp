#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "reeb/congruence.hpp"
#include "reeb/curves.hpp"
#include "reeb/ellipsoid_model.hpp"

namespace reeb {

using Json = nlohmann::json;

/// {"n": int, "rho": [[re, im], ...], "order": int?, "target": {"kind": ..., "p", "q", "k", "l", "b"}}
struct GermDocument {
  AlgebroidGerm germ;
  std::string target_kind = "standard-sphere";
  std::optional<EllipsoidCurveParams> ellipsoid;  ///< set when target.kind == "ellipsoid"; Phi is read from "rho"
};

Series series_from_json(const Json& coeffs, int order = Series::kDefaultOrder);
Json series_to_json(const Series& s);

GermDocument germ_from_json(const Json& doc);
Json germ_to_json(const GermDocument& g);

/// {"center": [6 reals], "perturbation": {"type": "spherical-harmonic-like", "coeffs": [...], "L": real}}.
/// coeffs holds 9 entries of M (row-major), optionally followed by 3 quadratic weights.
CongruenceMap congruence_from_json(const Json& doc, std::uint64_t seed = 0);

Json read_json_file(const std::filesystem::path& path);

/// Writes via a temporary file in the same directory followed by rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

/// Columns z_re, z_im, res1, res2, res3.
std::string cr_residual_csv(const CrReport& rep);

}  // namespace reeb
