#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "reeb/io.hpp"

namespace reeb {

struct CheckRecord {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  std::string relation;  ///< how value is compared with tolerance: "<", "<=", ">", ">="
  bool passed = false;
  double runtime_s = 0.0;
  std::string detail;
};

struct SuiteSection {
  std::string suite;
  std::vector<CheckRecord> checks;
  std::vector<std::string> artifacts;
  double runtime_s = 0.0;
  bool passed() const;
};

struct SuiteConfig {
  std::string suite;
  Json params = Json::object();
  std::filesystem::path base_dir = ".";
  std::filesystem::path out_dir = "reeb-branch-out";
  std::uint64_t seed = 0;
  bool parallel = false;
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<SuiteSection> sections;
  Json environment;
  bool passed() const;
  Json to_json() const;
};

/// sphere-curve, ellipsoid-curve, return-map, holonomy, dbar, congruence, linking.
const std::vector<std::string>& suite_names();

/// Reads the config file (if any) and resolves referenced files. Throws UsageError.
SuiteConfig load_suite_config(const std::string& suite, const std::optional<std::filesystem::path>& config_path,
                              std::uint64_t seed, const std::filesystem::path& out_dir, bool parallel);

/// Runs a named suite ("all" runs every suite). Module errors become failed checks.
SuiteReport run_suite(const SuiteConfig& cfg);

/// Writes report.json into out_dir (atomically).
std::filesystem::path write_report(const SuiteReport& rep, const std::filesystem::path& out_dir);

}  // namespace reeb
