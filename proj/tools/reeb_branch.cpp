#include <iostream>

#include <CLI11.hpp>

#include "reeb/report.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Runs verification suites and writes report.json plus CSV grids."};
  std::string suite;
  std::string config;
  std::uint64_t seed = 0;
  std::string out = "reeb-branch-out";
  bool parallel = false;
  app.add_option("suite", suite, "sphere-curve, ellipsoid-curve, return-map, holonomy, dbar, congruence, linking or all")
      ->required();
  app.add_option("--config", config, "JSON config file")->required();
  app.add_option("--seed", seed, "seed for all random sampling");
  app.add_option("--out", out, "output directory");
  app.add_flag("--parallel", parallel, "run suites concurrently");
  CLI11_PARSE(app, argc, argv);

  try {
    const reeb::SuiteConfig cfg = reeb::load_suite_config(suite, config, seed, out, parallel);
    const reeb::SuiteReport rep = reeb::run_suite(cfg);
    const auto path = reeb::write_report(rep, cfg.out_dir);
    for (const auto& s : rep.sections) {
      for (const auto& c : s.checks) {
        std::cout << (c.passed ? "PASS " : "FAIL ") << s.suite << '/' << c.name << " value=" << c.value << ' '
                  << c.relation << ' ' << c.tolerance;
        if (!c.detail.empty()) std::cout << "  (" << c.detail << ')';
        std::cout << '\n';
      }
    }
    std::cout << "report: " << path.string() << '\n';
    return rep.passed() ? 0 : 1;
  } catch (const reeb::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
