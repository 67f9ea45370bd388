// Command-line harness: runs verification suites over the face-model library
// and prints deterministic key=value reports.
#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "ellface/suites.hpp"

namespace {

int run(int argc, char** argv) {
  CLI::App app{"elliptic face-model verification harness"};

  std::string tau, hbar, sweep, tol;
  int rank = -1, truncation = -1;
  long long seed = -1;
  std::string out, suite = "all", config_path;
  bool show_config = false, tables = false;

  app.add_option("--tau", tau, "modulus, as re,im or a+bi");
  app.add_option("--hbar", hbar, "shift parameter, as re,im or a+bi");
  app.add_option("--rank", rank, "rank n of the model");
  app.add_option("--truncation", truncation, "product truncation order");
  app.add_option("--seed", seed, "base seed for all case draws");
  app.add_option("--sweep", sweep, "case count for every suite");
  app.add_option("--tol", tol, "tolerance for every suite");
  app.add_option("--out", out, "write the report to this file");
  app.add_option("--suite", suite, "suite to run, or 'all'");
  app.add_option("--config", config_path, "key=value config file");
  app.add_flag("--print-config", show_config, "print the effective config");
  app.add_flag("--tables", tables, "print weight tables and exit");

  CLI11_PARSE(app, argc, argv);

  ellface::SuiteConfig config = ellface::default_suite_config();
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw ellface::ConfigError("cannot open config: " + config_path);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    config = ellface::parse_config_text(text);
  }
  if (!tau.empty()) ellface::apply_config_entry(config, "tau", tau);
  if (!hbar.empty()) ellface::apply_config_entry(config, "hbar", hbar);
  if (rank >= 0)
    ellface::apply_config_entry(config, "rank", std::to_string(rank));
  if (truncation >= 0)
    ellface::apply_config_entry(config, "truncation",
                                std::to_string(truncation));
  if (seed >= 0)
    ellface::apply_config_entry(config, "seed", std::to_string(seed));
  if (!sweep.empty()) ellface::apply_config_entry(config, "sweep", sweep);
  if (!tol.empty()) ellface::apply_config_entry(config, "tol", tol);
  if (!out.empty()) ellface::apply_config_entry(config, "out", out);

  if (show_config) {
    std::cout << ellface::serialize_config(config);
    return 0;
  }
  if (tables) {
    std::cout << ellface::print_tables(config);
    return 0;
  }

  const ellface::SuiteReport report = ellface::run_suite(suite, config);
  std::string text = report.body();
  char wall[64];
  std::snprintf(wall, sizeof(wall), "wall_ms=%.1f\n", report.wall_ms);
  text += wall;
  if (!config.output_path.empty()) {
    std::ofstream file(config.output_path);
    if (!file)
      throw ellface::ConfigError("cannot write: " + config.output_path);
    file << text;
    std::cout << "report written to " << config.output_path << "\n";
  } else {
    std::cout << text;
  }
  return report.all_passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ellface::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
