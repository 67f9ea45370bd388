#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "ellface/types.hpp"

namespace ellface {

// ---------------------------------------------------------------------------
// Configuration for the verification suites.  Serializes to a flat
// key=value file; complex values canonically as "re,im" ("a+bi" is also
// accepted on input for flag ergonomics).
// ---------------------------------------------------------------------------

struct SuiteConfig {
  ModelParams params;
  std::uint64_t seed = 1;
  std::map<std::string, int> sweep_sizes;
  std::map<std::string, double> tolerances;
  std::string output_path;
};

// Defaults with every suite's sweep size and tolerance filled in.
SuiteConfig default_suite_config();

// The runnable sweeps, in execution order for "all".
const std::vector<std::string>& suite_names();

cplx parse_complex(const std::string& text);  // "re,im" or "a+bi"
std::string format_complex(cplx z);           // canonical "re,im"

std::string serialize_config(const SuiteConfig& config);
SuiteConfig parse_config_text(const std::string& text);

// One key=value assignment from a config file or a flag; unknown keys and
// malformed values throw ConfigError.
void apply_config_entry(SuiteConfig& config, const std::string& key,
                        const std::string& value);

// ---------------------------------------------------------------------------
// Reports.  One record per case; bodies are deterministic functions of
// (config, seed) so repeated runs diff clean.  Wall time is kept out of the
// body on purpose.
// ---------------------------------------------------------------------------

struct CaseRecord {
  std::string suite;
  std::string case_id;  // "<suite>/<index>", zero-padded to sort
  std::string digest;   // hash of the materialized inputs
  double defect = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string reason;  // "tolerance", "pole", or "error" when failed
};

struct SuiteReport {
  SuiteConfig config;
  std::vector<std::string> suites_run;
  std::vector<CaseRecord> records;  // sorted by case_id
  double wall_ms = 0.0;

  int failed_count() const;
  bool all_passed() const { return failed_count() == 0; }
  std::string body() const;  // records + summary, no timing
};

// Runs one named sweep ("theta", "simd", "weights", "ybe", "fusion",
// "operators", "characters", "gauge") or "all".  Cases run in parallel up
// to ELLIPTIC_FACE_THREADS; inputs are materialized per case from the seed
// beforehand, so the schedule cannot change any value.
SuiteReport run_suite(const std::string& name, const SuiteConfig& config);

// Defect evaluation guard: maps PoleError to a failed outcome with reason
// "pole" (other exceptions to "error") instead of unwinding the sweep.
struct GuardedOutcome {
  double defect = 0.0;
  std::string reason;
};
GuardedOutcome run_guarded(const std::function<double()>& eval);

// Human-auditable dump at a seed-derived (lambda, u): every admissible
// plain square by pattern tag, the listed fused tables, the normalized
// operator coefficients, and the u=0 identity block.
std::string print_tables(const SuiteConfig& config);

}  // namespace ellface
