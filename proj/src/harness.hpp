#ifndef ANISYM_HARNESS_HPP
#define ANISYM_HARNESS_HPP

// Experiment harness: builds problems from config files, runs the solver
// and the verification reports, and writes deterministic artifacts
// (report.json, margins.csv, trace.csv, sweep.csv) with atomic renames.
//
// Exit-status convention (shared by the library API and the CLI):
//   0 — run completed and all requested checks passed
//   1 — numerical failure or a requested check failed
//   2 — invalid configuration or theorem hypotheses violated in strict mode

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "pde.hpp"
#include "verify.hpp"
#include "young.hpp"

namespace anisym {

struct ExperimentConfig {
  ConfigValue raw;
  std::string hash;       // canonical config hash (hex)
  std::uint64_t seed = 0; // RNG seed for generated fields
  std::string run_id;     // hash xor seed unless overridden in [run]

  // Parses and validates the config tree (ValidationError on problems).
  static ExperimentConfig load(const std::string& path,
                               std::optional<std::uint64_t> seed_override);
  static ExperimentConfig from_value(ConfigValue cfg,
                                     std::optional<std::uint64_t> seed_override);

  // Builders for the pieces an experiment needs.
  GridFunction build_domain() const;          // requires [domain]
  double analytic_measure() const;            // exact |Omega| of [domain]
  YoungSpec build_young() const;              // requires [phi]
  DiscreteProblem build_problem() const;      // [domain] + [phi] + [data]
  SolveOptions solver_options() const;        // [solver]
  ComparisonOptions comparison_options() const;
};

struct RunArtifacts {
  int status = 0;           // exit-status convention above
  std::string report_path;  // report.json (empty when not written)
  std::string out_dir;
  double empirical_c = 0.0;
  bool pass = false;
};

// Full verification pipeline: solve, compare, gradient estimate, optional
// regularity table and distributional check; writes report.json +
// margins.csv + trace.csv under out_dir.  Exceptions are mapped to the
// status code and the message is recorded in report.json when possible.
RunArtifacts run_experiment(const ExperimentConfig& cfg,
                            const std::string& out_dir);

// Sweep a dotted config key across values; each run lands in
// out_dir/run_<k>/ and a summary sweep.csv (axis value, run id, empirical
// constant, pass flag, status, runtime seconds) is written at out_dir.
// Runs execute on `workers` threads; the CSV rows keep the input order.
struct SweepResult {
  int status = 0;  // worst per-run status
  std::string csv_path;
  std::vector<RunArtifacts> runs;
};

SweepResult run_sweep(const ExperimentConfig& base, const std::string& axis,
                      const std::vector<std::string>& values,
                      const std::string& out_dir, int workers);

// Evaluate a [norm] spec against a [profile] (used by the norms CLI
// subcommand); returns the value and echoes the parsed spec into JSON.
std::string norms_report(const ConfigValue& cfg);

// Atomic text write (temp file + rename within the target directory).
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace anisym

#endif  // ANISYM_HARNESS_HPP
