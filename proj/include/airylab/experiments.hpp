#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>

#include "airylab/report.hpp"

namespace airylab::harness {

enum class Experiment {
  GbeSample,
  SaoSimulate,
  TwTail,
  Rigidity,
  BlDistance,
  RateFn,
  Kpz,
  Decay,
  BlowupTimes,
  DeviationEvent,
};

enum class OutputFormat { Csv, Json };

struct ExperimentConfig {
  Experiment experiment = Experiment::GbeSample;
  std::map<std::string, std::string> params;  // experiment-specific
  std::uint64_t seed = 0;
  long long reps = 1;
  int workers = 1;
  std::string out_path = "-";  // "-" means standard output
  OutputFormat format = OutputFormat::Csv;
};

struct RunResult {
  ExperimentReport report;
  Table table;  // empty columns means no plot payload
};

// Kebab-case experiment names as used by the CLI ("gbe-sample", ...).
Experiment parse_experiment(const std::string& name);
const char* experiment_name(Experiment e);
OutputFormat parse_format(const std::string& name);  // "csv" | "json"

// Dispatch to the owning module. Replica i draws from a stream keyed by
// (seed, i) and lands its numbers at index i; aggregation then runs in
// replica order, so the payload is independent of the worker count. All
// validation failures surface as DomainError naming the offending key.
RunResult run(const ExperimentConfig& cfg);

// Serialize per format, config echo included.
void write_result(const RunResult& r, OutputFormat f, std::ostream& os);

// Run and write to cfg.out_path ("-" = stdout); IoError on open failure.
void run_to_output(const ExperimentConfig& cfg);

// Full command-line front end: one subcommand per experiment, global flags
// --seed --reps --workers --out --format --config (flat key = value file;
// command-line flags override file entries). Exit codes: 0 success, 2 usage,
// 3 numerical failure, 4 I/O.
int cli_main(int argc, const char* const* argv);

}  // namespace airylab::harness
