#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace airylab {

// Seeded Monte Carlo summary: named point estimates, standard errors for the
// statistical ones, and a full echo of the configuration that produced them.
struct ExperimentReport {
  std::vector<std::pair<std::string, double>> estimates;
  std::vector<std::pair<std::string, double>> stderrs;
  long long reps = 0;
  double wall_time_s = 0.0;
  std::vector<std::pair<std::string, std::string>> config_echo;

  double estimate(const std::string& name) const;       // throws DomainError
  const double* find_stderr(const std::string& name) const;  // nullptr if none
};

// Optional plot-ready payload attached to a report (one row per grid point).
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

// Shortest round-trip decimal form of a double.
std::string format_double(double x);

// CSV: `# key = value` config preamble, then header row and data rows,
// RFC-4180 quoting, LF line endings. The table may be null.
void write_csv(const ExperimentReport& rep, const Table* table,
               std::ostream& os);

// JSON object with a schema marker; wall_time_s is included but callers that
// compare outputs byte-for-byte should strip it first.
void write_json(const ExperimentReport& rep, const Table* table,
                std::ostream& os);

// Flat `key = value` config file: UTF-8, one pair per line, '#' comments.
std::vector<std::pair<std::string, std::string>> parse_kv_file(
    std::istream& is);

}  // namespace airylab
