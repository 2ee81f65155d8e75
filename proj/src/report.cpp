#include "airylab/report.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "airylab/errors.hpp"

namespace airylab {

double ExperimentReport::estimate(const std::string& name) const {
  for (const auto& [k, v] : estimates) {
    if (k == name) return v;
  }
  throw DomainError("report: no estimate named " + name);
}

const double* ExperimentReport::find_stderr(const std::string& name) const {
  for (const auto& [k, v] : stderrs) {
    if (k == name) return &v;
  }
  return nullptr;
}

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  (void)ec;
  return std::string(buf, ptr);
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

void write_preamble(const ExperimentReport& rep, std::ostream& os) {
  os << "# schema = 1\n";
  for (const auto& [k, v] : rep.config_echo) {
    os << "# " << k << " = " << v << "\n";
  }
}

}  // namespace

void write_csv(const ExperimentReport& rep, const Table* table,
               std::ostream& os) {
  write_preamble(rep, os);
  if (table != nullptr) {
    // Scalar summaries ride along as comments so a single CSV artifact
    // carries both the per-row table and the fitted/aggregated values.
    for (const auto& [k, v] : rep.estimates) {
      os << "# estimate " << k << " = " << format_double(v);
      if (const double* se = rep.find_stderr(k)) {
        os << " (stderr " << format_double(*se) << ")";
      }
      os << "\n";
    }
    for (size_t j = 0; j < table->columns.size(); ++j) {
      if (j) os << ",";
      os << csv_escape(table->columns[j]);
    }
    os << "\n";
    for (const auto& row : table->rows) {
      for (size_t j = 0; j < table->columns.size(); ++j) {
        if (j) os << ",";
        if (j < row.size() && std::isfinite(row[j])) {
          os << format_double(row[j]);
        }
        // non-finite or missing cells stay empty (ragged rows pad right)
      }
      os << "\n";
    }
    return;
  }
  os << "name,estimate,stderr\n";
  for (const auto& [k, v] : rep.estimates) {
    os << csv_escape(k) << "," << format_double(v) << ",";
    const double* se = rep.find_stderr(k);
    if (se != nullptr) os << format_double(*se);
    os << "\n";
  }
}

void write_json(const ExperimentReport& rep, const Table* table,
                std::ostream& os) {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
  for (const auto& [k, v] : rep.config_echo) cfg[k] = v;
  j["config"] = cfg;
  j["reps"] = rep.reps;
  nlohmann::ordered_json est = nlohmann::ordered_json::object();
  for (const auto& [k, v] : rep.estimates) est[k] = v;
  j["estimates"] = est;
  nlohmann::ordered_json se = nlohmann::ordered_json::object();
  for (const auto& [k, v] : rep.stderrs) se[k] = v;
  j["stderrs"] = se;
  if (table != nullptr) {
    nlohmann::ordered_json t;
    t["columns"] = table->columns;
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& row : table->rows) {
      nlohmann::ordered_json r = nlohmann::ordered_json::array();
      for (double x : row) {
        if (std::isfinite(x)) r.push_back(x);
        else r.push_back(nullptr);
      }
      rows.push_back(r);
    }
    t["rows"] = rows;
    j["table"] = t;
  }
  j["wall_time_s"] = rep.wall_time_s;
  os << j.dump(2) << "\n";
}

std::vector<std::pair<std::string, std::string>> parse_kv_file(
    std::istream& is) {
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const char* ws = " \t\r";
    const size_t b = s.find_first_not_of(ws);
    if (b == std::string::npos) return std::string();
    const size_t e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
  };
  while (std::getline(is, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const size_t eq = t.find('=');
    if (eq == std::string::npos) {
      throw DomainError("config: missing '=' on line " +
                        std::to_string(lineno));
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string val = trim(t.substr(eq + 1));
    if (key.empty()) {
      throw DomainError("config: empty key on line " + std::to_string(lineno));
    }
    out.emplace_back(key, val);
  }
  return out;
}

}  // namespace airylab
