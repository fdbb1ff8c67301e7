#pragma once

#include <string>
#include <vector>

#include "cartankit/problem.hpp"

namespace cartankit {

/// One named check. A non-finite residual means the check itself raised; extra["error"] says why.
struct CheckRecord {
  std::string name;
  json word = json::array();  // inputs: word or representation names
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  double wall_time = 0.0;  // seconds; 0 in test mode
  json extra = json::object();

  json to_json() const;
};

struct Report {
  std::string command;
  json inputs = json::array();
  Settings settings;
  std::vector<CheckRecord> checks;
  json data = json::object();  // command output (betti table, operator, ...)

  /// True iff every check passed; an empty report fails.
  bool passed() const;
  /// Stable order by check name, then by inputs.
  void sort();
  json to_json() const;
  /// One record per line, then a summary line.
  std::string jsonl() const;
  std::string table() const;
};

}  // namespace cartankit
