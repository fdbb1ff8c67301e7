#include "cartankit/report.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace cartankit {

namespace {

json finite_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

std::string fmt_double(double x) {
  if (!std::isfinite(x)) return "error";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

std::string word_text(const json& w) {
  if (w.is_string()) return w.get<std::string>();
  if (!w.is_array()) return w.dump();
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += ",";
    s += word_text(w[i]);
  }
  return s;
}

void pad(std::ostringstream& os, const std::string& s, std::size_t width, bool right = false) {
  if (right) os << std::string(width - std::min(width, s.size()), ' ') << s;
  else os << s << std::string(width - std::min(width, s.size()), ' ');
}

}  // namespace

json CheckRecord::to_json() const {
  json j{{"check", name},          {"word", word}, {"residual", finite_or_null(residual)},
         {"tolerance", tolerance}, {"pass", pass}, {"wallTime", wall_time}};
  if (!extra.empty()) j["extra"] = extra;
  return j;
}

bool Report::passed() const {
  if (checks.empty()) return false;
  return std::all_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.pass; });
}

void Report::sort() {
  std::stable_sort(checks.begin(), checks.end(), [](const CheckRecord& a, const CheckRecord& b) {
    if (a.name != b.name) return a.name < b.name;
    return a.word.dump() < b.word.dump();
  });
}

json Report::to_json() const {
  json cs = json::array();
  std::size_t ok = 0;
  for (auto& c : checks) {
    cs.push_back(c.to_json());
    ok += c.pass;
  }
  return json{{"schema", kSchema},
              {"command", command},
              {"inputs", inputs},
              {"settings", settings.to_json()},
              {"checks", cs},
              {"data", data},
              {"summary", {{"total", checks.size()}, {"passed", ok}, {"failed", checks.size() - ok}, {"pass", passed()}}}};
}

std::string Report::jsonl() const {
  std::string out;
  for (auto& c : checks) out += c.to_json().dump() + "\n";
  const json full = to_json();
  json tail{{"schema", kSchema}, {"command", command}, {"inputs", inputs}, {"settings", full["settings"]},
            {"summary", full["summary"]}};
  if (!data.empty()) tail["data"] = data;
  out += tail.dump() + "\n";
  return out;
}

std::string Report::table() const {
  std::vector<std::array<std::string, 5>> rows;
  rows.push_back({"check", "word", "residual", "tolerance", "result"});
  for (auto& c : checks)
    rows.push_back({c.name, word_text(c.word), fmt_double(c.residual), fmt_double(c.tolerance), c.pass ? "PASS" : "FAIL"});
  std::array<std::size_t, 5> w{};
  for (auto& r : rows)
    for (std::size_t i = 0; i < 5; ++i) w[i] = std::max(w[i], r[i].size());
  std::ostringstream os;
  os << command << " (mode " << settings.mode << ")\n";
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t i = 0; i < 5; ++i) {
      if (i + 1 < 5) {
        pad(os, rows[r][i], w[i], i == 2 || i == 3);
        os << "  ";
      } else {
        os << rows[r][i];
      }
    }
    os << "\n";
    if (r == 0) os << std::string(w[0] + w[1] + w[2] + w[3] + w[4] + 8, '-') << "\n";
  }
  for (auto& c : checks)
    if (c.extra.contains("error")) os << "  " << c.name << ": " << c.extra["error"].get<std::string>() << "\n";
  if (data.contains("betti")) {
    os << "\ndegree  dim\n";
    for (auto& e : data["betti"]) {
      pad(os, e["degree"].dump(), 6, true);
      os << "  " << e["dim"].dump() << "\n";
    }
  }
  if (data.contains("operator")) {
    os << "\noperator (degree " << data.value("degree", 0) << ")\n";
    for (auto& row : data["operator"]) {
      for (std::size_t i = 0; i < row.size(); ++i) os << "  " << (row[i].is_string() ? row[i].get<std::string>() : row[i].dump());
      os << "\n";
    }
  }
  std::size_t ok = 0;
  for (auto& c : checks) ok += c.pass;
  os << "\n" << ok << "/" << checks.size() << " checks passed: " << (passed() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

}  // namespace cartankit
