#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "cartankit/rep.hpp"

namespace cartankit {

using json = nlohmann::json;

inline constexpr const char* kSchema = "cartankit/1";

class ProblemError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Settings {
  std::string mode = "float";  // "float" or "exact"
  double tol = 1e-9;
  std::size_t order = 16;
  std::size_t cap = 60;
  double h = 1e-4;
  double fd_tol = 1e-6;  // round-trip tolerance; finite differences cannot reach tol
  bool test_mode = false;  // zero wall times so reports are bit-identical

  json to_json() const;
  /// Applies one override; key is one of mode, tol, order, cap, h, fd_tol, test_mode.
  void set(const std::string& key, const std::string& value);
  void merge(const json& j);
};

/// A named representation: of Tg, or of g only.
template <class T>
struct NamedRep {
  bool is_tg = true;
  TgRep<T> tg;
  GRep<T> g;
};

template <class T>
struct Problem {
  LieAlgebra<T> lie;
  std::map<std::string, NamedRep<T>> reps;
  std::map<std::string, std::vector<Vector<T>>> words;

  const NamedRep<T>& rep(const std::string& name) const;
  const TgRep<T>& tg(const std::string& name) const;
  /// A g-representation; for a Tg-representation this is F applied to it.
  GRep<T> grep(const std::string& name) const;
  const std::vector<Vector<T>>& word(const std::string& name) const;
};

/// Structure constants only (no Jacobi validation; check-lie reports violations).
template <class T>
LieAlgebra<T> parse_lie(const json& j);

/// Builds every representation and word; constructed representations resolve by name.
template <class T>
Problem<T> build_problem(const json& doc);

/// Parses a scalar from a JSON number or a "p/q" string.
template <class T>
T parse_scalar(const json& j);

/// Reads and validates the top-level document (schema tag, required sections).
json read_problem_text(const std::string& text);
json read_problem_file(const std::string& path);

template <class T>
json matrix_to_json(const Matrix<T>& m);

}  // namespace cartankit
