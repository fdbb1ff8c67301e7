#include "cartankit/problem.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <type_traits>

#include "cartankit/ce.hpp"

namespace cartankit {

json Settings::to_json() const {
  return json{{"mode", mode}, {"tol", tol}, {"order", order}, {"cap", cap}, {"h", h}, {"fdTol", fd_tol}, {"testMode", test_mode}};
}

namespace {

/// Whole-string numeric parse; trailing text is an error.
template <class N>
N parse_number(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  N v{};
  try {
    if constexpr (std::is_same_v<N, double>)
      v = std::stod(value, &used);
    else
      v = std::stol(value, &used);
  } catch (const std::logic_error&) {
    used = 0;
  }
  if (used == 0 || used != value.size()) throw ProblemError("bad value '" + value + "' for setting '" + key + "'");
  return v;
}

}  // namespace

// Validates before assigning, so a rejected value leaves the settings unchanged.
void Settings::set(const std::string& key, const std::string& value) {
  if (key == "mode") {
    if (value != "float" && value != "exact") throw ProblemError("mode must be 'float' or 'exact'");
    mode = value;
  } else if (key == "tol") {
    const double v = parse_number<double>(key, value);
    if (!(v > 0.0)) throw ProblemError("tol must be positive");
    tol = v;
  } else if (key == "order") {
    const long v = parse_number<long>(key, value);
    if (v < 1) throw ProblemError("order must be at least 1");
    order = static_cast<std::size_t>(v);
  } else if (key == "cap") {
    const long v = parse_number<long>(key, value);
    if (v < 0) throw ProblemError("cap must be nonnegative");
    cap = static_cast<std::size_t>(v);
  } else if (key == "h") {
    const double v = parse_number<double>(key, value);
    if (!(v > 0.0)) throw ProblemError("h must be positive");
    h = v;
  } else if (key == "fd_tol" || key == "fdTol") {
    const double v = parse_number<double>(key, value);
    if (!(v > 0.0)) throw ProblemError("fd_tol must be positive");
    fd_tol = v;
  } else if (key == "test_mode" || key == "testMode") {
    if (value != "1" && value != "0" && value != "true" && value != "false")
      throw ProblemError("test_mode must be true or false");
    test_mode = value == "1" || value == "true";
  } else {
    throw ProblemError("unknown setting '" + key + "'");
  }
}

void Settings::merge(const json& j) {
  if (!j.is_object()) throw ProblemError("settings must be an object");
  for (auto& [k, v] : j.items()) set(k, v.is_string() ? v.get<std::string>() : v.dump());
}

json read_problem_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ProblemError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ProblemError("problem file must be a JSON object");
  if (!doc.contains("schema") || doc["schema"] != kSchema)
    throw ProblemError(std::string("problem file must declare \"schema\": \"") + kSchema + "\"");
  if (!doc.contains("lieAlgebra")) throw ProblemError("problem file has no lieAlgebra");
  return doc;
}

json read_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ProblemError("cannot open problem file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return read_problem_text(ss.str());
}

template <class T>
T parse_scalar(const json& j) {
  if (j.is_string()) return Field<T>::parse(j.get<std::string>());
  if (j.is_number_integer()) return T(j.get<long>());
  if (j.is_number_float()) {
    if constexpr (Field<T>::exact)
      return Field<T>::parse(j.dump());  // shortest decimal form, read exactly
    else
      return j.get<double>();
  }
  throw ProblemError("expected a number or a \"p/q\" string, got " + j.dump());
}

template <class T>
json matrix_to_json(const Matrix<T>& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if constexpr (Field<T>::exact)
        row.push_back(m(r, c).get_str());
      else
        row.push_back(m(r, c));
    }
    rows.push_back(row);
  }
  return rows;
}

namespace {

std::size_t as_index(const json& j, const char* what) {
  if (!j.is_number_integer() || j.get<long>() < 0) throw ProblemError(std::string(what) + " must be a nonnegative integer");
  return j.get<std::size_t>();
}

int parse_degree(const std::string& s) {
  try {
    std::size_t used = 0;
    int d = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return d;
  } catch (const std::logic_error&) {
    throw ProblemError("degree key '" + s + "' is not an integer");
  }
}

template <class T>
Matrix<T> parse_matrix(const json& j, std::size_t rows, std::size_t cols, const std::string& where) {
  Matrix<T> m(rows, cols);
  if (!j.is_array() || j.size() != rows)
    throw ProblemError(where + ": expected " + std::to_string(rows) + " rows");
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols)
      throw ProblemError(where + ": row " + std::to_string(r) + " must have " + std::to_string(cols) + " entries");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = parse_scalar<T>(j[r][c]);
  }
  return m;
}

GradedVectorSpace parse_space(const json& j) {
  if (!j.is_object()) throw ProblemError("degrees must be an object mapping degree to dimension");
  std::map<int, std::size_t> dims;
  for (auto& [k, v] : j.items()) dims[parse_degree(k)] = as_index(v, "dimension");
  return GradedVectorSpace(dims);
}

/// Operator blocks keyed by source degree.
template <class T>
GradedOperator<T> parse_operator(const json& j, const GradedVectorSpace& v, int degree, const std::string& where) {
  GradedOperator<T> op(v, v, degree);
  if (j.is_null()) return op;
  if (!j.is_object()) throw ProblemError(where + ": operator must map source degree to a block");
  for (auto& [k, blk] : j.items()) {
    const int p = parse_degree(k);
    if (v.dim(p) == 0 || v.dim(p + degree) == 0) {
      bool all_empty = blk.is_array() && (blk.empty() || (blk[0].is_array() && blk[0].empty()));
      if (all_empty) continue;
      throw ProblemError(where + ": block at degree " + k + " has no room in the space");
    }
    op.set_block(p, parse_matrix<T>(blk, v.dim(p + degree), v.dim(p), where + "[" + k + "]"));
  }
  return op;
}

template <class T>
std::vector<GradedOperator<T>> parse_family(const json& j, const GradedVectorSpace& v, int degree, std::size_t n,
                                            const std::string& where) {
  std::vector<GradedOperator<T>> out;
  if (j.is_null()) {
    for (std::size_t i = 0; i < n; ++i) out.emplace_back(v, v, degree);
    return out;
  }
  if (!j.is_array() || j.size() != n)
    throw ProblemError(where + ": expected one operator per basis element (" + std::to_string(n) + ")");
  for (std::size_t i = 0; i < n; ++i)
    out.push_back(parse_operator<T>(j[i], v, degree, where + "[" + std::to_string(i) + "]"));
  return out;
}

const json& get_or_null(const json& j, const char* key) {
  static const json null_value;
  auto it = j.find(key);
  return it == j.end() ? null_value : *it;
}

template <class T>
class RepBuilder {
 public:
  RepBuilder(const json& specs, const LieAlgebra<T>& g) : specs_(specs), g_(g) {}

  std::map<std::string, NamedRep<T>> build_all() {
    if (!specs_.is_null() && !specs_.is_object()) throw ProblemError("representations must be an object");
    if (specs_.is_object())
      for (auto& [name, spec] : specs_.items()) (void)build(name);
    return done_;
  }

 private:
  const NamedRep<T>& build(const std::string& name) {
    if (auto it = done_.find(name); it != done_.end()) return it->second;
    if (!specs_.is_object() || !specs_.contains(name)) throw ProblemError("unknown representation '" + name + "'");
    if (!active_.insert(name).second) throw ProblemError("representation '" + name + "' depends on itself");
    NamedRep<T> r = make(name, specs_.at(name));
    active_.erase(name);
    return done_.emplace(name, std::move(r)).first->second;
  }

  GRep<T> as_g(const std::string& name) {
    const auto& r = build(name);
    return r.is_tg ? forgetful_F(r.tg) : r.g;
  }
  const TgRep<T>& as_tg(const std::string& name, const std::string& user) {
    const auto& r = build(name);
    if (!r.is_tg) throw ProblemError("'" + user + "' needs a Tg-representation but '" + name + "' is a g-representation");
    return r.tg;
  }

  NamedRep<T> make(const std::string& name, const json& spec) {
    if (!spec.is_object()) throw ProblemError("representation '" + name + "' must be an object");
    const std::size_t n = g_.dim();
    NamedRep<T> out;
    if (spec.contains("construct")) {
      const std::string kind = spec["construct"].get<std::string>();
      const json& of = get_or_null(spec, "of");
      auto single = [&]() {
        if (!of.is_string()) throw ProblemError("'" + name + "': 'of' must name one representation");
        return of.get<std::string>();
      };
      if (kind == "trivial") {
        GradedVectorSpace v = spec.contains("degrees") ? parse_space(spec["degrees"]) : GradedVectorSpace::unit();
        const std::string k = spec.value("kind", "tg");
        if (k == "tg") {
          out.tg = trivial_rep(g_, v);
        } else if (k == "g") {
          out.is_tg = false;
          out.g = trivial_grep(g_, v);
        } else {
          throw ProblemError("'" + name + "': kind must be 'tg' or 'g'");
        }
      } else if (kind == "adjoint") {
        out.is_tg = false;
        out.g = adjoint_grep(g_);
      } else if (kind == "U") {
        out.tg = functor_U(as_g(single()));
      } else if (kind == "E") {
        out.tg = functor_E(as_g(single()));
      } else if (kind == "F") {
        out.is_tg = false;
        out.g = forgetful_F(as_tg(single(), name));
      } else if (kind == "dual") {
        out.tg = dual_rep(as_tg(single(), name));
      } else if (kind == "tensor") {
        if (!of.is_array() || of.size() != 2) throw ProblemError("'" + name + "': tensor needs 'of': [a, b]");
        const auto a = of[0].get<std::string>(), b = of[1].get<std::string>();
        const bool ta = build(a).is_tg, tb = build(b).is_tg;
        if (ta != tb) throw ProblemError("'" + name + "': cannot tensor a Tg-representation with a g-representation");
        if (ta) {
          out.tg = tensor_rep(build(a).tg, build(b).tg);
        } else {
          out.is_tg = false;
          out.g = tensor_grep(build(a).g, build(b).g);
        }
      } else {
        throw ProblemError("'" + name + "': unknown construction '" + kind + "'");
      }
      return out;
    }
    if (!spec.contains("degrees")) throw ProblemError("representation '" + name + "' needs 'degrees' or 'construct'");
    const auto v = parse_space(spec["degrees"]);
    const std::string kind = spec.value("kind", "tg");
    auto delta = parse_operator<T>(get_or_null(spec, "delta"), v, 1, name + ".delta");
    if (kind == "tg") {
      out.tg = TgRep<T>{g_, {v, delta}, parse_family<T>(get_or_null(spec, "L"), v, 0, n, name + ".L"),
                        parse_family<T>(get_or_null(spec, "B"), v, -1, n, name + ".B")};
    } else if (kind == "g") {
      out.is_tg = false;
      out.g = GRep<T>{g_, {v, delta}, parse_family<T>(get_or_null(spec, "R"), v, 0, n, name + ".R")};
    } else {
      throw ProblemError("'" + name + "': kind must be 'tg' or 'g'");
    }
    return out;
  }

  const json& specs_;
  const LieAlgebra<T>& g_;
  std::map<std::string, NamedRep<T>> done_;
  std::set<std::string> active_;
};

template <class T>
LieAlgebra<T> from_fixture(const std::string& name, std::size_t dim) {
  LieAlgebra<Rational> g;
  if (name == "abelian")
    g = fixtures::abelian(dim);
  else if (name == "heisenberg" || name == "h3")
    g = fixtures::heisenberg();
  else if (name == "sl2")
    g = fixtures::sl2();
  else if (name == "su2")
    g = fixtures::su2();
  else
    throw ProblemError("unknown Lie algebra fixture '" + name + "'");
  if constexpr (Field<T>::exact)
    return g;
  else
    return g.convert<double>();
}

}  // namespace

template <class T>
LieAlgebra<T> parse_lie(const json& j) {
  if (!j.is_object()) throw ProblemError("lieAlgebra must be an object");
  if (j.contains("fixture"))
    return from_fixture<T>(j["fixture"].get<std::string>(), j.contains("dim") ? as_index(j["dim"], "dim") : 3);
  if (!j.contains("dim")) throw ProblemError("lieAlgebra needs 'dim' or 'fixture'");
  const std::size_t n = as_index(j["dim"], "dim");
  std::vector<std::string> labels;
  if (j.contains("labels")) labels = j["labels"].get<std::vector<std::string>>();
  if (!labels.empty() && labels.size() != n) throw ProblemError("labels must list one name per basis element");
  LieAlgebra<T> g(n, labels);
  if (j.contains("brackets")) {
    for (auto& b : j["brackets"]) {
      const std::size_t i = as_index(b.at("i"), "bracket index i"), jj = as_index(b.at("j"), "bracket index j");
      if (i >= jj) throw ProblemError("brackets are given for i < j only");
      if (jj >= n) throw ProblemError("bracket index out of range");
      for (auto& [k, v] : b.at("coeffs").items()) {
        const std::size_t kk = static_cast<std::size_t>(parse_degree(k));
        if (kk >= n) throw ProblemError("bracket coefficient index out of range");
        g.set_bracket(i, jj, kk, parse_scalar<T>(v));
      }
    }
  }
  if (j.contains("constants")) {
    // Raw entries with no antisymmetric completion.
    for (auto& e : j["constants"]) {
      const std::size_t i = as_index(e.at("i"), "i"), jj = as_index(e.at("j"), "j"), k = as_index(e.at("k"), "k");
      if (i >= n || jj >= n || k >= n) throw ProblemError("structure constant index out of range");
      g.set_raw(i, jj, k, parse_scalar<T>(e.at("value")));
    }
  }
  return g;
}

template <class T>
const NamedRep<T>& Problem<T>::rep(const std::string& name) const {
  auto it = reps.find(name);
  if (it == reps.end()) throw ProblemError("unknown representation '" + name + "'");
  return it->second;
}

template <class T>
const TgRep<T>& Problem<T>::tg(const std::string& name) const {
  const auto& r = rep(name);
  if (!r.is_tg) throw ProblemError("'" + name + "' is a g-representation; a Tg-representation is required");
  return r.tg;
}

template <class T>
GRep<T> Problem<T>::grep(const std::string& name) const {
  const auto& r = rep(name);
  return r.is_tg ? forgetful_F(r.tg) : r.g;
}

template <class T>
const std::vector<Vector<T>>& Problem<T>::word(const std::string& name) const {
  auto it = words.find(name);
  if (it == words.end()) throw ProblemError("unknown word '" + name + "'");
  return it->second;
}

template <class T>
Problem<T> build_problem(const json& doc) {
  Problem<T> p;
  p.lie = parse_lie<T>(doc.at("lieAlgebra"));
  const std::size_t n = p.lie.dim();
  p.reps = RepBuilder<T>(get_or_null(doc, "representations"), p.lie).build_all();
  const json& words = get_or_null(doc, "words");
  if (!words.is_null()) {
    if (!words.is_object()) throw ProblemError("words must be an object");
    for (auto& [name, letters] : words.items()) {
      if (!letters.is_array()) throw ProblemError("word '" + name + "' must be a list of letters");
      std::vector<Vector<T>> w;
      for (auto& l : letters) {
        if (l.is_string()) {
          const auto& labels = p.lie.labels();
          auto it = std::find(labels.begin(), labels.end(), l.template get<std::string>());
          if (it == labels.end()) throw ProblemError("word '" + name + "': unknown basis label " + l.dump());
          w.push_back(p.lie.basis_vector(static_cast<std::size_t>(it - labels.begin())));
        } else if (l.is_array() && l.size() == n) {
          Vector<T> v;
          for (auto& x : l) v.push_back(parse_scalar<T>(x));
          w.push_back(v);
        } else {
          throw ProblemError("word '" + name + "': a letter is a basis label or " + std::to_string(n) + " coordinates");
        }
      }
      p.words[name] = std::move(w);
    }
  }
  return p;
}

template double parse_scalar<double>(const json&);
template Rational parse_scalar<Rational>(const json&);
template json matrix_to_json<double>(const Matrix<double>&);
template json matrix_to_json<Rational>(const Matrix<Rational>&);
template LieAlgebra<double> parse_lie<double>(const json&);
template LieAlgebra<Rational> parse_lie<Rational>(const json&);
template Problem<double> build_problem<double>(const json&);
template Problem<Rational> build_problem<Rational>(const json&);
template struct Problem<double>;
template struct Problem<Rational>;

}  // namespace cartankit
