#include "cartankit/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <optional>
#include <set>

#include "cartankit/ce.hpp"
#include "cartankit/cubical.hpp"

namespace cartankit {

const std::vector<CommandInfo>& command_table() {
  static const std::vector<CommandInfo> t = {
      {"check-lie", "", "antisymmetry and Jacobi of the structure constants; Tg self-check"},
      {"verify-cartan", "REP", "Cartan relations (Tg) or bracket/chain-map relations (g)"},
      {"ce", "REP [chain|cochain] [EXPECTED]", "CE complex: d^2, Leibniz, (co)homology dims"},
      {"integrate", "REP WORD [series|quadrature|both]", "integral of the representation form over a word"},
      {"verify-module", "REP [WORD...]", "Stokes, equivariance, thin, square, EZ and mu_p checks"},
      {"roundtrip", "REP", "differentiating the integrated module recovers L and i"},
      {"adjunction", "GREP TGREP", "Hom_Tg(U(V),W) against Hom_g(V,F(W))"},
      {"cubical", "REP WORD", "alternation, subdivision, cube decomposition, P_k reduction"},
  };
  return t;
}

Settings effective_settings(const json& doc) {
  Settings s;
  if (doc.contains("settings")) s.merge(doc["settings"]);
  if (const char* env = std::getenv("CARTANKIT_MODE"); env && *env) {
    try {
      s.set("mode", env);
    } catch (const ProblemError&) {
      throw ProblemError(std::string("CARTANKIT_MODE must be 'exact' or 'float', got '") + env + "'");
    }
  }
  return s;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

class Suite {
 public:
  Suite(Report& r, bool test_mode) : r_(r), test_mode_(test_mode) {}

  /// f returns the residual and may annotate extra; exceptions become failing records.
  void run(const std::string& name, json word, double tol, const std::function<double(json&)>& f) {
    CheckRecord c;
    c.name = name;
    c.word = std::move(word);
    c.tolerance = tol;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.residual = f(c.extra);
      c.pass = std::isfinite(c.residual) && c.residual <= tol;
    } catch (const std::exception& e) {
      c.residual = kInf;
      c.pass = false;
      c.extra["error"] = e.what();
    }
    if (!test_mode_) c.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r_.checks.push_back(std::move(c));
  }

  /// Residual 0 if the condition holds, 1 otherwise.
  void require(const std::string& name, json word, const std::function<bool(json&)>& f) {
    run(name, std::move(word), 0.0, [&](json& x) { return f(x) ? 0.0 : 1.0; });
  }

 private:
  Report& r_;
  bool test_mode_;
};

template <class T>
struct Ctx {
  const Problem<T>& p;
  const Settings& s;
  Suite& suite;
  Report& report;
  /// Tolerance for identities that hold exactly: 0 in exact mode.
  double itol() const { return Field<T>::exact ? 0.0 : s.tol; }
};

void need_args(const std::vector<std::string>& a, std::size_t lo, std::size_t hi, const std::string& cmd) {
  if (a.size() < lo || a.size() > hi) {
    for (auto& c : command_table())
      if (c.name == cmd) throw UsageError("usage: " + cmd + " " + c.args);
    throw UsageError("bad arguments to " + cmd);
  }
}

template <class T>
double mag(const GradedOperator<T>& f) {
  return magnitude(f.max_abs());
}

/// phi_1(A) = sum A^m / (m+1)!, the top-right block of exp [[A, 1], [0, 0]].
template <class T>
Matrix<T> phi1(const Matrix<T>& a) {
  const std::size_t n = a.rows();
  Matrix<T> aug(2 * n, 2 * n);
  aug.set_block(0, 0, a);
  for (std::size_t i = 0; i < n; ++i) aug(i, n + i) = T(1);
  return LinAlg<T>::expm(aug).block(0, n, n, n);
}

template <class T>
void cmd_check_lie(Ctx<T>& c) {
  const auto jr = check_jacobi(c.p.lie);
  c.suite.run("lie.antisymmetry", json::array(), c.itol(), [&](json&) { return jr.antisymmetry; });
  c.suite.run("lie.jacobi", json::array(), c.itol(), [&](json&) { return jr.jacobi; });
  if (!jr.ok(c.itol())) return;
  const TgStructure<T> tg(c.p.lie, c.itol());
  const auto& r = tg.residuals();
  c.suite.run("tg.graded_antisymmetry", json::array(), c.itol(), [&](json&) { return r.graded_antisymmetry; });
  c.suite.run("tg.graded_jacobi", json::array(), c.itol(), [&](json&) { return r.graded_jacobi; });
  c.suite.run("tg.d_squared", json::array(), c.itol(), [&](json&) { return r.d_squared; });
  c.suite.run("tg.derivation", json::array(), c.itol(), [&](json&) { return r.derivation; });
}

template <class T>
void cmd_verify_cartan(Ctx<T>& c, const std::string& name) {
  const auto& nr = c.p.rep(name);
  const json w{name};
  if (nr.is_tg) {
    const auto cr = check_cartan(nr.tg);
    c.suite.require("cartan.shape", w, [&](json&) { return cr.shape == 0.0; });
    c.suite.run("cartan.L_L", w, c.itol(), [&](json&) { return cr.ll; });
    c.suite.run("cartan.L_i", w, c.itol(), [&](json&) { return cr.lb; });
    c.suite.run("cartan.i_i", w, c.itol(), [&](json&) { return cr.bb; });
    c.suite.run("cartan.d_i", w, c.itol(), [&](json&) { return cr.dbl; });
    c.suite.run("complex.d_squared", w, c.itol(), [&](json&) { return magnitude(square_residual(nr.tg.complex)); });
  } else {
    const auto gr = check_grep(nr.g);
    c.suite.require("grep.shape", w, [&](json&) { return gr.shape == 0.0; });
    c.suite.run("grep.bracket", w, c.itol(), [&](json&) { return gr.hom; });
    c.suite.run("grep.chain_map", w, c.itol(), [&](json&) { return gr.chain; });
    c.suite.run("complex.d_squared", w, c.itol(), [&](json&) { return gr.d2; });
  }
}

std::vector<long> parse_expected(const std::string& s) {
  std::vector<long> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t next = s.find(',', pos);
    const std::string tok = s.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    try {
      std::size_t used = 0;
      out.push_back(std::stol(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::logic_error&) {
      throw UsageError("expected dimensions must be a comma-separated list of integers, got '" + s + "'");
    }
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return out;
}

template <class T>
void cmd_ce(Ctx<T>& c, const std::string& name, const std::string& flavor, const std::string& expected) {
  if (flavor != "chain" && flavor != "cochain") throw UsageError("flavor must be 'chain' or 'cochain'");
  const bool chain = flavor == "chain";
  const GRep<T> v = c.p.grep(name);
  const json w{name};
  const auto ce = chain ? ce_chain(v) : ce_cochain(v);
  c.suite.run("ce.d_squared", w, c.itol(), [&](json&) { return magnitude(square_residual(ce.complex)); });
  if (!chain) c.suite.run("ce.leibniz", w, c.itol(), [&](json&) { return magnitude(T(leibniz_check(v))); });
  c.report.data["flavor"] = flavor;
  c.suite.run("ce.betti", w, 0.0, [&](json& x) {
    const auto dims = cohomology_dims(ce.complex, c.s.tol);
    json table = json::array();
    for (auto& [deg, d] : dims) table.push_back({{"degree", deg}, {"dim", d}});
    c.report.data["betti"] = table;
    if (expected.empty()) return 0.0;
    // Listed from degree 0 outward: 0,1,2,... (cochain) or 0,-1,-2,... (chain).
    const auto want = parse_expected(expected);
    x["expected"] = want;
    std::set<int> degs;
    for (auto& [deg, d] : dims) degs.insert(deg);
    for (std::size_t i = 0; i < want.size(); ++i) degs.insert(chain ? -static_cast<int>(i) : static_cast<int>(i));
    double diff = 0.0;
    for (int deg : degs) {
      const long idx = chain ? -deg : deg;
      const long expect = idx >= 0 && idx < static_cast<long>(want.size()) ? want[idx] : 0;
      const auto it = dims.find(deg);
      const long got = it == dims.end() ? 0 : static_cast<long>(it->second);
      diff += std::abs(static_cast<double>(got - expect));
    }
    return diff;
  });
}

template <class T>
void cmd_integrate(Ctx<T>& c, const std::string& rep, const std::string& word, const std::string& method) {
  if (method != "series" && method != "quadrature" && method != "both")
    throw UsageError("method must be 'series', 'quadrature' or 'both'");
  const RepForm<T> form(c.p.tg(rep));
  const auto& letters = c.p.word(word);
  const auto w = ExpWord<T>::word(letters);
  const json in{rep, word};
  std::optional<GradedOperator<T>> ser, quad;
  if (method != "quadrature")
    c.suite.run("integrate.series", in, 0.0, [&](json& x) {
      SeriesInfo info;
      ser = integrate_series(form, letters, c.s.tol, c.s.cap, &info);
      x["degree"] = info.degree;
      return 0.0;
    });
  if (method != "series")
    c.suite.run("integrate.quadrature", in, c.itol(), [&](json& x) {
      quad = integrate_quadrature(form, w, c.s.order);
      if constexpr (Field<T>::exact) {
        return 0.0;
      } else {
        // Self-convergence against a higher order.
        x["referenceOrder"] = c.s.order + 8;
        return mag(GradedOperator<T>(*quad - integrate_quadrature(form, w, c.s.order + 8)));
      }
    });
  if (ser && quad) c.suite.run("integrate.cross", in, c.itol(), [&](json&) { return mag(GradedOperator<T>(*ser - *quad)); });
  const auto& result = ser ? ser : quad;
  if (letters.size() == 1 && result)
    c.suite.run("integrate.closed_form", in, c.itol(), [&](json&) {
      const Matrix<T> expect = form.B(letters[0]) * phi1(form.A(letters[0]));
      return magnitude((result->matrix() - expect).max_abs());
    });
  if (result) {
    c.report.data["operator"] = matrix_to_json(result->matrix());
    c.report.data["degree"] = result->degree();
  }
}

template <class T>
void cmd_verify_module(Ctx<T>& c, const std::string& rep, std::vector<std::string> words) {
  const RepForm<T> form(c.p.tg(rep));
  const std::size_t order = c.s.order;
  if (words.empty())
    for (auto& [name, l] : c.p.words) words.push_back(name);
  auto I = [&](const ExpWord<T>& w) { return integrate_quadrature(form, w, order); };
  for (auto& name : words) {
    const auto& letters = c.p.word(name);
    const auto w = ExpWord<T>::word(letters);
    const json in{rep, name};
    if (letters.empty()) continue;
    c.suite.run("dg", in, c.itol(), [&](json&) { return dg_module_check(form, w, order); });
    c.suite.run("equivariance", in, c.itol(), [&](json&) {
      const auto g = ExpWord<T>::point({letters.back()});
      return mag(GradedOperator<T>(I(w.left_translate(g)) - I(g) * I(w)));
    });
    const auto& x = letters.front();
    const auto xx = ExpWord<T>::word({x, x});
    c.suite.run("thin.repeat", in, c.itol(), [&](json&) { return mag(I(xx)); });
    c.suite.require("thin.repeat.rank", in, [&](json&) { return thinness_check(form, xx, 3, c.s.tol); });
    c.suite.run("thin.constant", in, c.itol(), [&](json&) {
      ExpWord<T> cst(1);
      cst.push_back({x, T(1), {T(0)}});
      return mag(I(cst));
    });
    c.suite.run("square", in, c.itol(), [&](json&) {
      const auto a = ChainCombination<T>::single(ExpWord<T>::word({x}));
      return mag(integrate_chain(form, ez_product(a, a), order));
    });
  }
  for (auto& u : words)
    for (auto& v : words) {
      const auto& lu = c.p.word(u);
      const auto& lv = c.p.word(v);
      if (lu.empty() || lv.empty() || lu.size() + lv.size() > 3) continue;
      c.suite.run("ez", json{rep, u, v}, c.itol(), [&](json&) {
        const auto a = ChainCombination<T>::single(ExpWord<T>::word(lu));
        const auto b = ChainCombination<T>::single(ExpWord<T>::word(lv));
        return mag(GradedOperator<T>(integrate_chain(form, ez_product(a, b), order) -
                                     integrate_chain(form, a, order) * integrate_chain(form, b, order)));
      });
    }
  // Pointwise, at random samples; always in floating point.
  const RepForm<double> fd(convert_rep<double>(form.rep()));
  unsigned seed = 7;
  for (auto [pp, k] : std::vector<std::pair<std::size_t, std::size_t>>{{2, 1}, {2, 2}, {3, 2}}) {
    c.suite.run("mu_p", json{rep, "p=" + std::to_string(pp) + ",k=" + std::to_string(k)}, c.s.tol, [&](json&) {
      return mu_p_check(fd, pp, k, random_mu_samples(fd.lie_dim(), pp, k, 5, seed++));
    });
  }
}

template <class T>
void cmd_roundtrip(Ctx<T>& c, const std::string& rep) {
  const RepForm<double> fd(convert_rep<double>(c.p.tg(rep)));
  const json in{rep};
  RoundtripReport rt;
  c.suite.run("roundtrip.error", in, c.s.fd_tol, [&](json& x) {
    rt = roundtrip_check(fd, c.s.h, c.s.fd_tol, c.s.order);
    x["h"] = c.s.h;
    x["errorHalfStep"] = rt.error_h2;
    return rt.error_h;
  });
  // Second order: halving h divides the error by about 4.
  c.suite.run("roundtrip.order", in, 0.0, [&](json& x) {
    x["ratio"] = rt.ratio;
    if (rt.error_h < 1e-13) return 0.0;
    return std::max(0.0, 3.5 - rt.ratio);
  });
}

template <class T>
void cmd_adjunction(Ctx<T>& c, const std::string& gname, const std::string& tname) {
  const GRep<T> v = c.p.grep(gname);
  const auto& w = c.p.tg(tname);
  const json in{gname, tname};
  AdjunctionReport ar;
  c.suite.require("adjunction.precondition", in, [&](json&) {
    ar = adjunction_check(v, w, c.s.tol);
    return ar.precondition;
  });
  if (!ar.precondition) return;
  c.suite.run("adjunction.dimensions", in, 0.0, [&](json& x) {
    x["dimHomTg"] = ar.dim_tg;
    x["dimHomG"] = ar.dim_g;
    return std::abs(static_cast<double>(ar.dim_tg) - static_cast<double>(ar.dim_g));
  });
  c.suite.run("adjunction.restriction_rank", in, 0.0, [&](json& x) {
    x["rank"] = ar.restriction_rank;
    return std::abs(static_cast<double>(ar.restriction_rank) - static_cast<double>(ar.dim_tg));
  });
  c.suite.run("adjunction.reconstruction", in, c.itol(), [&](json&) { return ar.reconstruction; });
}

template <class T>
void cmd_cubical(Ctx<T>& c, const std::string& rep, const std::string& word) {
  const RepForm<T> form(c.p.tg(rep));
  const auto& letters = c.p.word(word);
  if (letters.empty()) throw UsageError("cubical needs a word of length at least 1");
  const auto theta = ExpWord<T>::word(letters);
  const std::size_t k = letters.size(), order = c.s.order;
  const json in{rep, word};
  // Scalar cochain: the largest entry of the integral, so the checks are not vacuous.
  std::size_t br = 0, bc = 0;
  c.suite.run("cubical.entry", in, 0.0, [&](json& x) {
    const auto full = integrate_quadrature(form, theta, order);
    for (std::size_t r = 0; r < form.N(); ++r)
      for (std::size_t col = 0; col < form.N(); ++col)
        if (magnitude(full(r, col)) > magnitude(full(br, bc))) br = r, bc = col;
    x["row"] = br;
    x["col"] = bc;
    x["value"] = magnitude(full(br, bc));
    return 0.0;
  });
  const auto cochain = tau_map(simplex_integral_cochain(form, br, bc, order));
  c.suite.run("cubical.alternating", in, c.itol(), [&](json&) { return alternating_check(cochain, theta); });
  c.suite.run("cubical.subdivision", in, c.itol(), [&](json& x) {
    double worst = 0.0;
    json grid = json::array();
    for (long q = 0; q <= 4; ++q) {
      const T s = Field<T>::from_ratio(q, 4);
      grid.push_back(magnitude(s));
      for (std::size_t i = 0; i < k; ++i) worst = std::max(worst, subdivision_invariance_check(cochain, theta, i, s));
    }
    x["grid"] = grid;
    return worst;
  });
  c.suite.run("cubical.decomposition", in, c.itol(), [&](json&) { return cube_decomposition_check(form, theta, order); });
  PkReport pk;
  c.suite.run("cubical.pk.sum", in, c.itol(), [&](json& x) {
    pk = pk_reduction_check(form, theta, order, c.s.tol);
    x["identityTermError"] = pk.identity_term_error;
    return pk.residual;
  });
  c.suite.run("cubical.pk.other_terms", in, c.itol(), [&](json&) { return pk.max_other_term; });
  c.suite.require("cubical.pk.thin", in, [&](json&) { return pk.all_thin; });
}

template <class T>
void dispatch(const json& doc, const Settings& s, const std::string& cmd, const std::vector<std::string>& a,
              Report& report) {
  const Problem<T> p = build_problem<T>(doc);
  Suite suite(report, s.test_mode);
  Ctx<T> c{p, s, suite, report};
  if (cmd == "check-lie") {
    need_args(a, 0, 0, cmd);
    cmd_check_lie(c);
  } else if (cmd == "verify-cartan") {
    need_args(a, 1, 1, cmd);
    cmd_verify_cartan(c, a[0]);
  } else if (cmd == "ce") {
    need_args(a, 1, 3, cmd);
    cmd_ce(c, a[0], a.size() > 1 ? a[1] : "cochain", a.size() > 2 ? a[2] : "");
  } else if (cmd == "integrate") {
    need_args(a, 2, 3, cmd);
    cmd_integrate(c, a[0], a[1], a.size() > 2 ? a[2] : "both");
  } else if (cmd == "verify-module") {
    need_args(a, 1, 64, cmd);
    cmd_verify_module(c, a[0], std::vector<std::string>(a.begin() + 1, a.end()));
  } else if (cmd == "roundtrip") {
    need_args(a, 1, 1, cmd);
    cmd_roundtrip(c, a[0]);
  } else if (cmd == "adjunction") {
    need_args(a, 2, 2, cmd);
    cmd_adjunction(c, a[0], a[1]);
  } else if (cmd == "cubical") {
    need_args(a, 2, 2, cmd);
    cmd_cubical(c, a[0], a[1]);
  } else {
    throw UsageError("unknown command '" + cmd + "'");
  }
}

}  // namespace

Report run_command(const json& doc, const Settings& settings, const std::string& command,
                   const std::vector<std::string>& args) {
  Report report;
  report.command = command;
  report.inputs = args;
  report.settings = settings;
  if (settings.mode == "exact")
    dispatch<Rational>(doc, settings, command, args, report);
  else
    dispatch<double>(doc, settings, command, args, report);
  report.sort();
  return report;
}

}  // namespace cartankit
