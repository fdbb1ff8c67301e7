#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cartankit/exterior.hpp"
#include "cartankit/poly.hpp"
#include "cartankit/quadrature.hpp"
#include "cartankit/rep.hpp"

namespace cartankit {

enum class Domain { simplex, cube };

/// t_out = offset + M t_in
template <class T>
struct AffineMap {
  std::size_t k_in = 0, k_out = 0;
  Vector<T> offset;
  Matrix<T> M;

  static AffineMap zero(std::size_t k_in, std::size_t k_out) {
    return {k_in, k_out, Vector<T>(k_out, T(0)), Matrix<T>(k_out, k_in)};
  }
};

/// One factor exp(ell(t) y) with ell(t) = c0 + sum_j c_j t_j.
template <class T>
struct ExpFactor {
  Vector<T> y;
  T c0;
  Vector<T> c;
};

/// The k-parameter map t -> prod_m exp(ell_m(t) y_m). Words, points, translates, faces,
/// shuffles and cube reparameterizations are all of this form.
template <class T>
class ExpWord {
 public:
  ExpWord() = default;
  explicit ExpWord(std::size_t k) : k_(k) {}

  /// sigma[x_1..x_k](t) = exp(t_1 x_1) ... exp(t_k x_k)
  static ExpWord word(const std::vector<Vector<T>>& letters) {
    ExpWord w(letters.size());
    for (std::size_t j = 0; j < letters.size(); ++j) {
      Vector<T> c(letters.size(), T(0));
      c[j] = T(1);
      w.factors_.push_back({letters[j], T(0), std::move(c)});
    }
    return w;
  }
  /// The group element exp(x_1) ... exp(x_m) as a 0-simplex.
  static ExpWord point(const std::vector<Vector<T>>& letters) {
    ExpWord w(0);
    for (auto& x : letters) w.factors_.push_back({x, T(1), {}});
    return w;
  }

  std::size_t dim() const { return k_; }
  const std::vector<ExpFactor<T>>& factors() const { return factors_; }
  void push_back(ExpFactor<T> f) {
    if (f.c.size() != k_) throw ShapeError("factor parameter count mismatch");
    factors_.push_back(std::move(f));
  }

  /// this o m
  ExpWord compose(const AffineMap<T>& m) const {
    if (m.k_out != k_) throw ShapeError("affine map target dimension mismatch");
    ExpWord out(m.k_in);
    for (auto& f : factors_) {
      ExpFactor<T> g{f.y, f.c0, Vector<T>(m.k_in, T(0))};
      for (std::size_t j = 0; j < k_; ++j) {
        if (Field<T>::is_zero(f.c[j])) continue;
        g.c0 += f.c[j] * m.offset[j];
        for (std::size_t i = 0; i < m.k_in; ++i) g.c[i] += f.c[j] * m.M(j, i);
      }
      out.factors_.push_back(std::move(g));
    }
    return out;
  }

  /// Pointwise product p * this for a 0-simplex p.
  ExpWord left_translate(const ExpWord& p) const {
    if (p.k_ != 0) throw ShapeError("left translation by a non-point");
    ExpWord out(k_);
    for (auto& f : p.factors_) out.factors_.push_back({f.y, f.c0, Vector<T>(k_, T(0))});
    for (auto& f : factors_) out.factors_.push_back(f);
    return out;
  }

  /// Pointwise product this * other on a common parameter space.
  ExpWord times(const ExpWord& other) const {
    if (other.k_ != k_) throw ShapeError("pointwise product of maps with different parameter counts");
    ExpWord out = *this;
    for (auto& f : other.factors_) out.factors_.push_back(f);
    return out;
  }

 private:
  std::size_t k_ = 0;
  std::vector<ExpFactor<T>> factors_;
};

/// Formal combination of maps of a common dimension.
template <class T>
struct ChainCombination {
  std::size_t k = 0;
  std::vector<std::pair<T, ExpWord<T>>> terms;

  static ChainCombination single(const ExpWord<T>& w) { return {w.dim(), {{T(1), w}}}; }
  void add(const T& coef, ExpWord<T> w) {
    if (w.dim() != k) throw ShapeError("chain terms differ in dimension");
    terms.emplace_back(coef, std::move(w));
  }
};

/// Matrices of a Tg-representation in the form used by the evaluators.
template <class T>
class RepForm {
 public:
  explicit RepForm(TgRep<T> rep) : rep_(std::move(rep)) {
    if (!rep_shapes_ok(rep_)) throw ShapeError("representation operators have inconsistent shapes");
  }
  const TgRep<T>& rep() const { return rep_; }
  const LieAlgebra<T>& g() const { return rep_.g; }
  std::size_t lie_dim() const { return rep_.g.dim(); }
  const GradedVectorSpace& space() const { return rep_.space(); }
  std::size_t N() const { return rep_.space().total(); }

  /// rho(L_y)
  Matrix<T> A(const Vector<T>& y) const { return combine(rep_.L, y); }
  /// rho(i_y)
  Matrix<T> B(const Vector<T>& y) const { return combine(rep_.B, y); }
  Matrix<T> ad(const Vector<T>& y) const { return rep_.g.ad_matrix(y); }

  GradedOperator<T> wrap(Matrix<T> m, int degree) const { return GradedOperator<T>(space(), space(), degree, std::move(m)); }

 private:
  Matrix<T> combine(const std::vector<GradedOperator<T>>& ops, const Vector<T>& y) const {
    Matrix<T> m(N(), N());
    for (std::size_t i = 0; i < ops.size(); ++i)
      if (!Field<T>::is_zero(y.at(i))) m.add_scaled(y[i], ops[i].matrix());
    return m;
  }
  TgRep<T> rep_;
};

/// rho(sigma(t)) and the left-trivialized partials xi_j = sigma(t)^{-1} d sigma / d t_j.
template <class T>
struct PointValue {
  Matrix<T> rho;
  std::vector<Vector<T>> xi;
};

/// Memo of factor exponentials keyed by (factor, parameter value); float mode only.
class ExpCache {
 public:
  using Key = std::pair<std::size_t, double>;
  struct Hash {
    std::size_t operator()(const Key& k) const { return std::hash<double>()(k.second) * 31 + k.first; }
  };
  std::unordered_map<Key, Matrix<double>, Hash> rho, ad;
};

namespace detail {

template <class T>
T ell_at(const ExpFactor<T>& f, const std::vector<T>& t) {
  T v = f.c0;
  for (std::size_t j = 0; j < t.size(); ++j)
    if (!Field<T>::is_zero(f.c[j])) v += f.c[j] * t[j];
  return v;
}

template <class T>
Matrix<T> factor_exp(ExpCache* cache, bool adjoint, std::size_t m, const T& ell, const Matrix<T>& gen) {
  if constexpr (std::is_same_v<T, double>) {
    if (cache) {
      auto& table = adjoint ? cache->ad : cache->rho;
      auto key = ExpCache::Key{m, ell};
      auto it = table.find(key);
      if (it != table.end()) return it->second;
      return table.emplace(key, expm(gen * ell)).first->second;
    }
  }
  return LinAlg<T>::expm(gen * ell);
}

}  // namespace detail

/// Precomputed generators of an ExpWord for one representation.
template <class T>
class WordEvaluator {
 public:
  WordEvaluator(const RepForm<T>& form, const ExpWord<T>& w) : form_(form), w_(w) {
    for (auto& f : w.factors()) {
      if (f.y.size() != form.lie_dim()) throw ShapeError("letter dimension differs from the Lie algebra");
      A_.push_back(form.A(f.y));
      ad_.push_back(form.ad(f.y));
    }
  }

  PointValue<T> evaluate(const std::vector<T>& t, ExpCache* cache = nullptr) const {
    if (t.size() != w_.dim()) throw ShapeError("point has wrong number of coordinates");
    const auto& fs = w_.factors();
    const std::size_t n = form_.lie_dim(), k = w_.dim();
    PointValue<T> pv{Matrix<T>::identity(form_.N()), std::vector<Vector<T>>(k, Vector<T>(n, T(0)))};
    std::vector<T> ell(fs.size());
    for (std::size_t m = 0; m < fs.size(); ++m) {
      ell[m] = detail::ell_at(fs[m], t);
      if (Field<T>::is_zero(ell[m]) || A_[m].is_zero()) continue;
      pv.rho = pv.rho * detail::factor_exp(cache, false, m, ell[m], A_[m]);
    }
    // Right to left: Ad of the inverse tail.
    Matrix<T> tail = Matrix<T>::identity(n);
    for (std::size_t m = fs.size(); m-- > 0;) {
      bool any = false;
      for (std::size_t j = 0; j < k; ++j) any = any || !Field<T>::is_zero(fs[m].c[j]);
      if (any) {
        Vector<T> v = tail.apply(fs[m].y);
        for (std::size_t j = 0; j < k; ++j)
          if (!Field<T>::is_zero(fs[m].c[j]))
            for (std::size_t i = 0; i < n; ++i) pv.xi[j][i] += fs[m].c[j] * v[i];
      }
      if (m == 0 || Field<T>::is_zero(ell[m]) || ad_[m].is_zero()) continue;
      tail = tail * detail::factor_exp(cache, true, m, T(-ell[m]), ad_[m]);
    }
    return pv;
  }

  /// rho(sigma(t)) B(xi_1) ... B(xi_k)
  Matrix<T> density(const std::vector<T>& t, ExpCache* cache = nullptr) const {
    auto pv = evaluate(t, cache);
    Matrix<T> d = std::move(pv.rho);
    for (auto& x : pv.xi) d = d * form_.B(x);
    return d;
  }

  const ExpWord<T>& word() const { return w_; }

 private:
  const RepForm<T>& form_;
  ExpWord<T> w_;
  std::vector<Matrix<T>> A_, ad_;
};

/// Pullback density of the representation form at t, as an operator of degree -k.
template <class T>
GradedOperator<T> eval_form(const RepForm<T>& form, const ExpWord<T>& w, const std::vector<T>& t) {
  return form.wrap(WordEvaluator<T>(form, w).density(t), -static_cast<int>(w.dim()));
}

/// B_1 e^{t_1 A_1} ... B_k e^{t_k A_k} for a word.
template <class T>
GradedOperator<T> pullback_word_closed(const RepForm<T>& form, const std::vector<Vector<T>>& letters,
                                       const std::vector<T>& t) {
  if (t.size() != letters.size()) throw ShapeError("point has wrong number of coordinates");
  Matrix<T> d = Matrix<T>::identity(form.N());
  for (std::size_t j = 0; j < letters.size(); ++j)
    d = d * form.B(letters[j]) * LinAlg<T>::expm(form.A(letters[j]) * t[j]);
  return form.wrap(std::move(d), -static_cast<int>(letters.size()));
}

namespace detail {

inline PolyScalar affine_poly(const ExpFactor<Rational>& f, const Rational& scale) {
  PolyScalar p = PolyScalar::constant(f.c.size(), f.c0 * scale);
  for (std::size_t j = 0; j < f.c.size(); ++j)
    if (sgn(f.c[j]) != 0) p.terms[var_monomial(j)] += f.c[j] * scale;
  p.prune();
  return p;
}

/// exp(ell(t) A) as a polynomial; A must be nilpotent unless ell vanishes.
inline PolyMatrix exp_poly(const PolyScalar& ell, const Matrix<Rational>& A) {
  const std::size_t nv = ell.nvars;
  PolyMatrix out = PolyMatrix::constant(nv, Matrix<Rational>::identity(A.rows()));
  if (ell.terms.empty() || A.is_zero()) return out;
  PolyScalar pw = PolyScalar::constant(nv, 1);
  Matrix<Rational> Ap = Matrix<Rational>::identity(A.rows());
  for (std::size_t j = 1;; ++j) {
    Ap = Ap * A;
    if (Ap.is_zero()) return out;
    if (j > A.rows()) throw NonTerminatingError("exact integration needs nilpotent generators");
    pw = pw * ell;
    PolyScalar term = pw;
    Rational fact(1);
    for (std::size_t i = 2; i <= j; ++i) fact *= static_cast<unsigned long>(i);
    for (auto& [m, c] : term.terms) c /= fact;
    out.add_product(term, Ap);
  }
}

}  // namespace detail

/// Exact integral of the density over the simplex or the cube (polynomial density, nilpotent case).
inline GradedOperator<Rational> integrate_exact(const RepForm<Rational>& form, const ExpWord<Rational>& w,
                                                Domain domain = Domain::simplex) {
  const std::size_t k = w.dim(), n = form.lie_dim(), N = form.N();
  if (k > 8) throw std::invalid_argument("exact integration supports at most 8 parameters");
  const auto& fs = w.factors();
  PolyMatrix rho = PolyMatrix::constant(k, Matrix<Rational>::identity(N));
  for (auto& f : fs) rho = rho * detail::exp_poly(detail::affine_poly(f, 1), form.A(f.y));
  std::vector<PolyMatrix> xi(k, PolyMatrix{k, n, 1, {}});
  PolyMatrix tail = PolyMatrix::constant(k, Matrix<Rational>::identity(n));
  for (std::size_t m = fs.size(); m-- > 0;) {
    Matrix<Rational> y(n, 1);
    for (std::size_t i = 0; i < n; ++i) y(i, 0) = fs[m].y[i];
    PolyMatrix ty = tail * PolyMatrix::constant(k, y);
    for (std::size_t j = 0; j < k; ++j) {
      if (sgn(fs[m].c[j]) == 0) continue;
      for (auto& [mono, v] : ty.terms) {
        auto it = xi[j].terms.find(mono);
        if (it == xi[j].terms.end())
          xi[j].terms.emplace(mono, v * fs[m].c[j]);
        else
          it->second.add_scaled(fs[m].c[j], v);
      }
    }
    if (m > 0) tail = tail * detail::exp_poly(detail::affine_poly(fs[m], -1), form.ad(fs[m].y));
  }
  PolyMatrix dens = rho;
  for (std::size_t j = 0; j < k; ++j) {
    xi[j].prune();
    PolyMatrix bx{k, N, N, {}};
    for (std::size_t i = 0; i < n; ++i) {
      PolyScalar comp{k, {}};
      for (auto& [mono, v] : xi[j].terms)
        if (sgn(v(i, 0)) != 0) comp.terms[mono] = v(i, 0);
      if (!comp.terms.empty()) bx.add_product(comp, form.rep().B[i].matrix());
    }
    dens = dens * bx;
  }
  Matrix<Rational> total(N, N);
  for (auto& [mono, m] : dens.terms)
    total.add_scaled(domain == Domain::simplex ? simplex_monomial_integral(mono, k) : cube_monomial_integral(mono, k), m);
  return form.wrap(std::move(total), -static_cast<int>(k));
}

/// Nested Gauss-Legendre integral of the density (float) or the exact polynomial integral (exact;
/// the order is irrelevant there).
template <class T>
GradedOperator<T> integrate_quadrature(const RepForm<T>& form, const ExpWord<T>& w, std::size_t order = 16,
                                       Domain domain = Domain::simplex) {
  if (order == 0) throw std::invalid_argument("quadrature order must be at least 1");
  if constexpr (Field<T>::exact) {
    return integrate_exact(form, w, domain);
  } else {
    WordEvaluator<double> ev(form, w);
    ExpCache cache;
    const auto pts = domain == Domain::simplex ? simplex_points(w.dim(), order) : cube_points(w.dim(), order);
    Matrix<double> acc(form.N(), form.N());
    for (auto& p : pts) acc.add_scaled(p.w, ev.density(p.t, &cache));
    return form.wrap(std::move(acc), -static_cast<int>(w.dim()));
  }
}

template <class T>
GradedOperator<T> integrate_chain(const RepForm<T>& form, const ChainCombination<T>& c, std::size_t order = 16,
                                  Domain domain = Domain::simplex) {
  GradedOperator<T> acc(form.space(), form.space(), -static_cast<int>(c.k));
  for (auto& [coef, w] : c.terms)
    if (!Field<T>::is_zero(coef)) acc.add_scaled(coef, integrate_quadrature(form, w, order, domain));
  return acc;
}

struct SeriesInfo {
  std::size_t degree = 0;  // last total degree summed
  bool converged = false;
};

/// sum over j of B_1 A_1^{j_1} ... B_k A_k^{j_k} / (j_1! ... j_k! (j_k+1)(j_k+j_{k-1}+2) ... (j_k+...+j_1+k)),
/// summed by total degree. Right-to-left recursion:
///   R_k(s) = B_k A_k^s / s! / (s+1),  R_m(s) = sum_j B_m A_m^j / j! R_{m+1}(s-j) / (s+k-m+1).
template <class T>
GradedOperator<T> integrate_series(const RepForm<T>& form, const std::vector<Vector<T>>& letters, double tol = 1e-9,
                                   std::size_t cap = 60, SeriesInfo* info = nullptr) {
  const std::size_t k = letters.size(), N = form.N();
  if (k == 0) return GradedOperator<T>::identity(form.space());
  std::vector<Matrix<T>> A, B;
  for (auto& x : letters) {
    A.push_back(form.A(x));
    B.push_back(form.B(x));
  }
  std::size_t exact_degree = 0;
  if constexpr (Field<T>::exact) {
    for (auto& a : A) {
      std::size_t idx = nilpotency_index(a);
      if (idx == 0) throw NonTerminatingError("exact series needs nilpotent rho(L_x)");
      exact_degree += idx - 1;
    }
  }
  // Per-letter products B_m A_m^j / j!, grown on demand; Apow holds A_m^j / j!.
  std::vector<std::vector<Matrix<T>>> BA(k);
  std::vector<Matrix<T>> Apow(k);
  for (std::size_t m = 0; m < k; ++m) {
    BA[m].push_back(B[m]);
    Apow[m] = Matrix<T>::identity(N);
  }
  double a_norm = 0.0, b_prod = 1.0;
  for (std::size_t m = 0; m < k; ++m) {
    double ra = 0.0, rb = 0.0;
    for (std::size_t r = 0; r < N; ++r) {
      double sa = 0.0, sb = 0.0;
      for (std::size_t c = 0; c < N; ++c) {
        sa += magnitude(A[m](r, c));
        sb += magnitude(B[m](r, c));
      }
      ra = std::max(ra, sa);
      rb = std::max(rb, sb);
    }
    a_norm += ra;
    b_prod *= rb / static_cast<double>(m + 1);
  }
  // R[m][s] for 0-based m.
  std::vector<std::vector<Matrix<T>>> R(k);
  Matrix<T> result(N, N);
  const std::size_t limit = Field<T>::exact ? exact_degree : cap;
  // Layer d is bounded in the row-sum norm by prod|B_m| (sum|A_m|)^d / (d! k!).
  double bound = b_prod;
  for (std::size_t d = 0; d <= limit; ++d) {
    for (std::size_t m = 0; m < k; ++m)
      if (BA[m].size() <= d) {
        Apow[m] = Apow[m] * A[m];
        Apow[m] *= T(1) / T(static_cast<long>(d));
        BA[m].push_back(B[m] * Apow[m]);
      }
    for (std::size_t m = k; m-- > 0;) {
      Matrix<T> r(N, N);
      if (m == k - 1) {
        r = BA[m][d];
      } else {
        for (std::size_t j = 0; j <= d; ++j) r += BA[m][j] * R[m + 1][d - j];
      }
      r *= T(1) / T(static_cast<long>(d + k - m));
      R[m].push_back(std::move(r));
    }
    const Matrix<T>& layer = R[0][d];
    result += layer;
    if constexpr (Field<T>::exact) {
      if (d == limit) {
        if (info) *info = {d, true};
        return form.wrap(std::move(result), -static_cast<int>(k));
      }
    } else {
      if (d > 0) bound *= a_norm / static_cast<double>(d);
      const double scale = tol * (1.0 + magnitude(result.max_abs()));
      if (magnitude(layer.max_abs()) < scale && bound < scale) {
        if (info) *info = {d, true};
        return form.wrap(std::move(result), -static_cast<int>(k));
      }
    }
  }
  if constexpr (Field<T>::exact) {
    if (info) *info = {limit, true};
    return form.wrap(std::move(result), -static_cast<int>(k));
  }
  if (info) *info = {cap, false};
  throw NonTerminatingError("series did not converge within the degree cap");
}

}  // namespace cartankit
