#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <random>
#include <vector>

#include "cartankit/integration.hpp"

namespace cartankit {

/// Sign of the permutation i -> p[i].
inline int perm_sign(const std::vector<std::size_t>& p) {
  int inv = 0;
  for (std::size_t a = 0; a < p.size(); ++a)
    for (std::size_t b = a + 1; b < p.size(); ++b)
      if (p[a] > p[b]) ++inv;
  return inv % 2 ? -1 : 1;
}

inline std::vector<std::vector<std::size_t>> all_permutations(std::size_t k) {
  std::vector<std::size_t> p(k);
  std::iota(p.begin(), p.end(), 0);
  std::vector<std::vector<std::size_t>> out;
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

/// Face map d^i : Delta_{k-1} -> Delta_k. d^0(s) = (1, s); d^i duplicates s_i (1 <= i < k); d^k(s) = (s, 0).
template <class T>
AffineMap<T> face_map(std::size_t k, std::size_t i) {
  if (k == 0 || i > k) throw std::out_of_range("face index out of range");
  auto m = AffineMap<T>::zero(k - 1, k);
  if (i == 0) {
    m.offset[0] = T(1);
    for (std::size_t j = 1; j < k; ++j) m.M(j, j - 1) = T(1);
  } else if (i == k) {
    for (std::size_t j = 0; j + 1 < k; ++j) m.M(j, j) = T(1);
  } else {
    // 0-based: output j reads input j below i and input j-1 from i on, so input i-1 appears twice.
    for (std::size_t j = 0; j < k; ++j) m.M(j, j < i ? j : j - 1) = T(1);
  }
  return m;
}

/// Singular boundary sum_i (-1)^i sigma o d^i.
template <class T>
ChainCombination<T> boundary(const ExpWord<T>& w) {
  const std::size_t k = w.dim();
  if (k == 0) throw std::invalid_argument("boundary of a point");
  ChainCombination<T> c{k - 1, {}};
  for (std::size_t i = 0; i <= k; ++i) c.add(T(koszul(static_cast<long>(i))), w.compose(face_map<T>(k, i)));
  return c;
}

template <class T>
ChainCombination<T> boundary(const ChainCombination<T>& a) {
  ChainCombination<T> c{a.k - 1, {}};
  for (auto& [coef, w] : a.terms)
    for (auto& [c2, f] : boundary(w).terms) c.add(coef * c2, f);
  return c;
}

/// rho(boundary w) - [delta, rho(w)]; zero for a DG module.
template <class T>
double dg_module_check(const RepForm<T>& form, const ExpWord<T>& w, std::size_t order = 16) {
  const auto x = integrate_quadrature(form, w, order);
  const auto lhs = integrate_chain(form, boundary(w), order);
  const auto rhs = graded_commutator(form.rep().delta(), x);
  return magnitude((lhs - rhs).max_abs());
}

/// (r,s)-shuffles as the sorted positions taken by the first factor.
inline std::vector<std::vector<std::size_t>> shuffles(std::size_t r, std::size_t s) {
  std::vector<std::vector<std::size_t>> out;
  for (Subset m : subsets_of_size(r + s, r)) out.push_back(elements(m));
  return out;
}

/// Selection t -> (t_{p_0}, t_{p_1}, ...) from Delta_k.
template <class T>
AffineMap<T> selection_map(std::size_t k, const std::vector<std::size_t>& positions) {
  auto m = AffineMap<T>::zero(k, positions.size());
  for (std::size_t a = 0; a < positions.size(); ++a) m.M(a, positions[a]) = T(1);
  return m;
}

/// Eilenberg-Zilber product followed by group multiplication: sum over shuffles of
/// (-1)^{|chi|} t -> sigma(t_P) nu(t_Q).
template <class T>
ChainCombination<T> ez_product(const ChainCombination<T>& a, const ChainCombination<T>& b) {
  const std::size_t r = a.k, s = b.k, k = r + s;
  ChainCombination<T> out{k, {}};
  for (auto& pos : shuffles(r, s)) {
    std::vector<std::size_t> rest, perm = pos;
    for (std::size_t i = 0; i < k; ++i)
      if (!std::binary_search(pos.begin(), pos.end(), i)) rest.push_back(i);
    perm.insert(perm.end(), rest.begin(), rest.end());
    const T sign(perm_sign(perm));
    const auto pa = selection_map<T>(k, pos), pb = selection_map<T>(k, rest);
    for (auto& [ca, wa] : a.terms)
      for (auto& [cb, wb] : b.terms) out.add(sign * ca * cb, wa.compose(pa).times(wb.compose(pb)));
  }
  return out;
}

/// Alexander-Whitney pieces: front_i = sigma(t, 0), back_i = sigma(1^i, t).
template <class T>
std::vector<std::pair<ExpWord<T>, ExpWord<T>>> aw_coproduct_word(const ExpWord<T>& w) {
  const std::size_t k = w.dim();
  std::vector<std::pair<ExpWord<T>, ExpWord<T>>> out;
  for (std::size_t i = 0; i <= k; ++i) {
    auto f = AffineMap<T>::zero(i, k);
    for (std::size_t j = 0; j < i; ++j) f.M(j, j) = T(1);
    auto b = AffineMap<T>::zero(k - i, k);
    for (std::size_t j = 0; j < i; ++j) b.offset[j] = T(1);
    for (std::size_t j = i; j < k; ++j) b.M(j, j - i) = T(1);
    out.emplace_back(w.compose(f), w.compose(b));
  }
  return out;
}

/// sum_i nat(I_V(front_i), I_W(back_i)) acting on V (x) W.
template <class T>
GradedOperator<T> aw_tensor_action(const RepForm<T>& v, const RepForm<T>& w, const ExpWord<T>& word,
                                   std::size_t order = 16) {
  GradedOperator<T> acc;
  bool first = true;
  for (auto& [f, b] : aw_coproduct_word(word)) {
    auto term = nat(integrate_quadrature(v, f, order), integrate_quadrature(w, b, order));
    if (first) {
      acc = term;
      first = false;
    } else {
      acc += term;
    }
  }
  return acc;
}

/// Pointwise check of the pullback of the representation form along p-fold multiplication at sample
/// points: rho(g_1..g_p) prod_a B(sum_l Ad_{(g_{l+1}..g_p)^{-1}} w_{a,l}) against
/// sum_{j_1+..+j_p=k} (-1)^{sum_l j_l(j_{l-1}+..+j_1)} pi_1^* Phi^{(j_1)} ^ ... ^ pi_p^* Phi^{(j_p)},
/// with the wedge of operator-valued forms carrying the Koszul sign (-1)^{|eta||S|}.
struct MuSample {
  std::vector<Vector<double>> points;                // p Lie vectors, g_l = exp(y_l)
  std::vector<std::vector<Vector<double>>> tangents;  // k tangents, each p components
};

inline std::vector<MuSample> random_mu_samples(std::size_t n, std::size_t p, std::size_t k, std::size_t count,
                                               unsigned seed, bool mixed = true) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<std::size_t> pick(0, p - 1);
  std::vector<MuSample> out;
  for (std::size_t c = 0; c < count; ++c) {
    MuSample s;
    for (std::size_t l = 0; l < p; ++l) {
      Vector<double> y(n);
      for (auto& x : y) x = u(rng);
      s.points.push_back(y);
    }
    for (std::size_t a = 0; a < k; ++a) {
      std::vector<Vector<double>> comps(p, Vector<double>(n, 0.0));
      const std::size_t only = pick(rng);
      for (std::size_t l = 0; l < p; ++l)
        if (mixed || l == only)
          for (auto& x : comps[l]) x = u(rng);
      s.tangents.push_back(comps);
    }
    out.push_back(std::move(s));
  }
  return out;
}

inline double mu_p_check(const RepForm<double>& form, std::size_t p, std::size_t k,
                         const std::vector<MuSample>& samples) {
  if (p < 2) throw std::invalid_argument("mu_p_check needs p >= 2");
  const auto& g = form.g();
  const std::size_t N = form.N();
  double worst = 0.0;
  for (auto& smp : samples) {
    if (smp.points.size() != p || smp.tangents.size() != k) throw ShapeError("sample shape mismatch");
    std::vector<Matrix<double>> rho, Adinv;
    for (auto& y : smp.points) {
      rho.push_back(expm(form.A(y)));
      Adinv.push_back(expm(g.ad_matrix(y) * -1.0));
    }
    // tailinv[l] = Ad_{(g_{l+1}..g_p)^{-1}}
    std::vector<Matrix<double>> tailinv(p, Matrix<double>::identity(g.dim()));
    for (std::size_t l = p - 1; l-- > 0;) tailinv[l] = tailinv[l + 1] * Adinv[l + 1];
    Matrix<double> lhs = Matrix<double>::identity(N);
    for (auto& r : rho) lhs = lhs * r;
    for (std::size_t a = 0; a < k; ++a) {
      Vector<double> v(g.dim(), 0.0);
      for (std::size_t l = 0; l < p; ++l) {
        auto c = tailinv[l].apply(smp.tangents[a][l]);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] += c[i];
      }
      lhs = lhs * form.B(v);
    }
    Matrix<double> rhs(N, N);
    std::vector<std::size_t> assign(k, 0);
    std::size_t total = 1;
    for (std::size_t a = 0; a < k; ++a) total *= p;
    for (std::size_t code = 0; code < total; ++code) {
      std::size_t c = code;
      for (std::size_t a = 0; a < k; ++a) {
        assign[a] = c % p;
        c /= p;
      }
      std::vector<std::size_t> order;
      std::vector<long> j(p, 0);
      for (std::size_t l = 0; l < p; ++l)
        for (std::size_t a = 0; a < k; ++a)
          if (assign[a] == l) {
            order.push_back(a);
            ++j[l];
          }
      // (-1)^{sum_l j_l(j_1+..+j_{l-1})} from the expansion equals the Koszul sign of the wedge, so the
      // two cancel and only the sign of the tangent reordering remains.
      const double sign = perm_sign(order);
      Matrix<double> term = Matrix<double>::identity(N);
      std::size_t idx = 0;
      for (std::size_t l = 0; l < p; ++l) {
        term = term * rho[l];
        for (long q = 0; q < j[l]; ++q, ++idx) term = term * form.B(smp.tangents[order[idx]][l]);
      }
      rhs.add_scaled(sign, term);
    }
    worst = std::max(worst, (lhs - rhs).max_abs());
  }
  return worst;
}

/// A module given by its action on points and 1-simplices.
using WordAction = std::function<GradedOperator<double>(const ExpWord<double>&)>;

/// Central differences: L_i = (rho(exp h e_i) - rho(exp -h e_i)) / 2h, B_i = (rho(sigma[h e_i]) - rho(sigma[-h e_i])) / 2h.
/// With richardson, (4 D(h/2) - D(h)) / 3.
inline TgRep<double> differentiate_module(const LieAlgebra<double>& g, const CochainComplex<double>& complex,
                                          const WordAction& action, double h, bool richardson = false) {
  if (!(h > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
  auto diff = [&](double step, std::size_t i, bool simplex) {
    Vector<double> x = g.basis_vector(i);
    Vector<double> xp = x, xm = x;
    for (auto& v : xp) v *= step;
    for (auto& v : xm) v *= -step;
    auto mk = [&](const Vector<double>& y) {
      return simplex ? ExpWord<double>::word({y}) : ExpWord<double>::point({y});
    };
    auto d = action(mk(xp)) - action(mk(xm));
    d *= 1.0 / (2.0 * step);
    return d;
  };
  auto est = [&](std::size_t i, bool simplex) {
    auto d = diff(h, i, simplex);
    if (!richardson) return d;
    auto d2 = diff(h / 2, i, simplex);
    d2 *= 4.0 / 3.0;
    d2.add_scaled(-1.0 / 3.0, d);
    return d2;
  };
  TgRep<double> r{g, complex, {}, {}};
  for (std::size_t i = 0; i < g.dim(); ++i) {
    r.L.push_back(est(i, false));
    r.B.push_back(est(i, true));
  }
  return r;
}

struct RoundtripReport {
  double error_h = 0.0;   // max entry error at step h
  double error_h2 = 0.0;  // at step h/2
  double ratio = 0.0;     // error_h / error_h2
  double tolerance = 0.0;
  bool passed = false;
};

inline double rep_distance(const TgRep<double>& a, const TgRep<double>& b) {
  double e = 0.0;
  for (std::size_t i = 0; i < a.L.size(); ++i) {
    e = std::max(e, (a.L[i] - b.L[i]).max_abs());
    e = std::max(e, (a.B[i] - b.B[i]).max_abs());
  }
  return e;
}

/// D o I = id to second order: error below tol at h and error ratio >= 3.5 on halving h.
inline RoundtripReport roundtrip_check(const RepForm<double>& form, double h = 1e-4, double tol = 1e-6,
                                       std::size_t order = 16) {
  WordAction act = [&](const ExpWord<double>& w) { return integrate_quadrature(form, w, order); };
  const auto& rep = form.rep();
  RoundtripReport r;
  r.tolerance = tol;
  r.error_h = rep_distance(differentiate_module(rep.g, rep.complex, act, h), rep);
  r.error_h2 = rep_distance(differentiate_module(rep.g, rep.complex, act, h / 2), rep);
  // Below 1e-13 the error is roundoff and carries no order information.
  const bool negligible = r.error_h < 1e-13;
  r.ratio = r.error_h2 > 0.0 ? r.error_h / r.error_h2 : 0.0;
  r.passed = r.error_h < tol && (negligible || r.ratio >= 3.5);
  return r;
}

/// Thin iff the k x n matrix of tangents has rank < k at every sample point.
template <class T>
bool thinness_check(const RepForm<T>& form, const ExpWord<T>& w, std::size_t samples_per_axis = 3,
                    double tol = 1e-9, Domain domain = Domain::simplex) {
  const std::size_t k = w.dim();
  if (k == 0) return false;
  WordEvaluator<T> ev(form, w);
  const auto pts = domain == Domain::simplex ? simplex_points(k, samples_per_axis) : cube_points(k, samples_per_axis);
  for (auto& p : pts) {
    std::vector<T> t;
    for (double x : p.t) t.push_back(T(x));
    auto pv = ev.evaluate(t);
    Matrix<T> m(k, form.lie_dim());
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t i = 0; i < form.lie_dim(); ++i) m(j, i) = pv.xi[j][i];
    if constexpr (Field<T>::exact) {
      if (rank(m) == k) return false;
    } else {
      // Absolute threshold: parallel or vanishing tangents must both count as thin.
      double mx = m.max_abs();
      if (mx > tol && rank(m, tol / mx) == k) return false;
    }
  }
  return true;
}

}  // namespace cartankit
