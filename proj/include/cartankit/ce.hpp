#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "cartankit/exterior.hpp"
#include "cartankit/rep.hpp"

namespace cartankit {

enum class CEFlavor { cochain, chain };

/// Basis of Lambda(g) (x) V (or Lambda(g*) (x) V). Degree of e_S (x) v is sign*|S| + |v|
/// with sign = -1 for chains and +1 for cochains. Order: degree, then |S|, then S lexicographic, then v.
class CELayout {
 public:
  CELayout(std::size_t n, const GradedVectorSpace& v, CEFlavor flavor) : n_(n), v_(v), flavor_(flavor) {
    if (n > 20) throw std::invalid_argument("Lie algebra too large for the exterior basis");
    const int sgn = flavor == CEFlavor::chain ? -1 : 1;
    std::map<int, std::vector<std::pair<Subset, std::size_t>>> by_degree;
    const auto vdeg = v.basis_degrees();
    for (std::size_t m = 0; m <= n; ++m)
      for (Subset s : subsets_of_size(n, m))
        for (std::size_t j = 0; j < v.total(); ++j) by_degree[sgn * static_cast<int>(m) + vdeg[j]].emplace_back(s, j);
    std::map<int, std::size_t> dims;
    for (auto& [d, items] : by_degree) {
      dims[d] = items.size();
      for (auto& it : items) {
        index_[it] = basis_.size();
        basis_.push_back(it);
      }
    }
    space_ = GradedVectorSpace(dims);
  }

  const GradedVectorSpace& space() const { return space_; }
  const GradedVectorSpace& coefficients() const { return v_; }
  std::size_t lie_dim() const { return n_; }
  CEFlavor flavor() const { return flavor_; }
  std::size_t index(Subset s, std::size_t v) const { return index_.at({s, v}); }
  const std::vector<std::pair<Subset, std::size_t>>& basis() const { return basis_; }

 private:
  std::size_t n_;
  GradedVectorSpace v_;
  CEFlavor flavor_;
  GradedVectorSpace space_;
  std::vector<std::pair<Subset, std::size_t>> basis_;
  std::map<std::pair<Subset, std::size_t>, std::size_t> index_;
};

template <class T>
struct CEComplex {
  CEFlavor flavor;
  CELayout layout;
  CochainComplex<T> complex;
};

namespace detail {

/// Sum of coefficient * (e_seq (x) M v) into column col, where seq is resorted with its sign.
template <class T>
void add_term(GradedOperator<T>& out, const CELayout& lay, const std::vector<std::size_t>& seq, const T& coef,
              const Matrix<T>& m, std::size_t v, std::size_t col) {
  Subset mask = 0;
  int s = sort_sign(seq, &mask);
  if (s == 0 || Field<T>::is_zero(coef)) return;
  const T c = s > 0 ? coef : T(-coef);
  for (std::size_t w = 0; w < m.rows(); ++w)
    if (!Field<T>::is_zero(m(w, v))) out.raw(lay.index(mask, w), col) += c * m(w, v);
}

/// Same as add_term with M = identity.
template <class T>
void add_basis(GradedOperator<T>& out, const CELayout& lay, const std::vector<std::size_t>& seq, const T& coef,
               std::size_t v, std::size_t col) {
  Subset mask = 0;
  int s = sort_sign(seq, &mask);
  if (s == 0 || Field<T>::is_zero(coef)) return;
  out.raw(lay.index(mask, v), col) += s > 0 ? coef : T(-coef);
}

template <class T>
std::vector<std::size_t> without(const std::vector<std::size_t>& xs, std::size_t a, std::size_t b = SIZE_MAX) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (i != a && i != b) out.push_back(xs[i]);
  return out;
}

}  // namespace detail

/// Chain complex C(g,V) on e_{x_1..x_m} (x) v in degree |v| - m:
/// delta = sum_{i<j} (-1)^{i+j+1} [x_i,x_j]^... + sum_i (-1)^{i+1} ...^x_i^... (x) rho(x_i) v + (-1)^m xi (x) delta_V v.
template <class T>
CEComplex<T> ce_chain(const GRep<T>& V) {
  const auto& g = V.g;
  const std::size_t n = g.dim();
  CELayout lay(n, V.space(), CEFlavor::chain);
  GradedOperator<T> d(lay.space(), lay.space(), 1);
  const auto& dv = V.complex.differential.matrix();
  for (std::size_t col = 0; col < lay.basis().size(); ++col) {
    auto [s, v] = lay.basis()[col];
    const auto xs = elements(s);
    const std::size_t m = xs.size();
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i + 1; j < m; ++j) {
        const T sign(koszul(static_cast<long>(i + j + 3)));  // 1-based i+j+1
        auto rest = detail::without<T>(xs, i, j);
        for (std::size_t k = 0; k < n; ++k) {
          const T& c = g.c(xs[i], xs[j], k);
          if (Field<T>::is_zero(c)) continue;
          std::vector<std::size_t> seq{k};
          seq.insert(seq.end(), rest.begin(), rest.end());
          detail::add_basis(d, lay, seq, T(sign * c), v, col);
        }
      }
    for (std::size_t i = 0; i < m; ++i) {
      const T sign(koszul(static_cast<long>(i + 2)));  // (-1)^{i+1}, 1-based
      detail::add_term(d, lay, detail::without<T>(xs, i), sign, V.R[xs[i]].matrix(), v, col);
    }
    detail::add_term(d, lay, xs, T(koszul(static_cast<long>(m))), dv, v, col);
  }
  return {CEFlavor::chain, lay, {lay.space(), d}};
}

/// Cochain complex CE(g,V) on e^S (x) v in degree |S| + |v|:
/// (delta w)(v_1..v_{m+1}) = sum_{i<j} (-1)^{i+j} w([v_i,v_j],...) + sum_i (-1)^{i+1} rho(v_i) w(...^v_i...)
/// plus (-1)^{|S|} e^S (x) delta_V v.
template <class T>
CEComplex<T> ce_cochain(const GRep<T>& V) {
  const auto& g = V.g;
  const std::size_t n = g.dim();
  CELayout lay(n, V.space(), CEFlavor::cochain);
  GradedOperator<T> d(lay.space(), lay.space(), 1);
  const auto& dv = V.complex.differential.matrix();
  const std::size_t nv = V.space().total();
  // Row-oriented: for every target subset T and every source subset S, accumulate (delta e^S)(e_T).
  for (std::size_t m = 0; m < n; ++m) {
    for (Subset tset : subsets_of_size(n, m + 1)) {
      const auto ts = elements(tset);
      std::map<Subset, T> scalar;  // coefficient of e^S (x) v -> e^T (x) v
      for (std::size_t i = 0; i < ts.size(); ++i)
        for (std::size_t j = i + 1; j < ts.size(); ++j) {
          const T sign(koszul(static_cast<long>(i + j + 2)));
          auto rest = detail::without<T>(ts, i, j);
          for (std::size_t k = 0; k < n; ++k) {
            const T& c = g.c(ts[i], ts[j], k);
            if (Field<T>::is_zero(c)) continue;
            std::vector<std::size_t> seq{k};
            seq.insert(seq.end(), rest.begin(), rest.end());
            Subset mask = 0;
            int sg = sort_sign(seq, &mask);
            if (sg == 0) continue;
            scalar[mask] += T(sg) * sign * c;
          }
        }
      for (auto& [smask, coef] : scalar) {
        if (Field<T>::is_zero(coef)) continue;
        for (std::size_t v = 0; v < nv; ++v) d.raw(lay.index(tset, v), lay.index(smask, v)) += coef;
      }
      for (std::size_t i = 0; i < ts.size(); ++i) {
        const T sign(koszul(static_cast<long>(i + 2)));
        Subset smask = tset & ~(Subset(1) << ts[i]);
        const auto& r = V.R[ts[i]].matrix();
        for (std::size_t v = 0; v < nv; ++v)
          for (std::size_t w = 0; w < nv; ++w)
            if (!Field<T>::is_zero(r(w, v))) d.raw(lay.index(tset, w), lay.index(smask, v)) += sign * r(w, v);
      }
    }
  }
  for (std::size_t col = 0; col < lay.basis().size(); ++col) {
    auto [s, v] = lay.basis()[col];
    const T sign(koszul(popcount(s)));
    for (std::size_t w = 0; w < nv; ++w)
      if (!Field<T>::is_zero(dv(w, v))) d.raw(lay.index(s, w), col) += sign * dv(w, v);
  }
  return {CEFlavor::cochain, lay, {lay.space(), d}};
}

/// dim ker - dim im in each degree.
template <class T>
std::map<int, std::size_t> cohomology_dims(const CochainComplex<T>& c, double tol = 1e-9) {
  if (magnitude(square_residual(c)) > tol) throw std::invalid_argument("cohomology_dims: differential does not square to zero");
  std::map<int, std::size_t> out;
  const auto& sp = c.space;
  std::map<int, std::size_t> rk;
  for (auto& [p, n] : sp.dims()) {
    (void)n;
    rk[p] = sp.dim(p + 1) ? LinAlg<T>::rank(c.differential.block(p), tol) : 0;
  }
  for (auto& [p, n] : sp.dims()) {
    const std::size_t in = rk.count(p - 1) ? rk[p - 1] : 0;
    out[p] = n - rk[p] - in;
  }
  return out;
}

/// U(V) = C(g,V) with B_x = x^ (prepended) and L_x = ad on wedge factors plus rho on V.
template <class T>
TgRep<T> functor_U(const GRep<T>& V) {
  auto ce = ce_chain(V);
  const auto& lay = ce.layout;
  const std::size_t n = V.g.dim();
  TgRep<T> r{V.g, ce.complex, {}, {}};
  for (std::size_t a = 0; a < n; ++a) {
    GradedOperator<T> b(lay.space(), lay.space(), -1);
    GradedOperator<T> l(lay.space(), lay.space(), 0);
    const auto& ra = V.R[a].matrix();
    for (std::size_t col = 0; col < lay.basis().size(); ++col) {
      auto [s, v] = lay.basis()[col];
      const auto xs = elements(s);
      std::vector<std::size_t> seq{a};
      seq.insert(seq.end(), xs.begin(), xs.end());
      detail::add_basis(b, lay, seq, T(1), v, col);
      for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t k = 0; k < n; ++k) {
          const T& c = V.g.c(a, xs[i], k);
          if (Field<T>::is_zero(c)) continue;
          auto ys = xs;
          ys[i] = k;
          detail::add_basis(l, lay, ys, c, v, col);
        }
      detail::add_term(l, lay, xs, T(1), ra, v, col);
    }
    r.B.push_back(std::move(b));
    r.L.push_back(std::move(l));
  }
  return r;
}

/// E(V) = CE(g,V) with B_x = contraction and L_x = coadjoint on forms plus rho on V.
template <class T>
TgRep<T> functor_E(const GRep<T>& V) {
  auto ce = ce_cochain(V);
  const auto& lay = ce.layout;
  const std::size_t n = V.g.dim();
  TgRep<T> r{V.g, ce.complex, {}, {}};
  for (std::size_t a = 0; a < n; ++a) {
    GradedOperator<T> b(lay.space(), lay.space(), -1);
    GradedOperator<T> l(lay.space(), lay.space(), 0);
    const auto& ra = V.R[a].matrix();
    for (std::size_t col = 0; col < lay.basis().size(); ++col) {
      auto [s, v] = lay.basis()[col];
      if (contains(s, a)) {
        const T sign(koszul(count_below(s, a)));
        b.raw(lay.index(s & ~(Subset(1) << a), v), col) += sign;
      }
      // L_a e^s = -sum_k c(a,k,s) e^k, extended as a derivation.
      const auto xs = elements(s);
      for (std::size_t i = 0; i < xs.size(); ++i)
        for (std::size_t k = 0; k < n; ++k) {
          const T& c = V.g.c(a, k, xs[i]);
          if (Field<T>::is_zero(c)) continue;
          auto ys = xs;
          ys[i] = k;
          detail::add_basis(l, lay, ys, T(-c), v, col);
        }
      detail::add_term(l, lay, xs, T(1), ra, v, col);
    }
    r.B.push_back(std::move(b));
    r.L.push_back(std::move(l));
  }
  return r;
}

/// Wedge product CE(g) x CE(g,V) -> CE(g,V): (e^S) . (e^T (x) v) = merge_sign e^{S+T} (x) v.
template <class T>
GradedOperator<T> wedge_operator(const CELayout& lay, Subset s) {
  GradedOperator<T> out(lay.space(), lay.space(), lay.flavor() == CEFlavor::chain ? -popcount(s) : popcount(s));
  for (std::size_t col = 0; col < lay.basis().size(); ++col) {
    auto [t, v] = lay.basis()[col];
    int sg = merge_sign(s, t);
    if (sg != 0) out.raw(lay.index(s | t, v), col) += T(sg);
  }
  return out;
}

/// max over basis eta in CE(g), omega in CE(g,V) with |eta|+|omega| <= maxdeg of
/// |delta(eta omega) - (delta_CE eta) omega - (-1)^{|eta|} eta delta omega|.
template <class T>
double leibniz_check(const GRep<T>& V, int maxdeg = 1 << 20) {
  auto ce = ce_cochain(V);
  auto ce0 = ce_cochain(trivial_grep(V.g));
  const auto& lay = ce.layout;
  const auto& d = ce.complex.differential.matrix();
  const auto& d0 = ce0.complex.differential.matrix();
  const std::size_t n = V.g.dim();
  double worst = 0.0;
  for (std::size_t m = 0; m <= n; ++m)
    for (Subset s : subsets_of_size(n, m)) {
      auto eta = wedge_operator<T>(lay, s);
      // delta_CE eta as a combination of wedge operators.
      GradedOperator<T> deta(lay.space(), lay.space(), static_cast<int>(m) + 1);
      const std::size_t col0 = ce0.layout.index(s, 0);
      for (std::size_t r = 0; r < d0.rows(); ++r)
        if (!Field<T>::is_zero(d0(r, col0))) deta.add_scaled(d0(r, col0), wedge_operator<T>(lay, ce0.layout.basis()[r].first));
      Matrix<T> lhs = d * eta.matrix();
      Matrix<T> rhs = deta.matrix() + eta.matrix() * d * T(koszul(static_cast<long>(m)));
      Matrix<T> diff = lhs - rhs;
      const auto deg = lay.space().basis_degrees();
      for (std::size_t c = 0; c < diff.cols(); ++c) {
        if (static_cast<int>(m) + deg[c] > maxdeg) continue;
        for (std::size_t r = 0; r < diff.rows(); ++r) worst = std::max(worst, magnitude(diff(r, c)));
      }
    }
  return worst;
}

struct AdjunctionReport {
  bool precondition = true;      // W satisfies the Cartan relations and V is a g-representation
  std::size_t dim_tg = 0;        // dim Hom_Tg(U(V), W)
  std::size_t dim_g = 0;         // dim Hom_g(V, F(W))
  std::size_t restriction_rank = 0;
  double reconstruction = 0.0;   // max equivariance residual of maps rebuilt from g-maps
  bool passed() const { return precondition && dim_tg == dim_g && restriction_rank == dim_tg && reconstruction == 0.0; }
  bool passed(double tol) const {
    return precondition && dim_tg == dim_g && restriction_rank == dim_tg && reconstruction <= tol;
  }
};

/// The restriction Hom_Tg(U(V), W) -> Hom_g(V, F(W)) is a bijection; each g-map psi extends as
/// phi(e_{x_1..x_m} (x) v) = B_{x_1} ... B_{x_m} psi(v).
template <class T>
AdjunctionReport adjunction_check(const GRep<T>& V, const TgRep<T>& W, double tol = 1e-9) {
  AdjunctionReport rep;
  const double ptol = Field<T>::exact ? 0.0 : tol;
  if (!check_cartan(W).ok(ptol) || !check_grep(V).ok(ptol) || !(V.g == W.g)) {
    rep.precondition = false;
    return rep;
  }
  auto U = functor_U(V);
  auto homs = hom_space(U, W, tol);
  auto gmaps = hom_g(V, forgetful_F(W), tol);
  rep.dim_tg = homs.size();
  rep.dim_g = gmaps.size();

  CELayout lay(V.g.dim(), V.space(), CEFlavor::chain);
  const std::size_t nv = V.space().total();
  const std::size_t nw = W.space().total();
  Matrix<T> restr(nv * nw, homs.size());
  for (std::size_t h = 0; h < homs.size(); ++h)
    for (std::size_t v = 0; v < nv; ++v)
      for (std::size_t w = 0; w < nw; ++w) restr(v * nw + w, h) = homs[h].matrix()(w, lay.index(0, v));
  rep.restriction_rank = LinAlg<T>::rank(restr, tol);

  for (auto& psi : gmaps) {
    GradedOperator<T> phi(U.space(), W.space(), 0);
    for (std::size_t col = 0; col < lay.basis().size(); ++col) {
      auto [s, v] = lay.basis()[col];
      Matrix<T> img = psi.matrix().block(0, v, nw, 1);
      auto xs = elements(s);
      for (std::size_t i = xs.size(); i-- > 0;) img = W.B[xs[i]].matrix() * img;
      for (std::size_t w = 0; w < nw; ++w) phi.raw(w, col) = img(w, 0);
    }
    double res = magnitude((phi * U.delta() - W.delta() * phi).max_abs());
    for (std::size_t i = 0; i < V.g.dim(); ++i) {
      res = std::max(res, magnitude((phi * U.L[i] - W.L[i] * phi).max_abs()));
      res = std::max(res, magnitude((phi * U.B[i] - W.B[i] * phi).max_abs()));
    }
    rep.reconstruction = std::max(rep.reconstruction, res);
  }
  return rep;
}

}  // namespace cartankit
