#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "cartankit/graded.hpp"
#include "cartankit/lie.hpp"
#include "cartankit/linalg.hpp"

namespace cartankit {

/// Representation of g on a cochain complex: R_i of degree 0 commuting with the differential.
template <class T>
struct GRep {
  LieAlgebra<T> g;
  CochainComplex<T> complex;
  std::vector<GradedOperator<T>> R;

  const GradedVectorSpace& space() const { return complex.space; }
};

/// Representation of Tg: L_i of degree 0, B_i of degree -1, plus the differential.
template <class T>
struct TgRep {
  LieAlgebra<T> g;
  CochainComplex<T> complex;
  std::vector<GradedOperator<T>> L;
  std::vector<GradedOperator<T>> B;

  const GradedVectorSpace& space() const { return complex.space; }
  const GradedOperator<T>& delta() const { return complex.differential; }

  /// B(x) = sum x^i B_i, and likewise for L.
  GradedOperator<T> B_of(const Vector<T>& x) const { return combine(B, x, -1); }
  GradedOperator<T> L_of(const Vector<T>& x) const { return combine(L, x, 0); }

 private:
  GradedOperator<T> combine(const std::vector<GradedOperator<T>>& ops, const Vector<T>& x, int deg) const {
    GradedOperator<T> out(space(), space(), deg);
    for (std::size_t i = 0; i < ops.size(); ++i)
      if (!Field<T>::is_zero(x.at(i))) out.add_scaled(x[i], ops[i]);
    return out;
  }
};

template <class U, class T>
GradedOperator<U> convert_operator(const GradedOperator<T>& f) {
  return GradedOperator<U>(f.source(), f.target(), f.degree(), convert_matrix<U>(f.matrix()));
}

template <class U, class T>
TgRep<U> convert_rep(const TgRep<T>& r) {
  TgRep<U> out{r.g.template convert<U>(), {r.complex.space, convert_operator<U>(r.complex.differential)}, {}, {}};
  for (auto& l : r.L) out.L.push_back(convert_operator<U>(l));
  for (auto& b : r.B) out.B.push_back(convert_operator<U>(b));
  return out;
}

template <class U, class T>
GRep<U> convert_grep(const GRep<T>& r) {
  GRep<U> out{r.g.template convert<U>(), {r.complex.space, convert_operator<U>(r.complex.differential)}, {}};
  for (auto& x : r.R) out.R.push_back(convert_operator<U>(x));
  return out;
}

struct CartanReport {
  double ll = 0.0;     // [L_i,L_j] - c L_k
  double lb = 0.0;     // [L_i,B_j] - c B_k
  double bb = 0.0;     // [B_i,B_j]
  double dbl = 0.0;    // [delta,B_i] - L_i
  double shape = 0.0;  // 1 if any operator has the wrong degree or spaces
  double max() const { return std::max({ll, lb, bb, dbl, shape}); }
  bool ok(double tol) const { return max() <= tol; }
};

template <class T>
bool rep_shapes_ok(const TgRep<T>& r) {
  const auto& v = r.space();
  const std::size_t n = r.g.dim();
  if (r.L.size() != n || r.B.size() != n) return false;
  auto fits = [&](const GradedOperator<T>& f, int deg) {
    return f.source() == v && f.target() == v && f.degree() == deg;
  };
  if (!fits(r.delta(), 1)) return false;
  for (std::size_t i = 0; i < n; ++i)
    if (!fits(r.L[i], 0) || !fits(r.B[i], -1)) return false;
  return true;
}

template <class T>
CartanReport check_cartan(const TgRep<T>& r) {
  CartanReport rep;
  if (!rep_shapes_ok(r)) {
    rep.shape = 1.0;
    return rep;
  }
  const std::size_t n = r.g.dim();
  auto upd = [](double& acc, const GradedOperator<T>& f) { acc = std::max(acc, magnitude(f.max_abs())); };
  for (std::size_t i = 0; i < n; ++i) {
    upd(rep.dbl, graded_commutator(r.delta(), r.B[i]) - r.L[i]);
    for (std::size_t j = 0; j < n; ++j) {
      auto ll = graded_commutator(r.L[i], r.L[j]);
      auto lb = graded_commutator(r.L[i], r.B[j]);
      for (std::size_t k = 0; k < n; ++k) {
        const T& c = r.g.c(i, j, k);
        if (Field<T>::is_zero(c)) continue;
        ll.add_scaled(-c, r.L[k]);
        lb.add_scaled(-c, r.B[k]);
      }
      upd(rep.ll, ll);
      upd(rep.lb, lb);
      if (j >= i) upd(rep.bb, graded_commutator(r.B[i], r.B[j]));
    }
  }
  return rep;
}

struct GRepReport {
  double hom = 0.0;      // [R_i,R_j] - c R_k
  double chain = 0.0;    // [delta, R_i]
  double d2 = 0.0;       // delta o delta
  double shape = 0.0;
  double max() const { return std::max({hom, chain, d2, shape}); }
  bool ok(double tol) const { return max() <= tol; }
};

template <class T>
GRepReport check_grep(const GRep<T>& r) {
  GRepReport rep;
  const auto& v = r.space();
  if (r.R.size() != r.g.dim() || r.complex.differential.degree() != 1 || r.complex.differential.source() != v) {
    rep.shape = 1.0;
    return rep;
  }
  for (auto& x : r.R)
    if (x.degree() != 0 || x.source() != v || x.target() != v) {
      rep.shape = 1.0;
      return rep;
    }
  rep.d2 = magnitude(square_residual(r.complex));
  const std::size_t n = r.g.dim();
  for (std::size_t i = 0; i < n; ++i) {
    rep.chain = std::max(rep.chain, magnitude(graded_commutator(r.complex.differential, r.R[i]).max_abs()));
    for (std::size_t j = 0; j < n; ++j) {
      auto c = graded_commutator(r.R[i], r.R[j]);
      for (std::size_t k = 0; k < n; ++k)
        if (!Field<T>::is_zero(r.g.c(i, j, k))) c.add_scaled(-r.g.c(i, j, k), r.R[k]);
      rep.hom = std::max(rep.hom, magnitude(c.max_abs()));
    }
  }
  return rep;
}

/// Zero action and zero differential on the given graded space.
template <class T>
TgRep<T> trivial_rep(const LieAlgebra<T>& g, const GradedVectorSpace& v = GradedVectorSpace::unit()) {
  TgRep<T> r{g, CochainComplex<T>::zero(v), {}, {}};
  for (std::size_t i = 0; i < g.dim(); ++i) {
    r.L.push_back(GradedOperator<T>::zero(v, v, 0));
    r.B.push_back(GradedOperator<T>::zero(v, v, -1));
  }
  return r;
}

template <class T>
GRep<T> trivial_grep(const LieAlgebra<T>& g, const GradedVectorSpace& v = GradedVectorSpace::unit()) {
  GRep<T> r{g, CochainComplex<T>::zero(v), {}};
  for (std::size_t i = 0; i < g.dim(); ++i) r.R.push_back(GradedOperator<T>::zero(v, v, 0));
  return r;
}

/// g acting on itself in degree 0.
template <class T>
GRep<T> adjoint_grep(const LieAlgebra<T>& g) {
  GradedVectorSpace v(std::map<int, std::size_t>{{0, g.dim()}});
  GRep<T> r{g, CochainComplex<T>::zero(v), {}};
  for (std::size_t i = 0; i < g.dim(); ++i) r.R.emplace_back(v, v, 0, g.ad_matrix(g.basis_vector(i)));
  return r;
}

/// F: keep the complex and L, drop B.
template <class T>
GRep<T> forgetful_F(const TgRep<T>& r) {
  return {r.g, r.complex, r.L};
}

template <class T>
TgRep<T> tensor_rep(const TgRep<T>& a, const TgRep<T>& b) {
  if (!(a.g == b.g)) throw std::invalid_argument("tensor_rep: representations of different Lie algebras");
  auto ia = GradedOperator<T>::identity(a.space());
  auto ib = GradedOperator<T>::identity(b.space());
  TgRep<T> r{a.g, tensor_complex(a.complex, b.complex), {}, {}};
  for (std::size_t i = 0; i < a.g.dim(); ++i) {
    r.L.push_back(nat(a.L[i], ib) + nat(ia, b.L[i]));
    r.B.push_back(nat(a.B[i], ib) + nat(ia, b.B[i]));
  }
  return r;
}

template <class T>
GRep<T> tensor_grep(const GRep<T>& a, const GRep<T>& b) {
  auto ia = GradedOperator<T>::identity(a.space());
  auto ib = GradedOperator<T>::identity(b.space());
  GRep<T> r{a.g, tensor_complex(a.complex, b.complex), {}};
  for (std::size_t i = 0; i < a.g.dim(); ++i) r.R.push_back(nat(a.R[i], ib) + nat(ia, b.R[i]));
  return r;
}

/// (V*)^p = (V^{-p})*, each block keeping the basis order of V^{-p}.
inline GradedVectorSpace dual_space(const GradedVectorSpace& v) {
  std::map<int, std::size_t> dims;
  for (auto& [p, n] : v.dims()) dims[-p] = n;
  return GradedVectorSpace(dims);
}

/// Dual block-transpose with a per-degree sign: (f*)_p = sign(p) * (f_{-p-|f|})^T.
template <class T, class SignFn>
GradedOperator<T> dual_operator(const GradedOperator<T>& f, SignFn sign) {
  const auto vs = dual_space(f.target());
  const auto vt = dual_space(f.source());
  GradedOperator<T> out(vs, vt, f.degree());
  for (auto& [p, n] : vs.dims()) {
    (void)n;
    const int q = -p - f.degree();  // f_q : V^q -> V^{-p}
    if (f.source().dim(q) == 0) continue;
    Matrix<T> blk = f.block(q).transpose();
    if (sign(p) < 0) blk = -blk;
    out.set_block(p, blk);
  }
  return out;
}

/// Signs fixed by requiring ev(v (x) phi) = phi(v) to be a morphism onto the trivial module:
/// L*_p = -L_{-p}^T, B*_p = (-1)^p B_{1-p}^T, delta*_p = (-1)^p delta_{-p-1}^T.
template <class T>
TgRep<T> dual_rep(const TgRep<T>& r) {
  auto alt = [](int p) { return koszul(p); };
  auto neg = [](int) { return -1; };
  TgRep<T> out{r.g, {dual_space(r.space()), dual_operator(r.delta(), alt)}, {}, {}};
  for (std::size_t i = 0; i < r.g.dim(); ++i) {
    out.L.push_back(dual_operator(r.L[i], neg));
    out.B.push_back(dual_operator(r.B[i], alt));
  }
  return out;
}

/// Global index in V* of the functional dual to basis vector i of V.
inline std::size_t dual_index(const GradedVectorSpace& v, std::size_t i) {
  const int p = v.degree_of(i);
  return dual_space(v).offset(-p) + (i - v.offset(p));
}

/// Max over X in {delta, L_i, B_i} of |ev o X_{V (x) V*}|, where ev(v_i (x) phi_j) = delta_ij.
/// On v_i (x) phi_j this is phi_j(X v_i) + (-1)^{|v_i||X|} (X* phi_j)(v_i); zero iff ev is a morphism.
template <class T>
double pairing_residual(const TgRep<T>& r, const TgRep<T>& rdual) {
  const auto& v = r.space();
  const std::size_t n = v.total();
  const auto deg = v.basis_degrees();
  std::vector<std::size_t> dual(n);
  for (std::size_t i = 0; i < n; ++i) dual[i] = dual_index(v, i);
  double m = 0.0;
  auto one = [&](const GradedOperator<T>& x, const GradedOperator<T>& xd) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        T s = x(j, i);
        const T t = xd(dual[i], dual[j]);
        s += koszul(static_cast<long>(deg[i]) * x.degree()) > 0 ? t : T(-t);
        m = std::max(m, magnitude(s));
      }
  };
  one(r.delta(), rdual.delta());
  for (std::size_t i = 0; i < r.g.dim(); ++i) {
    one(r.L[i], rdual.L[i]);
    one(r.B[i], rdual.B[i]);
  }
  return m;
}

/// Basis of degree-0 maps phi: V -> W with phi X = Y phi for every pair (X, Y).
template <class T>
std::vector<GradedOperator<T>> intertwiners(const GradedVectorSpace& v, const GradedVectorSpace& w,
                                            const std::vector<std::pair<const GradedOperator<T>*,
                                                                        const GradedOperator<T>*>>& pairs,
                                            double tol) {
  // Unknowns: entries of phi inside the homogeneous blocks.
  std::vector<std::vector<long>> var(w.total(), std::vector<long>(v.total(), -1));
  std::size_t nvars = 0;
  const auto vdeg = v.basis_degrees();
  const auto wdeg = w.basis_degrees();
  for (std::size_t r = 0; r < w.total(); ++r)
    for (std::size_t c = 0; c < v.total(); ++c)
      if (wdeg[r] == vdeg[c]) var[r][c] = static_cast<long>(nvars++);

  std::vector<std::map<std::size_t, T>> eqs;
  for (auto& [xp, yp] : pairs) {
    const auto& x = xp->matrix();
    const auto& y = yp->matrix();
    // (phi X - Y phi)(r, c)
    for (std::size_t r = 0; r < w.total(); ++r)
      for (std::size_t c = 0; c < v.total(); ++c) {
        if (wdeg[r] != vdeg[c] + xp->degree()) continue;
        std::map<std::size_t, T> acc;
        for (std::size_t k = 0; k < v.total(); ++k)
          if (var[r][k] >= 0 && !Field<T>::is_zero(x(k, c))) acc[var[r][k]] += x(k, c);
        for (std::size_t k = 0; k < w.total(); ++k)
          if (var[k][c] >= 0 && !Field<T>::is_zero(y(r, k))) acc[var[k][c]] -= y(r, k);
        if (!acc.empty()) eqs.push_back(std::move(acc));
      }
  }

  Matrix<T> basis;
  if constexpr (Field<T>::exact) {
    SparseReducer red(nvars);
    for (auto& eq : eqs) {
      SparseReducer::Row row;
      for (auto& [col, val] : eq)
        if (!Field<T>::is_zero(val)) row.emplace_back(col, val);
      if (!row.empty()) red.add(std::move(row));
    }
    basis = red.nullspace();
  } else {
    Matrix<double> sys(eqs.size(), nvars);
    for (std::size_t i = 0; i < eqs.size(); ++i)
      for (auto& [col, val] : eqs[i]) sys(i, col) = val;
    basis = nullspace(sys, tol);
  }

  std::vector<GradedOperator<T>> out;
  for (std::size_t b = 0; b < basis.cols(); ++b) {
    GradedOperator<T> phi(v, w, 0);
    for (std::size_t r = 0; r < w.total(); ++r)
      for (std::size_t c = 0; c < v.total(); ++c)
        if (var[r][c] >= 0) phi.raw(r, c) = basis(static_cast<std::size_t>(var[r][c]), b);
    out.push_back(std::move(phi));
  }
  return out;
}

/// Basis of Tg-equivariant degree-0 chain maps.
template <class T>
std::vector<GradedOperator<T>> hom_space(const TgRep<T>& a, const TgRep<T>& b, double tol = 1e-9) {
  std::vector<std::pair<const GradedOperator<T>*, const GradedOperator<T>*>> pairs;
  pairs.emplace_back(&a.delta(), &b.delta());
  for (std::size_t i = 0; i < a.g.dim(); ++i) {
    pairs.emplace_back(&a.L[i], &b.L[i]);
    pairs.emplace_back(&a.B[i], &b.B[i]);
  }
  return intertwiners(a.space(), b.space(), pairs, tol);
}

/// Basis of g-equivariant degree-0 chain maps.
template <class T>
std::vector<GradedOperator<T>> hom_g(const GRep<T>& a, const GRep<T>& b, double tol = 1e-9) {
  std::vector<std::pair<const GradedOperator<T>*, const GradedOperator<T>*>> pairs;
  pairs.emplace_back(&a.complex.differential, &b.complex.differential);
  for (std::size_t i = 0; i < a.g.dim(); ++i) pairs.emplace_back(&a.R[i], &b.R[i]);
  return intertwiners(a.space(), b.space(), pairs, tol);
}

}  // namespace cartankit
