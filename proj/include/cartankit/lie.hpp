#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "cartankit/graded.hpp"
#include "cartankit/linalg.hpp"

namespace cartankit {

/// Finite-dimensional Lie algebra by structure constants: [e_i, e_j] = sum_k c(i,j,k) e_k.
template <class T>
class LieAlgebra {
 public:
  LieAlgebra() = default;
  explicit LieAlgebra(std::size_t n, std::vector<std::string> labels = {})
      : n_(n), c_(n * n * n, T(0)), labels_(std::move(labels)) {
    if (labels_.empty())
      for (std::size_t i = 0; i < n; ++i) labels_.push_back("e" + std::to_string(i));
    if (labels_.size() != n) throw ShapeError("label count differs from dimension");
  }

  std::size_t dim() const { return n_; }
  const std::vector<std::string>& labels() const { return labels_; }

  const T& c(std::size_t i, std::size_t j, std::size_t k) const { return c_[(i * n_ + j) * n_ + k]; }
  /// Raw write; no antisymmetric completion.
  void set_raw(std::size_t i, std::size_t j, std::size_t k, const T& v) { c_[(i * n_ + j) * n_ + k] = v; }
  /// Sets c(i,j,k) and c(j,i,k) = -v.
  void set_bracket(std::size_t i, std::size_t j, std::size_t k, const T& v) {
    if (i >= n_ || j >= n_ || k >= n_) throw ShapeError("structure constant index out of range");
    if (i == j) {
      if (!Field<T>::is_zero(v)) throw std::invalid_argument("[e_i, e_i] must vanish");
      return;
    }
    set_raw(i, j, k, v);
    set_raw(j, i, k, -v);
  }

  Vector<T> basis_vector(std::size_t i) const {
    Vector<T> v(n_, T(0));
    v.at(i) = T(1);
    return v;
  }

  Vector<T> bracket(const Vector<T>& x, const Vector<T>& y) const {
    if (x.size() != n_ || y.size() != n_) throw ShapeError("Lie vector dimension mismatch");
    Vector<T> out(n_, T(0));
    for (std::size_t i = 0; i < n_; ++i) {
      if (Field<T>::is_zero(x[i])) continue;
      for (std::size_t j = 0; j < n_; ++j) {
        if (Field<T>::is_zero(y[j])) continue;
        T xy = x[i] * y[j];
        for (std::size_t k = 0; k < n_; ++k)
          if (!Field<T>::is_zero(c(i, j, k))) out[k] += c(i, j, k) * xy;
      }
    }
    return out;
  }

  /// (ad_x)_{kj} = sum_i c(i,j,k) x^i
  Matrix<T> ad_matrix(const Vector<T>& x) const {
    if (x.size() != n_) throw ShapeError("Lie vector dimension mismatch");
    Matrix<T> m(n_, n_);
    for (std::size_t i = 0; i < n_; ++i) {
      if (Field<T>::is_zero(x[i])) continue;
      for (std::size_t j = 0; j < n_; ++j)
        for (std::size_t k = 0; k < n_; ++k)
          if (!Field<T>::is_zero(c(i, j, k))) m(k, j) += c(i, j, k) * x[i];
    }
    return m;
  }

  /// exp(t ad_x)
  Matrix<T> Ad_exp(const Vector<T>& x, const T& t) const { return LinAlg<T>::expm(ad_matrix(x) * t); }

  bool operator==(const LieAlgebra& o) const { return n_ == o.n_ && c_ == o.c_; }

  template <class U>
  LieAlgebra<U> convert() const {
    LieAlgebra<U> out(n_, labels_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j)
        for (std::size_t k = 0; k < n_; ++k) {
          if constexpr (std::is_same_v<U, double> && std::is_same_v<T, Rational>)
            out.set_raw(i, j, k, c(i, j, k).get_d());
          else
            out.set_raw(i, j, k, U(c(i, j, k)));
        }
    return out;
  }

 private:
  std::size_t n_ = 0;
  std::vector<T> c_;
  std::vector<std::string> labels_;
};

struct JacobiReport {
  double antisymmetry = 0.0;
  double jacobi = 0.0;
  bool ok(double tol) const { return antisymmetry <= tol && jacobi <= tol; }
};

template <class T>
JacobiReport check_jacobi(const LieAlgebra<T>& g) {
  const std::size_t n = g.dim();
  T anti(0), jac(0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        T a = Field<T>::abs(g.c(i, j, k) + g.c(j, i, k));
        if (a > anti) anti = a;
      }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) {
          T s(0);
          for (std::size_t m = 0; m < n; ++m)
            s += g.c(i, j, m) * g.c(m, k, l) + g.c(j, k, m) * g.c(m, i, l) + g.c(k, i, m) * g.c(m, j, l);
          T a = Field<T>::abs(s);
          if (a > jac) jac = a;
        }
  return {Field<T>::to_double(anti), Field<T>::to_double(jac)};
}

namespace fixtures {

inline LieAlgebra<Rational> abelian(std::size_t n) { return LieAlgebra<Rational>(n); }

/// h3 with [x, y] = z.
inline LieAlgebra<Rational> heisenberg() {
  LieAlgebra<Rational> g(3, {"x", "y", "z"});
  g.set_bracket(0, 1, 2, 1);
  return g;
}

/// sl2 on (e, f, h): [h,e] = 2e, [h,f] = -2f, [e,f] = h.
inline LieAlgebra<Rational> sl2() {
  LieAlgebra<Rational> g(3, {"e", "f", "h"});
  g.set_bracket(0, 1, 2, 1);
  g.set_bracket(2, 0, 0, 2);
  g.set_bracket(2, 1, 1, -2);
  return g;
}

/// su2 with [e_i, e_j] = e_k cyclically.
inline LieAlgebra<Rational> su2() {
  LieAlgebra<Rational> g(3, {"u1", "u2", "u3"});
  g.set_bracket(0, 1, 2, 1);
  g.set_bracket(1, 2, 0, 1);
  g.set_bracket(2, 0, 1, 1);
  return g;
}

}  // namespace fixtures

/// The DG Lie algebra Tg on basis (i_1..i_n in degree -1, L_1..L_n in degree 0).
template <class T>
class TgStructure {
 public:
  explicit TgStructure(const LieAlgebra<T>& g, double tol = 0.0) : g_(g) {
    if (!check_jacobi(g).ok(tol)) throw std::invalid_argument("structure constants do not define a Lie algebra");
    const std::size_t n = g.dim();
    c_.assign(8 * n * n * n, T(0));
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t k = 0; k < n; ++k) {
          const T& v = g.c(a, b, k);
          if (Field<T>::is_zero(v)) continue;
          at(L(a), L(b), L(k)) = v;   // [L,L] = L_[,]
          at(L(a), I(b), I(k)) = v;   // [L,i] = i_[,]
          at(I(b), L(a), I(k)) = -v;  // [i,L] = -[L,i] (|i||L| = 0)
        }
    residuals_ = self_check();
  }

  std::size_t dim() const { return 2 * g_.dim(); }
  const LieAlgebra<T>& base() const { return g_; }
  GradedVectorSpace space() const { return GradedVectorSpace(std::map<int, std::size_t>{{-1, g_.dim()}, {0, g_.dim()}}); }
  std::size_t I(std::size_t j) const { return j; }
  std::size_t L(std::size_t j) const { return g_.dim() + j; }
  int degree(std::size_t a) const { return a < g_.dim() ? -1 : 0; }

  /// Coefficient of basis element c in [a, b].
  const T& bracket(std::size_t a, std::size_t b, std::size_t c) const { return c_[(a * dim() + b) * dim() + c]; }
  /// d(i_j) = L_j, d(L_j) = 0; returns image coordinates of basis element a.
  Vector<T> d(std::size_t a) const {
    Vector<T> v(dim(), T(0));
    if (a < g_.dim()) v[L(a)] = T(1);
    return v;
  }

  struct SelfCheck {
    double graded_antisymmetry = 0.0;
    double graded_jacobi = 0.0;
    double d_squared = 0.0;
    double derivation = 0.0;
  };
  const SelfCheck& residuals() const { return residuals_; }

 private:
  T& at(std::size_t a, std::size_t b, std::size_t c) { return c_[(a * dim() + b) * dim() + c]; }

  Vector<T> br(const Vector<T>& x, const Vector<T>& y) const {
    const std::size_t m = dim();
    Vector<T> out(m, T(0));
    for (std::size_t a = 0; a < m; ++a) {
      if (Field<T>::is_zero(x[a])) continue;
      for (std::size_t b = 0; b < m; ++b) {
        if (Field<T>::is_zero(y[b])) continue;
        for (std::size_t c = 0; c < m; ++c) out[c] += bracket(a, b, c) * x[a] * y[b];
      }
    }
    return out;
  }
  Vector<T> unit(std::size_t a) const {
    Vector<T> v(dim(), T(0));
    v[a] = T(1);
    return v;
  }
  static double vmax(const Vector<T>& v) {
    double m = 0.0;
    for (auto& x : v) m = std::max(m, magnitude(x));
    return m;
  }
  Vector<T> dvec(const Vector<T>& x) const {
    Vector<T> out(dim(), T(0));
    for (std::size_t a = 0; a < g_.dim(); ++a) out[L(a)] = x[I(a)];
    return out;
  }

  SelfCheck self_check() const {
    SelfCheck s;
    const std::size_t m = dim();
    for (std::size_t a = 0; a < m; ++a) {
      s.d_squared = std::max(s.d_squared, vmax(dvec(d(a))));
      for (std::size_t b = 0; b < m; ++b) {
        const long sab = koszul(static_cast<long>(degree(a)) * degree(b));
        Vector<T> ab = br(unit(a), unit(b)), ba = br(unit(b), unit(a));
        Vector<T> anti(m, T(0));
        for (std::size_t c = 0; c < m; ++c) anti[c] = ab[c] + T(sab) * ba[c];
        s.graded_antisymmetry = std::max(s.graded_antisymmetry, vmax(anti));
        // d[a,b] = [da,b] + (-1)^{|a|}[a,db]
        Vector<T> lhs = dvec(ab);
        Vector<T> r1 = br(d(a), unit(b)), r2 = br(unit(a), d(b));
        const T sa(koszul(degree(a)));
        for (std::size_t c = 0; c < m; ++c) lhs[c] -= r1[c] + sa * r2[c];
        s.derivation = std::max(s.derivation, vmax(lhs));
        for (std::size_t c = 0; c < m; ++c) {
          // [a,[b,c]] = [[a,b],c] + (-1)^{|a||b|}[b,[a,c]]
          Vector<T> l = br(unit(a), br(unit(b), unit(c)));
          Vector<T> p = br(ab, unit(c));
          Vector<T> q = br(unit(b), br(unit(a), unit(c)));
          for (std::size_t e = 0; e < m; ++e) l[e] -= p[e] + T(sab) * q[e];
          s.graded_jacobi = std::max(s.graded_jacobi, vmax(l));
        }
      }
    }
    return s;
  }

  LieAlgebra<T> g_;
  std::vector<T> c_;
  SelfCheck residuals_;
};

template <class T>
TgStructure<T> build_Tg(const LieAlgebra<T>& g, double tol = 0.0) {
  return TgStructure<T>(g, tol);
}

}  // namespace cartankit
