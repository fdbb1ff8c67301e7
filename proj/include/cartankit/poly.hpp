#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>

#include "cartankit/matrix.hpp"

namespace cartankit {

/// Exponent vectors packed 8 bits per variable (at most 8 variables, degree < 256 per variable).
using Monomial = std::uint64_t;

inline unsigned exponent(Monomial m, std::size_t var) { return static_cast<unsigned>((m >> (8 * var)) & 0xffu); }
inline Monomial var_monomial(std::size_t var) { return Monomial(1) << (8 * var); }

/// Multiplies monomials; throws if any exponent would overflow.
inline Monomial mono_mul(Monomial a, Monomial b, std::size_t nvars) {
  for (std::size_t v = 0; v < nvars; ++v)
    if (exponent(a, v) + exponent(b, v) > 255) throw std::overflow_error("polynomial degree too large");
  return a + b;
}

/// Polynomial in nvars variables with scalar coefficients.
struct PolyScalar {
  std::size_t nvars = 0;
  std::map<Monomial, Rational> terms;

  static PolyScalar constant(std::size_t nvars, const Rational& c) {
    PolyScalar p{nvars, {}};
    if (sgn(c) != 0) p.terms[0] = c;
    return p;
  }
  PolyScalar operator*(const PolyScalar& o) const {
    PolyScalar r{nvars, {}};
    for (auto& [ma, ca] : terms)
      for (auto& [mb, cb] : o.terms) r.terms[mono_mul(ma, mb, nvars)] += ca * cb;
    r.prune();
    return r;
  }
  void prune() {
    for (auto it = terms.begin(); it != terms.end();) it = sgn(it->second) == 0 ? terms.erase(it) : std::next(it);
  }
};

/// Polynomial in nvars variables with matrix coefficients.
struct PolyMatrix {
  std::size_t nvars = 0;
  std::size_t rows = 0, cols = 0;
  std::map<Monomial, Matrix<Rational>> terms;

  static PolyMatrix constant(std::size_t nvars, const Matrix<Rational>& m) {
    PolyMatrix p{nvars, m.rows(), m.cols(), {}};
    if (!m.is_zero()) p.terms[0] = m;
    return p;
  }
  /// sum_j s_j (x) M_j
  void add_product(const PolyScalar& s, const Matrix<Rational>& m) {
    if (m.is_zero()) return;
    for (auto& [mono, c] : s.terms) {
      auto it = terms.find(mono);
      if (it == terms.end())
        terms.emplace(mono, m * c);
      else
        it->second.add_scaled(c, m);
    }
  }
  PolyMatrix operator*(const PolyMatrix& o) const {
    if (cols != o.rows) throw ShapeError("polynomial matrix product shape mismatch");
    PolyMatrix r{nvars, rows, o.cols, {}};
    for (auto& [ma, a] : terms)
      for (auto& [mb, b] : o.terms) {
        Matrix<Rational> prod = a * b;
        auto key = mono_mul(ma, mb, nvars);
        auto it = r.terms.find(key);
        if (it == r.terms.end())
          r.terms.emplace(key, std::move(prod));
        else
          it->second += prod;
      }
    r.prune();
    return r;
  }
  void prune() {
    for (auto it = terms.begin(); it != terms.end();) it = it->second.is_zero() ? terms.erase(it) : std::next(it);
  }
};

/// Integral of a monomial over 1 >= t_1 >= ... >= t_k >= 0: prod_j 1/(a_j + ... + a_k + k - j + 1).
inline Rational simplex_monomial_integral(Monomial m, std::size_t k) {
  Rational r(1);
  unsigned tail = 0;
  for (std::size_t j = k; j-- > 0;) {
    tail += exponent(m, j) + 1;
    r /= tail;
  }
  return r;
}

/// Integral of a monomial over [0,1]^k.
inline Rational cube_monomial_integral(Monomial m, std::size_t k) {
  Rational r(1);
  for (std::size_t j = 0; j < k; ++j) r /= exponent(m, j) + 1;
  return r;
}

}  // namespace cartankit
