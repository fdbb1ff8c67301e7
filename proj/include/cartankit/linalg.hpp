#pragma once

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "cartankit/matrix.hpp"

namespace cartankit {

/// Exact rank by fraction-free (Bareiss) elimination.
std::size_t rank(const Matrix<Rational>& a);
/// Numerical rank: singular values above tol * sigma_max.
std::size_t rank(const Matrix<double>& a, double tol);

/// Columns form a basis of ker(a).
Matrix<Rational> nullspace(const Matrix<Rational>& a);
Matrix<double> nullspace(const Matrix<double>& a, double tol);

/// Solves a x = b by LU with partial pivoting; throws on a singular pivot.
Matrix<double> solve(Matrix<double> a, Matrix<double> b);

/// exp(a) by Pade-13 scaling and squaring.
Matrix<double> expm(const Matrix<double>& a);
/// exp(a) for nilpotent a; throws NonTerminatingError otherwise.
Matrix<Rational> expm(const Matrix<Rational>& a);

/// Smallest m >= 1 with a^m = 0, or 0 if a is not nilpotent.
std::size_t nilpotency_index(const Matrix<Rational>& a);

/// Incremental exact row reduction over sparse rows.
/// Rows are kept fully reduced against each other, keyed by pivot column.
class SparseReducer {
 public:
  using Row = std::vector<std::pair<std::size_t, Rational>>;  // sorted by column, no zeros

  explicit SparseReducer(std::size_t cols) : cols_(cols) {}

  /// Returns true if the row was independent of the current span.
  bool add(Row row);
  std::size_t rank() const { return pivots_.size(); }
  std::size_t cols() const { return cols_; }
  /// Columns form a basis of the solution space of all added rows.
  Matrix<Rational> nullspace() const;

 private:
  std::size_t cols_;
  std::map<std::size_t, Row> pivots_;  // pivot column -> row with leading coefficient 1
};

template <class T>
struct LinAlg;

template <>
struct LinAlg<double> {
  static std::size_t rank(const Matrix<double>& a, double tol) { return cartankit::rank(a, tol); }
  static Matrix<double> nullspace(const Matrix<double>& a, double tol) { return cartankit::nullspace(a, tol); }
  static Matrix<double> expm(const Matrix<double>& a) { return cartankit::expm(a); }
};

template <>
struct LinAlg<Rational> {
  static std::size_t rank(const Matrix<Rational>& a, double) { return cartankit::rank(a); }
  static Matrix<Rational> nullspace(const Matrix<Rational>& a, double) { return cartankit::nullspace(a); }
  static Matrix<Rational> expm(const Matrix<Rational>& a) { return cartankit::expm(a); }
};

}  // namespace cartankit
