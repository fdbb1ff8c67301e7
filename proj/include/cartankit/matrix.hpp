#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "cartankit/field.hpp"

namespace cartankit {

template <class T>
using Vector = std::vector<T>;

/// Dense row-major matrix over double or Rational.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}
  Matrix(std::initializer_list<std::initializer_list<T>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw ShapeError("ragged matrix initializer");
      for (const auto& x : row) data_.push_back(x);
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  const std::vector<T>& data() const { return data_; }

  Matrix& operator+=(const Matrix& o) {
    check_same(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    check_same(o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  Matrix& operator*=(const T& s) {
    for (auto& x : data_) x *= s;
    return *this;
  }

  /// this += s * o
  void add_scaled(const T& s, const Matrix& o) {
    check_same(o);
    for (std::size_t i = 0; i < data_.size(); ++i)
      if (!Field<T>::is_zero(o.data_[i])) data_[i] += s * o.data_[i];
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, const T& s) { return a *= s; }
  friend Matrix operator*(const T& s, Matrix a) { return a *= s; }
  Matrix operator-() const {
    Matrix r(*this);
    for (auto& x : r.data_) x = -x;
    return r;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) { return multiply(a, b); }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  Vector<T> apply(const Vector<T>& v) const {
    if (v.size() != cols_) throw ShapeError("matrix-vector size mismatch");
    Vector<T> out(rows_, T(0));
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c)
        if (!Field<T>::is_zero((*this)(r, c)) && !Field<T>::is_zero(v[c])) out[r] += (*this)(r, c) * v[c];
    return out;
  }

  /// Largest absolute entry (0 for an empty matrix).
  T max_abs() const {
    T m(0);
    for (const auto& x : data_) {
      T a = Field<T>::abs(x);
      if (a > m) m = a;
    }
    return m;
  }

  bool is_zero() const {
    for (const auto& x : data_)
      if (!Field<T>::is_zero(x)) return false;
    return true;
  }

  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_) throw ShapeError("block out of range");
    Matrix b(nr, nc);
    for (std::size_t r = 0; r < nr; ++r)
      for (std::size_t c = 0; c < nc; ++c) b(r, c) = (*this)(r0 + r, c0 + c);
    return b;
  }

  void set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
    if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_) throw ShapeError("block out of range");
    for (std::size_t r = 0; r < b.rows_; ++r)
      for (std::size_t c = 0; c < b.cols_; ++c) (*this)(r0 + r, c0 + c) = b(r, c);
  }

 private:
  void check_same(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw ShapeError("matrix shape mismatch");
  }

  static Matrix multiply(const Matrix& a, const Matrix& b);

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

template <>
inline Matrix<double> Matrix<double>::multiply(const Matrix<double>& a, const Matrix<double>& b) {
  if (a.cols_ != b.rows_) throw ShapeError("matrix product shape mismatch");
  Matrix<double> c(a.rows_, b.cols_);
  const std::size_t n = b.cols_;
  for (std::size_t i = 0; i < a.rows_; ++i) {
    double* crow = &c.data_[i * n];
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const double aik = a.data_[i * a.cols_ + k];
      if (aik == 0.0) continue;
      const double* brow = &b.data_[k * n];
      for (std::size_t j = 0; j < n; ++j) crow[j] += aik * brow[j];
    }
  }
  return c;
}

template <>
inline Matrix<Rational> Matrix<Rational>::multiply(const Matrix<Rational>& a, const Matrix<Rational>& b) {
  if (a.cols_ != b.rows_) throw ShapeError("matrix product shape mismatch");
  Matrix<Rational> c(a.rows_, b.cols_);
  const std::size_t n = b.cols_;
  mpq_t tmp;
  mpq_init(tmp);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const Rational& aik = a.data_[i * a.cols_ + k];
      if (sgn(aik) == 0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        const Rational& bkj = b.data_[k * n + j];
        if (sgn(bkj) == 0) continue;
        mpq_mul(tmp, aik.get_mpq_t(), bkj.get_mpq_t());
        Rational& cij = c.data_[i * n + j];
        mpq_add(cij.get_mpq_t(), cij.get_mpq_t(), tmp);
      }
    }
  }
  mpq_clear(tmp);
  return c;
}

/// Kronecker product a (x) b, row index = ra * b.rows() + rb.
template <class T>
Matrix<T> kron(const Matrix<T>& a, const Matrix<T>& b) {
  Matrix<T> k(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (Field<T>::is_zero(a(i, j))) continue;
      for (std::size_t p = 0; p < b.rows(); ++p)
        for (std::size_t q = 0; q < b.cols(); ++q) k(i * b.rows() + p, j * b.cols() + q) = a(i, j) * b(p, q);
    }
  return k;
}

template <class U, class T>
Matrix<U> convert_matrix(const Matrix<T>& m) {
  Matrix<U> out(m.rows(), m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) {
      if constexpr (std::is_same_v<U, double> && std::is_same_v<T, Rational>)
        out(r, c) = m(r, c).get_d();
      else
        out(r, c) = U(m(r, c));
    }
  return out;
}

template <class U, class T>
Vector<U> convert_vector(const Vector<T>& v) {
  Vector<U> out;
  out.reserve(v.size());
  for (const auto& x : v) {
    if constexpr (std::is_same_v<U, double> && std::is_same_v<T, Rational>)
      out.push_back(x.get_d());
    else
      out.push_back(U(x));
  }
  return out;
}

}  // namespace cartankit
