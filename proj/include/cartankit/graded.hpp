#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "cartankit/linalg.hpp"
#include "cartankit/matrix.hpp"

namespace cartankit {

inline int koszul(long a) { return (a % 2 == 0) ? 1 : -1; }

/// Finite graded vector space. The global basis lists degrees in ascending order.
class GradedVectorSpace {
 public:
  GradedVectorSpace() = default;
  explicit GradedVectorSpace(std::map<int, std::size_t> dims) {
    for (auto& [d, n] : dims)
      if (n > 0) dims_[d] = n;
    std::size_t off = 0;
    for (auto& [d, n] : dims_) {
      offsets_[d] = off;
      off += n;
    }
    total_ = off;
  }

  /// One dimension in degree 0.
  static GradedVectorSpace unit() { return GradedVectorSpace(std::map<int, std::size_t>{{0, 1}}); }

  const std::map<int, std::size_t>& dims() const { return dims_; }
  std::size_t dim(int degree) const {
    auto it = dims_.find(degree);
    return it == dims_.end() ? 0 : it->second;
  }
  std::size_t offset(int degree) const {
    auto it = offsets_.lower_bound(degree);
    return it == offsets_.end() ? total_ : it->second;
  }
  std::size_t total() const { return total_; }

  /// Degree of global basis index idx.
  int degree_of(std::size_t idx) const {
    for (auto& [d, n] : dims_) {
      if (idx < offsets_.at(d) + n) return d;
    }
    throw ShapeError("basis index out of range");
  }
  std::vector<int> basis_degrees() const {
    std::vector<int> out;
    out.reserve(total_);
    for (auto& [d, n] : dims_) out.insert(out.end(), n, d);
    return out;
  }

  friend bool operator==(const GradedVectorSpace& a, const GradedVectorSpace& b) { return a.dims_ == b.dims_; }
  friend bool operator!=(const GradedVectorSpace& a, const GradedVectorSpace& b) { return !(a == b); }

 private:
  std::map<int, std::size_t> dims_;
  std::map<int, std::size_t> offsets_;
  std::size_t total_ = 0;
};

/// Homogeneous linear map of fixed degree, stored as one matrix over the global bases.
/// Invariant: only the blocks target^{p+degree} x source^p may be nonzero.
template <class T>
class GradedOperator {
 public:
  GradedOperator() = default;
  GradedOperator(GradedVectorSpace source, GradedVectorSpace target, int degree)
      : source_(std::move(source)), target_(std::move(target)), degree_(degree),
        mat_(target_.total(), source_.total()) {}
  GradedOperator(GradedVectorSpace source, GradedVectorSpace target, int degree, Matrix<T> mat)
      : source_(std::move(source)), target_(std::move(target)), degree_(degree), mat_(std::move(mat)) {
    if (mat_.rows() != target_.total() || mat_.cols() != source_.total())
      throw ShapeError("operator matrix does not match its spaces");
    check_homogeneous();
  }

  static GradedOperator identity(const GradedVectorSpace& v) {
    return GradedOperator(v, v, 0, Matrix<T>::identity(v.total()));
  }
  static GradedOperator zero(const GradedVectorSpace& s, const GradedVectorSpace& t, int degree) {
    return GradedOperator(s, t, degree);
  }

  const GradedVectorSpace& source() const { return source_; }
  const GradedVectorSpace& target() const { return target_; }
  int degree() const { return degree_; }
  const Matrix<T>& matrix() const { return mat_; }

  /// Block V^p -> W^{p+degree}.
  Matrix<T> block(int p) const {
    return mat_.block(target_.offset(p + degree_), source_.offset(p), target_.dim(p + degree_), source_.dim(p));
  }
  void set_block(int p, const Matrix<T>& b) {
    if (b.rows() != target_.dim(p + degree_) || b.cols() != source_.dim(p))
      throw ShapeError("block shape mismatch at degree " + std::to_string(p));
    mat_.set_block(target_.offset(p + degree_), source_.offset(p), b);
  }
  /// Entry between global basis indices; writing outside the homogeneous blocks is a ShapeError.
  void set(std::size_t row, std::size_t col, const T& x) {
    if (target_.degree_of(row) != source_.degree_of(col) + degree_) throw ShapeError("inhomogeneous entry");
    mat_(row, col) = x;
  }
  T& raw(std::size_t row, std::size_t col) { return mat_(row, col); }
  const T& operator()(std::size_t row, std::size_t col) const { return mat_(row, col); }

  T max_abs() const { return mat_.max_abs(); }
  bool is_zero() const { return mat_.is_zero(); }

  GradedOperator& operator+=(const GradedOperator& o) {
    same_shape(o);
    mat_ += o.mat_;
    return *this;
  }
  GradedOperator& operator-=(const GradedOperator& o) {
    same_shape(o);
    mat_ -= o.mat_;
    return *this;
  }
  GradedOperator& operator*=(const T& s) {
    mat_ *= s;
    return *this;
  }
  void add_scaled(const T& s, const GradedOperator& o) {
    same_shape(o);
    mat_.add_scaled(s, o.mat_);
  }
  friend GradedOperator operator+(GradedOperator a, const GradedOperator& b) { return a += b; }
  friend GradedOperator operator-(GradedOperator a, const GradedOperator& b) { return a -= b; }
  friend GradedOperator operator*(GradedOperator a, const T& s) { return a *= s; }
  friend GradedOperator operator*(const T& s, GradedOperator a) { return a *= s; }
  GradedOperator operator-() const { return GradedOperator(source_, target_, degree_, -mat_); }

  /// this o g
  friend GradedOperator operator*(const GradedOperator& f, const GradedOperator& g) { return compose(f, g); }

  friend bool operator==(const GradedOperator& a, const GradedOperator& b) {
    return a.degree_ == b.degree_ && a.source_ == b.source_ && a.target_ == b.target_ && a.mat_ == b.mat_;
  }

 private:
  void same_shape(const GradedOperator& o) const {
    if (degree_ != o.degree_ || source_ != o.source_ || target_ != o.target_)
      throw ShapeError("graded operators differ in degree or spaces");
  }
  void check_homogeneous() const {
    auto sd = source_.basis_degrees();
    auto td = target_.basis_degrees();
    for (std::size_t r = 0; r < mat_.rows(); ++r)
      for (std::size_t c = 0; c < mat_.cols(); ++c)
        if (!Field<T>::is_zero(mat_(r, c)) && td[r] != sd[c] + degree_)
          throw ShapeError("operator entry outside its degree blocks");
  }

  GradedVectorSpace source_;
  GradedVectorSpace target_;
  int degree_ = 0;
  Matrix<T> mat_;
};

template <class T>
GradedOperator<T> compose(const GradedOperator<T>& f, const GradedOperator<T>& g) {
  if (g.target() != f.source()) throw ShapeError("compose: target of g differs from source of f");
  return GradedOperator<T>(g.source(), f.target(), f.degree() + g.degree(), f.matrix() * g.matrix());
}

/// f o g - (-1)^{|f||g|} g o f
template <class T>
GradedOperator<T> graded_commutator(const GradedOperator<T>& f, const GradedOperator<T>& g) {
  auto fg = compose(f, g);
  auto gf = compose(g, f);
  if (koszul(static_cast<long>(f.degree()) * g.degree()) > 0) return fg - gf;
  return fg + gf;
}

template <class T>
struct CochainComplex {
  GradedVectorSpace space;
  GradedOperator<T> differential;  // degree +1

  static CochainComplex zero(const GradedVectorSpace& v) {
    return {v, GradedOperator<T>::zero(v, v, 1)};
  }
};

/// Index bookkeeping for V (x) W: degree n ascending, then p = |v| ascending, then v major, w minor.
class TensorLayout {
 public:
  TensorLayout(const GradedVectorSpace& v, const GradedVectorSpace& w) : v_(v), w_(w) {
    std::map<int, std::size_t> dims;
    for (auto& [p, a] : v.dims())
      for (auto& [q, b] : w.dims()) dims[p + q] += a * b;
    space_ = GradedVectorSpace(dims);
    std::map<int, std::size_t> fill;
    std::map<std::pair<int, int>, std::size_t> pair_offset;
    for (auto& [p, a] : v.dims())
      for (auto& [q, b] : w.dims()) {
        std::size_t& f = fill[p + q];
        pair_offset[{p, q}] = space_.offset(p + q) + f;
        f += a * b;
      }
    // Flattened lookup: base(i, j) + local(i) * dim(q) + local(j).
    vblock_.resize(v.total());
    vlocal_.resize(v.total());
    wblock_.resize(w.total());
    wlocal_.resize(w.total());
    std::size_t bi = 0;
    for (auto& [p, a] : v.dims()) {
      for (std::size_t k = 0; k < a; ++k) {
        vblock_[v.offset(p) + k] = bi;
        vlocal_[v.offset(p) + k] = k;
      }
      ++bi;
    }
    std::size_t bj = 0;
    for (auto& [q, b] : w.dims()) {
      for (std::size_t k = 0; k < b; ++k) {
        wblock_[w.offset(q) + k] = bj;
        wlocal_[w.offset(q) + k] = k;
      }
      wdim_.push_back(b);
      ++bj;
    }
    nwb_ = bj;
    base_.assign(bi * bj, 0);
    bi = 0;
    for (auto& [p, a] : v.dims()) {
      (void)a;
      bj = 0;
      for (auto& [q, b] : w.dims()) {
        (void)b;
        base_[bi * nwb_ + bj] = pair_offset.at({p, q});
        ++bj;
      }
      ++bi;
    }
  }

  const GradedVectorSpace& space() const { return space_; }
  const GradedVectorSpace& left() const { return v_; }
  const GradedVectorSpace& right() const { return w_; }

  /// Global index of v_i (x) w_j where i, j are global indices in V and W.
  std::size_t index(std::size_t i, std::size_t j) const {
    const std::size_t bj = wblock_[j];
    return base_[vblock_[i] * nwb_ + bj] + vlocal_[i] * wdim_[bj] + wlocal_[j];
  }

 private:
  GradedVectorSpace v_, w_, space_;
  std::vector<std::size_t> vblock_, vlocal_, wblock_, wlocal_, wdim_, base_;
  std::size_t nwb_ = 0;
};

/// nat(f (x) g)(v (x) w) = (-1)^{|v||g|} f v (x) g w.
template <class T>
GradedOperator<T> nat(const GradedOperator<T>& f, const GradedOperator<T>& g) {
  TensorLayout src(f.source(), g.source());
  TensorLayout dst(f.target(), g.target());
  GradedOperator<T> out(src.space(), dst.space(), f.degree() + g.degree());
  const auto vdeg = f.source().basis_degrees();
  const auto& fm = f.matrix();
  const auto& gm = g.matrix();
  std::vector<std::size_t> gnz_r, gnz_c;
  for (std::size_t r = 0; r < gm.rows(); ++r)
    for (std::size_t c = 0; c < gm.cols(); ++c)
      if (!Field<T>::is_zero(gm(r, c))) {
        gnz_r.push_back(r);
        gnz_c.push_back(c);
      }
  for (std::size_t fr = 0; fr < fm.rows(); ++fr)
    for (std::size_t fc = 0; fc < fm.cols(); ++fc) {
      const T& a = fm(fr, fc);
      if (Field<T>::is_zero(a)) continue;
      const T sa = koszul(static_cast<long>(vdeg[fc]) * g.degree()) > 0 ? a : T(-a);
      for (std::size_t k = 0; k < gnz_r.size(); ++k)
        out.raw(dst.index(fr, gnz_r[k]), src.index(fc, gnz_c[k])) += sa * gm(gnz_r[k], gnz_c[k]);
    }
  return out;
}

/// delta = delta_V (x) 1 + 1 (x) delta_W, the Koszul sign coming from nat.
template <class T>
CochainComplex<T> tensor_complex(const CochainComplex<T>& v, const CochainComplex<T>& w) {
  auto iv = GradedOperator<T>::identity(v.space);
  auto iw = GradedOperator<T>::identity(w.space);
  auto d = nat(v.differential, iw) + nat(iv, w.differential);
  return {d.source(), d};
}

/// Maximum of |d o d|; zero for a valid complex.
template <class T>
T square_residual(const CochainComplex<T>& c) {
  return compose(c.differential, c.differential).max_abs();
}

}  // namespace cartankit
