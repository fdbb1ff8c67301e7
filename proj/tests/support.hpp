// Shared helpers for the unit tests: seeded random data and small fixtures.
#pragma once

#include <random>

#include "cartankit/graded.hpp"

namespace testing_support {

using cartankit::GradedOperator;
using cartankit::GradedVectorSpace;
using cartankit::Matrix;
using cartankit::Rational;

/// Small-integer rational in [-range, range].
inline Rational small_rational(std::mt19937_64& rng, long range = 3) {
  std::uniform_int_distribution<long> d(-range, range);
  return Rational(d(rng));
}

/// Random homogeneous operator of the given degree; the entries outside its blocks stay zero.
template <class T>
GradedOperator<T> random_operator(std::mt19937_64& rng, const GradedVectorSpace& s, const GradedVectorSpace& t,
                                  int degree) {
  GradedOperator<T> f(s, t, degree);
  for (auto [p, n] : s.dims()) {
    if (t.dim(p + degree) == 0) continue;
    Matrix<T> b(t.dim(p + degree), n);
    for (std::size_t r = 0; r < b.rows(); ++r)
      for (std::size_t c = 0; c < b.cols(); ++c) {
        if constexpr (cartankit::Field<T>::exact)
          b(r, c) = small_rational(rng);
        else
          b(r, c) = std::uniform_real_distribution<double>(-1.0, 1.0)(rng);
      }
    f.set_block(p, b);
  }
  return f;
}

/// Random graded space with degrees in [lo, hi] and dimensions in [0, maxdim].
inline GradedVectorSpace random_space(std::mt19937_64& rng, int lo, int hi, std::size_t maxdim) {
  std::uniform_int_distribution<std::size_t> d(0, maxdim);
  std::map<int, std::size_t> dims;
  for (int p = lo; p <= hi; ++p) dims[p] = d(rng);
  return GradedVectorSpace(dims);
}

}  // namespace testing_support
