#pragma once

#include <gmpxx.h>

#include <cmath>
#include <stdexcept>
#include <string>

namespace cartankit {

/// Exact scalars are GMP rationals; float scalars are IEEE doubles.
using Rational = mpq_class;

/// Raised when an exact computation would need an infinite series
/// (e.g. the exponential of a non-nilpotent matrix over the rationals).
class NonTerminatingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised on incompatible shapes, degrees or dimensions.
class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

template <class T>
struct Field;

template <>
struct Field<double> {
  static constexpr bool exact = false;
  static constexpr const char* name = "float";
  static double abs(double x) { return std::fabs(x); }
  static double to_double(double x) { return x; }
  static bool is_zero(double x) { return x == 0.0; }
  static double from_ratio(long p, long q) { return static_cast<double>(p) / static_cast<double>(q); }
  static double from_double(double x) { return x; }
  static double parse(const std::string& s);
  static std::string format(double x);
};

template <>
struct Field<Rational> {
  static constexpr bool exact = true;
  static constexpr const char* name = "exact";
  static Rational abs(const Rational& x) { return ::abs(x); }
  static double to_double(const Rational& x) { return x.get_d(); }
  static bool is_zero(const Rational& x) { return sgn(x) == 0; }
  static Rational from_ratio(long p, long q) {
    Rational r(p, q);
    r.canonicalize();
    return r;
  }
  // Exact binary expansion of the double.
  static Rational from_double(double x) { return Rational(x); }
  static Rational parse(const std::string& s);
  static std::string format(const Rational& x) { return x.get_str(); }
};

/// Absolute value of a float-or-exact scalar, as double (for reports).
template <class T>
double magnitude(const T& x) {
  return Field<T>::to_double(Field<T>::abs(x));
}

}  // namespace cartankit
