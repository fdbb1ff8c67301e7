#include "cartankit/field.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

namespace cartankit {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\n");
  auto e = s.find_last_not_of(" \t\n");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

bool looks_decimal(const std::string& s) {
  return s.find_first_of(".eE") != std::string::npos;
}

}  // namespace

double Field<double>::parse(const std::string& text) {
  std::string s = trim(text);
  auto slash = s.find('/');
  if (slash != std::string::npos) return parse(s.substr(0, slash)) / parse(s.substr(slash + 1));
  std::size_t used = 0;
  double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("bad number: " + text);
  return v;
}

std::string Field<double>::format(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Rational Field<Rational>::parse(const std::string& text) {
  std::string s = trim(text);
  if (s.empty()) throw std::invalid_argument("empty number");
  if (s.front() == '+') s.erase(0, 1);
  auto slash = s.find('/');
  if (slash == std::string::npos && looks_decimal(s)) {
    // Decimal literals are read as the exact decimal fraction, not the nearest double.
    bool neg = !s.empty() && s.front() == '-';
    if (neg) s.erase(0, 1);
    long exp10 = 0;
    auto epos = s.find_first_of("eE");
    if (epos != std::string::npos) {
      exp10 = std::stol(s.substr(epos + 1));
      s = s.substr(0, epos);
    }
    auto dot = s.find('.');
    std::string digits = s;
    if (dot != std::string::npos) {
      exp10 -= static_cast<long>(s.size() - dot - 1);
      digits = s.substr(0, dot) + s.substr(dot + 1);
    }
    if (digits.empty()) throw std::invalid_argument("bad number: " + text);
    mpz_class num(digits, 10);
    mpz_class p;
    mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
    Rational r = exp10 < 0 ? Rational(num, p) : Rational(num * p);
    r.canonicalize();
    return neg ? Rational(-r) : r;
  }
  Rational r;
  if (r.set_str(s, 10) != 0) throw std::invalid_argument("bad rational: " + text);
  if (sgn(r.get_den()) == 0) throw std::invalid_argument("zero denominator: " + text);
  r.canonicalize();
  return r;
}

}  // namespace cartankit
