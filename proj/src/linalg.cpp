#include "cartankit/linalg.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace cartankit {

namespace {

Eigen::MatrixXd to_eigen(const Matrix<double>& a) {
  Eigen::MatrixXd m(a.rows(), a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) m(r, c) = a(r, c);
  return m;
}

double norm1(const Matrix<double>& a) {
  double best = 0.0;
  for (std::size_t c = 0; c < a.cols(); ++c) {
    double s = 0.0;
    for (std::size_t r = 0; r < a.rows(); ++r) s += std::fabs(a(r, c));
    best = std::max(best, s);
  }
  return best;
}

}  // namespace

std::size_t rank(const Matrix<Rational>& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0;
  // Bareiss on an integer-scaled copy: clear denominators row by row.
  std::vector<std::vector<mpz_class>> m(a.rows(), std::vector<mpz_class>(a.cols()));
  for (std::size_t r = 0; r < a.rows(); ++r) {
    mpz_class l = 1;
    for (std::size_t c = 0; c < a.cols(); ++c) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), a(r, c).get_den_mpz_t());
    for (std::size_t c = 0; c < a.cols(); ++c) m[r][c] = a(r, c).get_num() * (l / a(r, c).get_den());
  }
  std::size_t rows = a.rows(), cols = a.cols(), rk = 0;
  mpz_class prev = 1;
  for (std::size_t c = 0; c < cols && rk < rows; ++c) {
    std::size_t p = rk;
    while (p < rows && m[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(m[p], m[rk]);
    for (std::size_t r = rk + 1; r < rows; ++r) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        m[r][j] = m[r][j] * m[rk][c] - m[r][c] * m[rk][j];
        mpz_divexact(m[r][j].get_mpz_t(), m[r][j].get_mpz_t(), prev.get_mpz_t());
      }
      m[r][c] = 0;
    }
    prev = m[rk][c];
    ++rk;
  }
  return rk;
}

std::size_t rank(const Matrix<double>& a, double tol) {
  if (a.rows() == 0 || a.cols() == 0) return 0;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(to_eigen(a));
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  std::size_t rk = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > tol * s(0)) ++rk;
  return rk;
}

bool SparseReducer::add(Row row) {
  // Reduce against existing pivots; the row stays sorted.
  Row work = std::move(row);
  mpq_class tmp;
  for (;;) {
    std::size_t i = 0;
    while (i < work.size() && !pivots_.count(work[i].first)) ++i;
    if (i == work.size()) break;
    const Row& piv = pivots_.at(work[i].first);
    Rational f = work[i].second;
    Row merged;
    merged.reserve(work.size() + piv.size());
    std::size_t a = 0, b = 0;
    while (a < work.size() || b < piv.size()) {
      if (b == piv.size() || (a < work.size() && work[a].first < piv[b].first)) {
        merged.push_back(std::move(work[a++]));
      } else if (a == work.size() || piv[b].first < work[a].first) {
        merged.emplace_back(piv[b].first, -f * piv[b].second);
        ++b;
      } else {
        tmp = work[a].second - f * piv[b].second;
        if (sgn(tmp) != 0) merged.emplace_back(work[a].first, tmp);
        ++a;
        ++b;
      }
    }
    work = std::move(merged);
  }
  if (work.empty()) return false;
  Rational lead = work.front().second;
  for (auto& e : work) e.second /= lead;
  const std::size_t pc = work.front().first;
  // Back-substitute into existing rows to keep full reduction.
  for (auto& [col, prow] : pivots_) {
    auto it = std::lower_bound(prow.begin(), prow.end(), pc,
                               [](const auto& e, std::size_t c) { return e.first < c; });
    if (it == prow.end() || it->first != pc) continue;
    Rational f = it->second;
    Row merged;
    std::size_t a = 0, b = 0;
    while (a < prow.size() || b < work.size()) {
      if (b == work.size() || (a < prow.size() && prow[a].first < work[b].first)) {
        merged.push_back(prow[a++]);
      } else if (a == prow.size() || work[b].first < prow[a].first) {
        merged.emplace_back(work[b].first, -f * work[b].second);
        ++b;
      } else {
        tmp = prow[a].second - f * work[b].second;
        if (sgn(tmp) != 0) merged.emplace_back(prow[a].first, tmp);
        ++a;
        ++b;
      }
    }
    prow = std::move(merged);
  }
  pivots_.emplace(pc, std::move(work));
  return true;
}

Matrix<Rational> SparseReducer::nullspace() const {
  std::vector<std::size_t> free;
  for (std::size_t c = 0; c < cols_; ++c)
    if (!pivots_.count(c)) free.push_back(c);
  Matrix<Rational> basis(cols_, free.size());
  for (std::size_t f = 0; f < free.size(); ++f) {
    basis(free[f], f) = 1;
    for (const auto& [pc, row] : pivots_)
      for (const auto& [c, v] : row)
        if (c == free[f]) basis(pc, f) = -v;
  }
  return basis;
}

Matrix<Rational> nullspace(const Matrix<Rational>& a) {
  SparseReducer red(a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    SparseReducer::Row row;
    for (std::size_t c = 0; c < a.cols(); ++c)
      if (sgn(a(r, c)) != 0) row.emplace_back(c, a(r, c));
    red.add(std::move(row));
  }
  return red.nullspace();
}

Matrix<double> nullspace(const Matrix<double>& a, double tol) {
  const std::size_t n = a.cols();
  if (n == 0) return Matrix<double>(0, 0);
  if (a.rows() == 0) return Matrix<double>::identity(n);
  Eigen::MatrixXd m = to_eigen(a);
  if (m.rows() < m.cols()) {
    m.conservativeResize(m.cols(), Eigen::NoChange);
    m.bottomRows(m.rows() - a.rows()).setZero();
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  std::size_t rk = 0;
  if (s.size() > 0 && s(0) > 0.0)
    for (Eigen::Index i = 0; i < s.size(); ++i)
      if (s(i) > tol * s(0)) ++rk;
  Matrix<double> basis(n, n - rk);
  const auto& v = svd.matrixV();
  for (std::size_t j = rk; j < n; ++j)
    for (std::size_t r = 0; r < n; ++r) basis(r, j - rk) = v(r, j);
  return basis;
}

Matrix<double> solve(Matrix<double> a, Matrix<double> b) {
  const std::size_t n = a.rows();
  if (a.cols() != n || b.rows() != n) throw ShapeError("solve: shape mismatch");
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::fabs(a(r, c)) > std::fabs(a(p, c))) p = r;
    if (a(p, c) == 0.0) throw std::runtime_error("solve: singular matrix");
    if (p != c) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(p, j), a(c, j));
      for (std::size_t j = 0; j < b.cols(); ++j) std::swap(b(p, j), b(c, j));
    }
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a(r, c) / a(c, c);
      if (f == 0.0) continue;
      for (std::size_t j = c; j < n; ++j) a(r, j) -= f * a(c, j);
      for (std::size_t j = 0; j < b.cols(); ++j) b(r, j) -= f * b(c, j);
    }
  }
  for (std::size_t c = n; c-- > 0;) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      double s = b(c, j);
      for (std::size_t k = c + 1; k < n; ++k) s -= a(c, k) * b(k, j);
      b(c, j) = s / a(c, c);
    }
  }
  return b;
}

Matrix<double> expm(const Matrix<double>& a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw ShapeError("expm: matrix not square");
  if (n == 0) return a;
  static constexpr double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                                 1187353796428800.0,  129060195264000.0,   10559470521600.0,
                                 670442572800.0,      33522128640.0,       1323241920.0,
                                 40840800.0,          960960.0,            16380.0,
                                 182.0,               1.0};
  static constexpr double theta13 = 5.371920351148152;
  const double nrm = norm1(a);
  int s = 0;
  if (nrm > theta13) s = std::max(0, static_cast<int>(std::ceil(std::log2(nrm / theta13))));
  Matrix<double> x = a * std::ldexp(1.0, -s);
  const auto id = Matrix<double>::identity(n);
  const auto x2 = x * x, x4 = x2 * x2, x6 = x4 * x2;
  Matrix<double> u_inner = x6 * b[13] + x4 * b[11] + x2 * b[9];
  u_inner = x6 * u_inner;
  u_inner += x6 * b[7] + x4 * b[5] + x2 * b[3] + id * b[1];
  const Matrix<double> u = x * u_inner;
  Matrix<double> v = x6 * (x6 * b[12] + x4 * b[10] + x2 * b[8]);
  v += x6 * b[6] + x4 * b[4] + x2 * b[2] + id * b[0];
  Matrix<double> r = solve(v - u, v + u);
  for (int i = 0; i < s; ++i) r = r * r;
  return r;
}

Matrix<Rational> expm(const Matrix<Rational>& a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw ShapeError("expm: matrix not square");
  Matrix<Rational> result = Matrix<Rational>::identity(n);
  Matrix<Rational> term = result;
  for (std::size_t m = 1; m <= n; ++m) {
    term = term * a;
    if (term.is_zero()) return result;
    term *= Rational(1, m);
    result += term;
  }
  if (n == 0 || (term * a).is_zero()) return result;
  throw NonTerminatingError("exact exponential of a non-nilpotent matrix");
}

std::size_t nilpotency_index(const Matrix<Rational>& a) {
  const std::size_t n = a.rows();
  if (n == 0) return 1;
  Matrix<Rational> p = a;
  for (std::size_t m = 1; m <= n; ++m) {
    if (p.is_zero()) return m;
    p = p * a;
  }
  return 0;
}

}  // namespace cartankit
