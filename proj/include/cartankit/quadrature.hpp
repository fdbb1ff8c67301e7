#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace cartankit {

/// Gauss-Legendre rule on [0, 1]: nodes ascending, weights summing to 1.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

inline GaussRule gauss_legendre(std::size_t q) {
  if (q == 0) throw std::invalid_argument("quadrature order must be at least 1");
  const double nq = static_cast<double>(q);
  // (P_q(x), P_{q-1}(x)) by the three-term recurrence.
  auto legendre = [q](double x) {
    double p0 = 1.0, p1 = x;
    for (std::size_t n = 2; n <= q; ++n) {
      const double p2 = ((2.0 * n - 1.0) * x * p1 - (n - 1.0) * p0) / static_cast<double>(n);
      p0 = p1;
      p1 = p2;
    }
    return std::make_pair(p1, p0);
  };
  std::vector<std::pair<double, double>> nw;
  for (std::size_t i = 0; i < q; ++i) {
    double x = std::cos(M_PI * (static_cast<double>(i) + 0.75) / (nq + 0.5));
    for (int it = 0; it < 100; ++it) {
      auto [p, pm] = legendre(x);
      const double dx = p / (nq * (x * p - pm) / (x * x - 1.0));
      x -= dx;
      if (std::fabs(dx) < 1e-16) break;
    }
    auto [p, pm] = legendre(x);
    const double dp = nq * (x * p - pm) / (x * x - 1.0);
    nw.emplace_back(0.5 * (1.0 + x), 1.0 / ((1.0 - x * x) * dp * dp));
  }
  std::sort(nw.begin(), nw.end());
  GaussRule r;
  for (auto& [x, w] : nw) {
    r.nodes.push_back(x);
    r.weights.push_back(w);
  }
  return r;
}

/// Point and weight of a product rule on the ordered simplex 1 >= t_1 >= ... >= t_k >= 0
/// (inner limits scaled to [0, t_{j-1}]) or on the unit cube.
struct QuadPoint {
  std::vector<double> t;
  double w;
};

inline std::vector<QuadPoint> simplex_points(std::size_t k, std::size_t q) {
  const auto rule = gauss_legendre(q);
  std::vector<QuadPoint> out;
  std::vector<std::size_t> idx(k, 0);
  std::size_t total = 1;
  for (std::size_t j = 0; j < k; ++j) total *= q;
  out.reserve(total);
  for (std::size_t n = 0; n < total; ++n) {
    QuadPoint p{std::vector<double>(k), 1.0};
    double upper = 1.0;
    for (std::size_t j = 0; j < k; ++j) {
      p.t[j] = upper * rule.nodes[idx[j]];
      p.w *= upper * rule.weights[idx[j]];
      upper = p.t[j];
    }
    out.push_back(std::move(p));
    for (std::size_t j = k; j-- > 0;) {
      if (++idx[j] < q) break;
      idx[j] = 0;
    }
  }
  return out;
}

inline std::vector<QuadPoint> cube_points(std::size_t k, std::size_t q) {
  const auto rule = gauss_legendre(q);
  std::vector<QuadPoint> out;
  std::vector<std::size_t> idx(k, 0);
  std::size_t total = 1;
  for (std::size_t j = 0; j < k; ++j) total *= q;
  out.reserve(total);
  for (std::size_t n = 0; n < total; ++n) {
    QuadPoint p{std::vector<double>(k), 1.0};
    for (std::size_t j = 0; j < k; ++j) {
      p.t[j] = rule.nodes[idx[j]];
      p.w *= rule.weights[idx[j]];
    }
    out.push_back(std::move(p));
    for (std::size_t j = k; j-- > 0;) {
      if (++idx[j] < q) break;
      idx[j] = 0;
    }
  }
  return out;
}

}  // namespace cartankit
