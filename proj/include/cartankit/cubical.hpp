#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <vector>

#include "cartankit/chains.hpp"

namespace cartankit {

/// A cochain: a linear functional on maps of a fixed parameter domain (simplex or cube).
template <class T>
using CochainFunctional = std::function<T(const ExpWord<T>&)>;

/// theta o chi_*, (chi_* t)_i = t_{chi(i)}.
template <class T>
AffineMap<T> perm_map(const std::vector<std::size_t>& chi) {
  const std::size_t k = chi.size();
  auto m = AffineMap<T>::zero(k, k);
  for (std::size_t i = 0; i < k; ++i) m.M(i, chi[i]) = T(1);
  return m;
}

template <class T>
ExpWord<T> perm_reparam(const ExpWord<T>& theta, const std::vector<std::size_t>& chi) {
  return theta.compose(perm_map<T>(chi));
}

/// alpha_i(s): t_i -> s t_i.
template <class T>
AffineMap<T> alpha_map(std::size_t k, std::size_t i, const T& s) {
  if (i >= k) throw std::out_of_range("subdivision axis out of range");
  auto m = AffineMap<T>::zero(k, k);
  for (std::size_t j = 0; j < k; ++j) m.M(j, j) = T(1);
  m.M(i, i) = s;
  return m;
}

/// beta_i(s): t_i -> (1 - s) + s t_i.
template <class T>
AffineMap<T> beta_map(std::size_t k, std::size_t i, const T& s) {
  auto m = alpha_map<T>(k, i, s);
  m.offset[i] = T(1) - s;
  return m;
}

/// y_i = max(t_i, ..., t_k).
template <class T>
std::vector<T> P_k(const std::vector<T>& t) {
  std::vector<T> y(t);
  for (std::size_t i = y.size(); i-- > 1;) y[i - 1] = std::max(y[i - 1], y[i]);
  return y;
}

/// P_k o chi_* restricted to the ordered simplex: y_i = t_{min chi(i..k)}, a linear map there.
template <class T>
AffineMap<T> pk_chi_map(const std::vector<std::size_t>& chi) {
  const std::size_t k = chi.size();
  auto m = AffineMap<T>::zero(k, k);
  std::size_t mn = k;
  for (std::size_t i = k; i-- > 0;) {
    mn = std::min(mn, chi[i]);
    m.M(i, mn) = T(1);
  }
  return m;
}

/// tau(c)(theta) = sum_chi sgn(chi) c(theta o chi_*), each composite read on the ordered simplex.
template <class T>
CochainFunctional<T> tau_map(const CochainFunctional<T>& c) {
  return [c](const ExpWord<T>& theta) {
    T acc(0);
    for (auto& chi : all_permutations(theta.dim())) {
      const T v = c(perm_reparam(theta, chi));
      acc += perm_sign(chi) > 0 ? v : T(-v);
    }
    return acc;
  };
}

/// |c(theta) - c(theta o alpha_i(s)) - c(theta o beta_i(1 - s))|
template <class T>
double subdivision_invariance_check(const CochainFunctional<T>& c, const ExpWord<T>& theta, std::size_t i,
                                    const T& s) {
  const std::size_t k = theta.dim();
  const T whole = c(theta);
  const T left = c(theta.compose(alpha_map<T>(k, i, s)));
  const T right = c(theta.compose(beta_map<T>(k, i, T(1) - s)));
  return magnitude(T(whole - left - right));
}

/// max over chi of |c(theta o chi_*) - sgn(chi) c(theta)|
template <class T>
double alternating_check(const CochainFunctional<T>& c, const ExpWord<T>& theta) {
  const T base = c(theta);
  double worst = 0.0;
  for (auto& chi : all_permutations(theta.dim())) {
    const T v = c(perm_reparam(theta, chi));
    const T expect = perm_sign(chi) > 0 ? base : T(-base);
    worst = std::max(worst, magnitude(T(v - expect)));
  }
  return worst;
}

/// Entry (row, col) of the integral over the ordered simplex.
template <class T>
CochainFunctional<T> simplex_integral_cochain(const RepForm<T>& form, std::size_t row, std::size_t col,
                                              std::size_t order = 16) {
  return [&form, row, col, order](const ExpWord<T>& w) {
    return integrate_quadrature(form, w, order, Domain::simplex)(row, col);
  };
}

/// Entry (row, col) of the integral over the unit cube.
template <class T>
CochainFunctional<T> cube_integral_cochain(const RepForm<T>& form, std::size_t row, std::size_t col,
                                           std::size_t order = 16) {
  return [&form, row, col, order](const ExpWord<T>& w) {
    return integrate_quadrature(form, w, order, Domain::cube)(row, col);
  };
}

/// The full integral as an operator over the cube, and its shuffle decomposition
/// sum_chi sgn(chi) int_{Delta_k} (theta o chi_*)^* omega.
template <class T>
double cube_decomposition_check(const RepForm<T>& form, const ExpWord<T>& theta, std::size_t order = 16) {
  const auto direct = integrate_quadrature(form, theta, order, Domain::cube);
  GradedOperator<T> sum(form.space(), form.space(), -static_cast<int>(theta.dim()));
  for (auto& chi : all_permutations(theta.dim()))
    sum.add_scaled(T(perm_sign(chi)), integrate_quadrature(form, perm_reparam(theta, chi), order));
  return magnitude((direct - sum).max_abs());
}

struct PkReport {
  double identity_term_error = 0.0;  // |c(sigma o P_k o id) - c(sigma)|
  double max_other_term = 0.0;       // max over chi != id of |I(sigma o P_k o chi_*)|
  double residual = 0.0;             // |sum_chi sgn c(...) - c(sigma)|
  bool all_thin = true;              // every chi != id composite is thin at the samples
};

/// Every composite sigma o P_k o chi_* with chi != id is degenerate, so only the identity term survives.
template <class T>
PkReport pk_reduction_check(const RepForm<T>& form, const ExpWord<T>& sigma, std::size_t order = 16,
                            double tol = 1e-9) {
  PkReport r;
  const auto base = integrate_quadrature(form, sigma, order);
  GradedOperator<T> sum(form.space(), form.space(), -static_cast<int>(sigma.dim()));
  for (auto& chi : all_permutations(sigma.dim())) {
    const auto w = sigma.compose(pk_chi_map<T>(chi));
    const auto v = integrate_quadrature(form, w, order);
    sum.add_scaled(T(perm_sign(chi)), v);
    const bool identity = std::is_sorted(chi.begin(), chi.end());
    if (identity) {
      r.identity_term_error = magnitude((v - base).max_abs());
    } else {
      r.max_other_term = std::max(r.max_other_term, magnitude(v.max_abs()));
      r.all_thin = r.all_thin && thinness_check(form, w, 3, tol);
    }
  }
  r.residual = magnitude((sum - base).max_abs());
  return r;
}

}  // namespace cartankit
