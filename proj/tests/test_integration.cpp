// Integration of representation forms: quadrature, series, Stokes, EZ products, round trip, AW.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include "cartankit/ce.hpp"
#include "cartankit/chains.hpp"

using namespace cartankit;
using Q = Rational;

namespace {

Eigen::MatrixXd to_eigen(const Matrix<double>& m) {
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
  return e;
}

/// (e^A - 1)/A as the top-right block of exp [[A, I], [0, 0]], via Eigen.
Eigen::MatrixXd phi1_oracle(const Matrix<double>& a) {
  const Eigen::Index n = static_cast<Eigen::Index>(a.rows());
  Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  aug.topLeftCorner(n, n) = to_eigen(a);
  aug.topRightCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
  return Eigen::MatrixXd(aug.exp()).topRightCorner(n, n);
}

double dist(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) { return (a - b).cwiseAbs().maxCoeff(); }

Vector<double> unit_letter(std::mt19937_64& rng, std::size_t n) {
  std::normal_distribution<double> gauss;
  Vector<double> x(n);
  double s = 0.0;
  for (auto& v : x) {
    v = gauss(rng);
    s += v * v;
  }
  for (auto& v : x) v /= std::sqrt(s);
  return x;
}

/// All words of length 1..kmax over the basis letters.
template <class T>
std::vector<std::vector<Vector<T>>> basis_words(const LieAlgebra<T>& g, std::size_t kmax) {
  std::vector<std::vector<Vector<T>>> out, layer{{}};
  for (std::size_t k = 1; k <= kmax; ++k) {
    std::vector<std::vector<Vector<T>>> next;
    for (auto& w : layer)
      for (std::size_t i = 0; i < g.dim(); ++i) {
        auto v = w;
        v.push_back(g.basis_vector(i));
        next.push_back(v);
      }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

/// One-dimensional g: V = R in degrees -1, 0, delta = 1, i_x = 1, L_x = id.
TgRep<double> line_rep() {
  const GradedVectorSpace v(std::map<int, std::size_t>{{-1, 1}, {0, 1}});
  TgRep<double> r{fixtures::abelian(1).convert<double>(), CochainComplex<double>::zero(v),
                  {GradedOperator<double>::identity(v)}, {GradedOperator<double>(v, v, -1)}};
  r.complex.differential.set(1, 0, 1.0);
  r.B[0].set(0, 1, 1.0);
  return r;
}

RepForm<double> sl2_form() { return RepForm<double>(convert_rep<double>(functor_U(adjoint_grep(fixtures::sl2())))); }

}  // namespace

TEST_CASE("Gauss-Legendre rules") {
  for (std::size_t q : {1u, 2u, 5u, 12u, 24u}) {
    const auto r = gauss_legendre(q);
    CAPTURE(q);
    for (std::size_t m = 0; m < 2 * q; ++m) {
      double s = 0.0;
      for (std::size_t i = 0; i < q; ++i) s += r.weights[i] * std::pow(r.nodes[i], static_cast<double>(m));
      CHECK(s == doctest::Approx(1.0 / static_cast<double>(m + 1)).epsilon(1e-13));
    }
  }
  SUBCASE("simplex volume") {
    double fact = 1.0;
    for (std::size_t k = 1; k <= 4; ++k) {
      fact *= static_cast<double>(k);
      double s = 0.0;
      for (auto& p : simplex_points(k, 6)) {
        s += p.w;
        for (std::size_t j = 1; j < k; ++j) CHECK(p.t[j - 1] >= p.t[j]);
      }
      CHECK(s == doctest::Approx(1.0 / fact).epsilon(1e-14));
    }
  }
  SUBCASE("polynomial over the simplex") {
    // int t_1 t_2 over 1 >= t_1 >= t_2 >= 0 is 1/8.
    double s = 0.0;
    for (auto& p : simplex_points(2, 3)) s += p.w * p.t[0] * p.t[1];
    CHECK(s == doctest::Approx(0.125).epsilon(1e-14));
  }
  CHECK_THROWS_AS(gauss_legendre(0), std::invalid_argument);
}

TEST_CASE("one-letter integrals have closed form B (e^A - 1)/A") {
  const auto form = sl2_form();
  std::mt19937_64 rng(11);
  for (int seed = 0; seed < 10; ++seed) {
    const auto x = unit_letter(rng, 3);
    const Eigen::MatrixXd ref = to_eigen(form.B(x)) * phi1_oracle(form.A(x));
    CHECK(dist(to_eigen(integrate_series(form, {x}, 1e-15).matrix()), ref) < 1e-12);
    CHECK(dist(to_eigen(integrate_quadrature(form, ExpWord<double>::word({x}), 24).matrix()), ref) < 1e-12);
  }
}

TEST_CASE("series in degenerate cases") {
  SUBCASE("A = 0: the integrand is constant") {
    const RepForm<Q> form(functor_U(trivial_grep(fixtures::abelian(2))));
    const auto x = fixtures::abelian(2).basis_vector(0), y = fixtures::abelian(2).basis_vector(1);
    CHECK(integrate_series(form, {x}).matrix() == form.B(x));
    CHECK(integrate_series(form, {x, y}).matrix() == form.B(x) * form.B(y) * Q(1, 2));
    CHECK(integrate_series(form, {x, y}).matrix() == integrate_quadrature(form, ExpWord<Q>::word({x, y})).matrix());
  }
  SUBCASE("nilpotent A: finite sum") {
    const auto h = fixtures::heisenberg();
    const RepForm<Q> form(functor_E(adjoint_grep(h)));
    const auto x = h.basis_vector(0);
    const auto A = form.A(x);
    REQUIRE(nilpotency_index(A) > 0);
    Matrix<Q> phi(A.rows(), A.cols()), term = Matrix<Q>::identity(A.rows());
    for (long m = 1; !term.is_zero(); ++m) {
      phi += term * Q(1, m);
      term = term * A * Q(1, m);
    }
    CHECK(integrate_series(form, {x}).matrix() == form.B(x) * phi);
  }
  SUBCASE("exact mode refuses non-nilpotent letters") {
    const RepForm<Q> form(functor_U(adjoint_grep(fixtures::sl2())));
    const auto h = fixtures::sl2().basis_vector(2);
    CHECK_THROWS_AS(integrate_series(form, {h}), NonTerminatingError);
    CHECK_THROWS_AS(integrate_quadrature(form, ExpWord<Q>::word({h})), NonTerminatingError);
  }
  SUBCASE("float series stops at the cap when the tail bound stays large") {
    const auto form = sl2_form();
    Vector<double> big{0.0, 0.0, 40.0};
    CHECK_THROWS_AS(integrate_series(form, {big}), NonTerminatingError);
    SeriesInfo info;
    CHECK_THROWS_AS(integrate_series(form, {big}, 1e-9, 5, &info), NonTerminatingError);
    CHECK_FALSE(info.converged);
  }
  SUBCASE("empty word is the identity") {
    const auto form = sl2_form();
    CHECK(integrate_series(form, {}) == GradedOperator<double>::identity(form.space()));
  }
}

TEST_CASE("density of the representation form") {
  const auto form = sl2_form();
  SUBCASE("word closed form on a 5^k grid") {
    const std::vector<double> nodes{0.1, 0.3, 0.5, 0.7, 0.9};
    for (auto& w : basis_words(form.g(), 3)) {
      const std::size_t k = w.size();
      std::vector<std::size_t> ix(k, 0);
      double worst = 0.0;
      for (;;) {
        std::vector<double> t(k);
        for (std::size_t j = 0; j < k; ++j) t[j] = nodes[ix[j]];
        worst = std::max(worst, (eval_form(form, ExpWord<double>::word(w), t) - pullback_word_closed(form, w, t)).max_abs());
        std::size_t j = 0;
        while (j < k && ++ix[j] == nodes.size()) ix[j++] = 0;
        if (j == k) break;
      }
      CHECK(worst < 1e-11);
    }
  }
  SUBCASE("pointwise equivariance under left translation") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 5; ++trial) {
      const auto y = unit_letter(rng, 3), x1 = unit_letter(rng, 3), x2 = unit_letter(rng, 3);
      const auto w = ExpWord<double>::word({x1, x2});
      const auto p = ExpWord<double>::point({y});
      const std::vector<double> t{0.8, 0.35};
      const auto lhs = eval_form(form, w.left_translate(p), t);
      const Matrix<double> rhs = expm(form.A(y)) * eval_form(form, w, t).matrix();
      CHECK((lhs.matrix() - rhs).max_abs() < 1e-10);
    }
  }
  SUBCASE("Phi(e) is antisymmetric in its tangent arguments, exactly") {
    const RepForm<Q> ef(functor_U(adjoint_grep(fixtures::sl2())));
    const std::vector<Q> origin{Q(0), Q(0)};
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) {
        const auto u = ef.g().basis_vector(i), v = ef.g().basis_vector(j);
        const auto a = eval_form(ef, ExpWord<Q>::word({u, v}), origin), b = eval_form(ef, ExpWord<Q>::word({v, u}), origin);
        CHECK(a.matrix() == -b.matrix());
      }
  }
  SUBCASE("equal L and B give identical values") {
    const auto other = sl2_form();
    for (auto& w : basis_words(form.g(), 2))
      CHECK(integrate_quadrature(form, ExpWord<double>::word(w), 12) == integrate_quadrature(other, ExpWord<double>::word(w), 12));
  }
}

TEST_CASE("series against quadrature") {
  SUBCASE("sl2 basis words up to length 3") {
    const auto form = sl2_form();
    for (auto& w : basis_words(form.g(), 3)) {
      SeriesInfo info;
      const auto s = integrate_series(form, w, 1e-15, 60, &info);
      CHECK(info.converged);
      CHECK((s - integrate_quadrature(form, ExpWord<double>::word(w), 24)).max_abs() < 1e-9);
    }
  }
  SUBCASE("random sl2 letters, one of norm 1.5") {
    const auto form = sl2_form();
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 3; ++trial) {
      auto x = unit_letter(rng, 3), y = unit_letter(rng, 3);
      for (auto& v : x) v *= 1.5;
      CHECK((integrate_series(form, {x, y}) - integrate_quadrature(form, ExpWord<double>::word({x, y}), 24)).max_abs() <
            1e-9);
    }
  }
  SUBCASE("Heisenberg exact") {
    const auto h = fixtures::heisenberg();
    for (const auto& rep : {functor_U(adjoint_grep(h)), functor_E(trivial_grep(h))}) {
      const RepForm<Q> form(rep);
      for (auto& w : basis_words(h, 3)) CHECK(integrate_series(form, w) == integrate_quadrature(form, ExpWord<Q>::word(w)));
      const std::vector<Vector<Q>> mixed{{Q(1), Q(1, 2), Q(0)}, {Q(0), Q(1), Q(1, 3)}};
      CHECK(integrate_series(form, mixed) == integrate_quadrature(form, ExpWord<Q>::word(mixed)));
    }
  }
  SUBCASE("float agrees with exact on Heisenberg") {
    const auto h = fixtures::heisenberg();
    const RepForm<Q> form(functor_U(adjoint_grep(h)));
    const RepForm<double> fd(convert_rep<double>(form.rep()));
    for (auto& w : basis_words(h, 2)) {
      std::vector<Vector<double>> wd;
      for (auto& x : w) wd.push_back(convert_vector<double>(x));
      const auto e = convert_operator<double>(integrate_series(form, w));
      CHECK((e - integrate_quadrature(fd, ExpWord<double>::word(wd), 16)).max_abs() < 1e-13);
    }
  }
}

TEST_CASE("Stokes: boundary of a simplex acts by the commutator with delta") {
  SUBCASE("faces") {
    const auto f = face_map<Q>(2, 1);
    CHECK(f.k_in == 1);
    CHECK(f.k_out == 2);
    CHECK(boundary(ExpWord<Q>::word({fixtures::sl2().basis_vector(0), fixtures::sl2().basis_vector(1)})).terms.size() == 3);
  }
  SUBCASE("sl2 float, k <= 3") {
    const auto form = sl2_form();
    for (auto& w : basis_words(form.g(), 3)) CHECK(dg_module_check(form, ExpWord<double>::word(w), 16) < 1e-9);
  }
  SUBCASE("Heisenberg exact") {
    const auto h = fixtures::heisenberg();
    const RepForm<Q> form(functor_U(adjoint_grep(h)));
    for (auto& w : basis_words(h, 3)) CHECK(dg_module_check(form, ExpWord<Q>::word(w)) == 0.0);
  }
  SUBCASE("k = 1 gives rho(exp x) - id exactly") {
    const auto h = fixtures::heisenberg();
    const RepForm<Q> form(functor_E(adjoint_grep(h)));
    for (std::size_t i = 0; i < 3; ++i) {
      const auto x = h.basis_vector(i);
      const auto lhs = graded_commutator(form.rep().delta(), integrate_quadrature(form, ExpWord<Q>::word({x})));
      const Matrix<Q> rhs = LinAlg<Q>::expm(form.A(x)) - Matrix<Q>::identity(form.N());
      CHECK(lhs.matrix() == rhs);
    }
  }
}

TEST_CASE("Eilenberg-Zilber products") {
  SUBCASE("shuffle counts and signs") {
    CHECK(shuffles(2, 1).size() == 3);
    CHECK(shuffles(2, 2).size() == 6);
    const auto g = fixtures::sl2();
    const auto a = ChainCombination<Q>::single(ExpWord<Q>::word({g.basis_vector(0)}));
    const auto b = ChainCombination<Q>::single(ExpWord<Q>::word({g.basis_vector(1)}));
    const auto p = ez_product(a, b);
    REQUIRE(p.terms.size() == 2);
    CHECK(p.terms[0].first + p.terms[1].first == 0);
  }
  SUBCASE("multiplicativity on sl2") {
    const auto form = sl2_form();
    const auto ws = basis_words(form.g(), 2);
    for (auto& u : ws)
      for (auto& v : ws) {
        if (u.size() + v.size() > 3) continue;
        const auto a = ChainCombination<double>::single(ExpWord<double>::word(u));
        const auto b = ChainCombination<double>::single(ExpWord<double>::word(v));
        const auto lhs = integrate_chain(form, ez_product(a, b), 16);
        CHECK((lhs - integrate_chain(form, a, 16) * integrate_chain(form, b, 16)).max_abs() < 1e-8);
      }
  }
  SUBCASE("square of a one-letter simplex") {
    const auto form = sl2_form();
    std::mt19937_64 rng(13);
    const auto x = unit_letter(rng, 3);
    const auto a = ChainCombination<double>::single(ExpWord<double>::word({x}));
    CHECK(integrate_chain(form, ez_product(a, a), 16).max_abs() < 1e-10);
  }
  SUBCASE("exact on Heisenberg") {
    const auto h = fixtures::heisenberg();
    const RepForm<Q> form(functor_U(adjoint_grep(h)));
    const auto a = ChainCombination<Q>::single(ExpWord<Q>::word({h.basis_vector(0), h.basis_vector(1)}));
    const auto b = ChainCombination<Q>::single(ExpWord<Q>::word({h.basis_vector(1)}));
    CHECK(integrate_chain(form, ez_product(a, b)) == integrate_chain(form, a) * integrate_chain(form, b));
  }
}

TEST_CASE("equivariance and thin simplices") {
  const auto form = sl2_form();
  const auto& g = form.g();
  const auto e = g.basis_vector(0), f = g.basis_vector(1);
  SUBCASE("left translation") {
    const auto w = ExpWord<double>::word({e, f});
    const auto p = ExpWord<double>::point({f});
    const auto lhs = integrate_quadrature(form, w.left_translate(p), 16);
    CHECK((lhs - integrate_quadrature(form, p, 16) * integrate_quadrature(form, w, 16)).max_abs() < 1e-12);
  }
  SUBCASE("repeated letters") {
    const auto xx = ExpWord<double>::word({e, e});
    CHECK(thinness_check(form, xx));
    CHECK(integrate_quadrature(form, xx, 16).max_abs() < 1e-12);
  }
  SUBCASE("a genuine 2-simplex is not thin") {
    CHECK_FALSE(thinness_check(form, ExpWord<double>::word({e, f})));
    CHECK(integrate_quadrature(form, ExpWord<double>::word({e, f}), 16).max_abs() > 1e-3);
  }
  SUBCASE("abelian repeated letter") {
    const RepForm<Q> af(functor_U(trivial_grep(fixtures::abelian(3))));
    const auto x = fixtures::abelian(3).basis_vector(1);
    CHECK(thinness_check(af, ExpWord<Q>::word({x, x})));
    CHECK(integrate_quadrature(af, ExpWord<Q>::word({x, x})).is_zero());
  }
}

TEST_CASE("round trip: differentiating the integrated module") {
  for (const auto& rep : {functor_U(adjoint_grep(fixtures::sl2())), functor_E(trivial_grep(fixtures::su2()))}) {
    const RepForm<double> form(convert_rep<double>(rep));
    const auto r = roundtrip_check(form, 1e-4, 1e-6, 16);
    CHECK(r.error_h < 1e-6);
    CHECK((r.error_h < 1e-13 || r.ratio >= 3.5));
    CHECK(r.passed);
  }
  SUBCASE("Richardson extrapolation does better") {
    const auto form = sl2_form();
    WordAction act = [&](const ExpWord<double>& w) { return integrate_quadrature(form, w, 16); };
    const auto plain = rep_distance(differentiate_module(form.g(), form.rep().complex, act, 1e-3), form.rep());
    const auto rich = rep_distance(differentiate_module(form.g(), form.rep().complex, act, 1e-3, true), form.rep());
    CHECK(rich < plain);
  }
  CHECK_THROWS_AS(differentiate_module(fixtures::sl2().convert<double>(), sl2_form().rep().complex, {}, 0.0),
                  std::invalid_argument);
}

TEST_CASE("pullback along multiplication") {
  const auto form = sl2_form();
  unsigned seed = 21;
  for (auto [p, k] : std::vector<std::pair<std::size_t, std::size_t>>{{2, 1}, {2, 2}, {3, 2}, {2, 3}}) {
    CAPTURE(p);
    CAPTURE(k);
    CHECK(mu_p_check(form, p, k, random_mu_samples(3, p, k, 5, seed++)) < 1e-9);
    CHECK(mu_p_check(form, p, k, random_mu_samples(3, p, k, 5, seed++, false)) < 1e-9);
  }
  CHECK_THROWS_AS(mu_p_check(form, 1, 1, {}), std::invalid_argument);
}

TEST_CASE("Alexander-Whitney tensor action") {
  const auto v = line_rep();
  const RepForm<double> fv(v), ft(tensor_rep(v, v));
  const auto x = v.g.basis_vector(0);
  SUBCASE("points act diagonally") {
    const auto p = ExpWord<double>::point({x});
    CHECK((aw_tensor_action(fv, fv, p) - integrate_quadrature(ft, p)).max_abs() < 1e-12);
  }
  SUBCASE("one-simplices differ by (e - 1)^2 / 2") {
    // AW pieces give (e-1)(B (x) 1) + e(1 (x) B)(e-1), while the tensor form integrates
    // B (x) 1 + 1 (x) B against e^{2t}; the discrepancy is not zero.
    const auto w = ExpWord<double>::word({x});
    const double gap = (aw_tensor_action(fv, fv, w) - integrate_quadrature(ft, w)).max_abs();
    const double e1 = std::exp(1.0) - 1.0;
    CHECK(gap == doctest::Approx(e1 * e1 / 2).epsilon(1e-12));
  }
  SUBCASE("the AW action is still a DG module up to first order: D recovers the tensor representation") {
    WordAction act = [&](const ExpWord<double>& w) { return aw_tensor_action(fv, fv, w); };
    const auto t = tensor_rep(v, v);
    CHECK(rep_distance(differentiate_module(t.g, t.complex, act, 1e-4), t) < 1e-6);
    const RepForm<double> form(convert_rep<double>(functor_U(trivial_grep(fixtures::sl2()))));
    const auto ts = tensor_rep(form.rep(), form.rep());
    WordAction act2 = [&](const ExpWord<double>& w) { return aw_tensor_action(form, form, w); };
    CHECK(rep_distance(differentiate_module(ts.g, ts.complex, act2, 1e-4), ts) < 1e-6);
  }
}
