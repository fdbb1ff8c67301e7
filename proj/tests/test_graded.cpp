// Graded vector spaces, homogeneous operators, Koszul signs, tensor products of complexes.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cartankit/graded.hpp"
#include "support.hpp"

using namespace cartankit;
using testing_support::random_operator;
using testing_support::random_space;
using Q = Rational;

namespace {

GradedVectorSpace space(std::map<int, std::size_t> d) { return GradedVectorSpace(std::move(d)); }

/// R -> R by the identity, in degrees -1, 0.
CochainComplex<Q> two_term() {
  auto v = space({{-1, 1}, {0, 1}});
  GradedOperator<Q> d(v, v, 1);
  d.set(1, 0, Q(1));
  return {v, d};
}

}  // namespace

TEST_CASE("koszul sign") {
  CHECK(koszul(0) == 1);
  CHECK(koszul(3) == -1);
  CHECK(koszul(-1) == -1);
  CHECK(koszul(-4) == 1);
}

TEST_CASE("graded vector space bookkeeping") {
  auto v = space({{-2, 1}, {0, 3}, {1, 0}, {4, 2}});
  CHECK(v.total() == 6);
  CHECK(v.dim(1) == 0);
  CHECK(v.dims().size() == 3);  // empty degrees are dropped
  CHECK(v.offset(0) == 1);
  CHECK(v.offset(4) == 4);
  CHECK(v.degree_of(0) == -2);
  CHECK(v.degree_of(3) == 0);
  CHECK(v.degree_of(5) == 4);
  CHECK_THROWS_AS(v.degree_of(6), ShapeError);
  CHECK(v.basis_degrees() == std::vector<int>{-2, 0, 0, 0, 4, 4});
  CHECK(v == space({{-2, 1}, {0, 3}, {4, 2}}));
}

TEST_CASE("operators are homogeneous") {
  auto v = space({{0, 1}, {1, 1}});
  GradedOperator<Q> d(v, v, 1);
  d.set(1, 0, Q(5));
  CHECK(d.block(0)(0, 0) == 5);
  CHECK_THROWS_AS(d.set(0, 0, Q(1)), ShapeError);
  Matrix<Q> bad(2, 2);
  bad(0, 0) = 1;
  CHECK_THROWS_AS(GradedOperator<Q>(v, v, 1, bad), ShapeError);
  CHECK_THROWS_AS(GradedOperator<Q>(v, v, 1, Matrix<Q>(3, 2)), ShapeError);
}

TEST_CASE("compose") {
  std::mt19937_64 rng(1);
  auto v = space({{-2, 1}, {-1, 2}, {0, 2}});
  auto f = random_operator<Q>(rng, v, v, -1);
  SUBCASE("identity is neutral") {
    CHECK(compose(GradedOperator<Q>::identity(v), f) == f);
    CHECK(compose(f, GradedOperator<Q>::identity(v)) == f);
  }
  SUBCASE("degrees add") {
    auto g = random_operator<Q>(rng, v, v, -1);
    CHECK(compose(f, g).degree() == -2);
  }
  SUBCASE("differential squares to zero") {
    auto c = two_term();
    CHECK(compose(c.differential, c.differential).is_zero());
    CHECK(square_residual(c) == 0);
  }
  SUBCASE("mismatched spaces are rejected") {
    auto w = space({{0, 1}});
    GradedOperator<Q> h(w, w, 0);
    CHECK_THROWS_AS(compose(f, h), ShapeError);
    CHECK_THROWS_AS(f + GradedOperator<Q>(v, v, 0), ShapeError);
  }
}

TEST_CASE("graded commutator signs") {
  std::mt19937_64 rng(2);
  auto v = space({{-1, 2}, {0, 2}, {1, 1}});
  auto a = random_operator<Q>(rng, v, v, 0), b = random_operator<Q>(rng, v, v, 0);
  auto x = random_operator<Q>(rng, v, v, -1), y = random_operator<Q>(rng, v, v, 1);
  CHECK(graded_commutator(a, b) == a * b - b * a);
  CHECK(graded_commutator(x, x) == Q(2) * (x * x));
  auto z = random_operator<Q>(rng, v, v, -1);
  CHECK(graded_commutator(x, z) == x * z + z * x);
  CHECK(graded_commutator(x, y) == x * y + y * x);
}

TEST_CASE("graded antisymmetry and Jacobi on random operators") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 25; ++trial) {
    auto v = random_space(rng, -2, 1, 2);
    if (v.total() == 0) continue;
    std::uniform_int_distribution<int> deg(-1, 1);
    const int p = deg(rng), q = deg(rng), r = deg(rng);
    auto f = random_operator<Q>(rng, v, v, p), g = random_operator<Q>(rng, v, v, q),
         h = random_operator<Q>(rng, v, v, r);
    CAPTURE(trial);
    CHECK(graded_commutator(f, g) == Q(-koszul(p * q)) * graded_commutator(g, f));
    // [f,[g,h]] = [[f,g],h] + (-1)^{pq} [g,[f,h]]
    auto lhs = graded_commutator(f, graded_commutator(g, h));
    auto rhs = graded_commutator(graded_commutator(f, g), h) +
               Q(koszul(p * q)) * graded_commutator(g, graded_commutator(f, h));
    CHECK(lhs == rhs);
  }
}

TEST_CASE("tensor product of complexes") {
  SUBCASE("unit object") {
    std::mt19937_64 rng(4);
    auto v = space({{-1, 2}, {0, 1}});
    CochainComplex<Q> c{v, random_operator<Q>(rng, v, v, 1)};
    auto t = tensor_complex(c, CochainComplex<Q>::zero(GradedVectorSpace::unit()));
    CHECK(t.space == v);
    CHECK(t.differential == c.differential);
  }
  SUBCASE("dimensions convolve") {
    TensorLayout lay(space({{0, 2}}), space({{-1, 1}, {0, 1}}));
    CHECK(lay.space() == space({{-1, 2}, {0, 2}}));
    TensorLayout lay2(space({{-1, 2}, {1, 3}}), space({{0, 1}, {2, 4}}));
    CHECK(lay2.space() == space({{-1, 2}, {1, 3 + 8}, {3, 12}}));
  }
  SUBCASE("two two-term complexes, expanded by hand") {
    // Basis: n=-2: a=v-1(x)w-1; n=-1: b=v-1(x)w0, c=v0(x)w-1; n=0: e=v0(x)w0.
    // delta a = c - b, delta b = e, delta c = e.
    auto t = tensor_complex(two_term(), two_term());
    REQUIRE(t.space.total() == 4);
    Matrix<Q> expect(4, 4);
    expect(1, 0) = -1;
    expect(2, 0) = 1;
    expect(3, 1) = 1;
    expect(3, 2) = 1;
    CHECK(t.differential.matrix() == expect);
    CHECK(square_residual(t) == 0);
  }
}

TEST_CASE("nat carries the Koszul sign") {
  std::mt19937_64 rng(5);
  SUBCASE("degree-0 right factor has no sign") {
    auto v = space({{-1, 1}, {0, 2}}), w = space({{0, 1}, {1, 2}});
    auto f = random_operator<Q>(rng, v, v, 1), g = random_operator<Q>(rng, w, w, 0);
    auto n = nat(f, g);
    TensorLayout lay(v, w);
    for (std::size_t i = 0; i < v.total(); ++i)
      for (std::size_t j = 0; j < w.total(); ++j)
        for (std::size_t k = 0; k < v.total(); ++k)
          for (std::size_t l = 0; l < w.total(); ++l)
            if (v.degree_of(k) == v.degree_of(i) + 1) CHECK(n(lay.index(k, l), lay.index(i, j)) == f(k, i) * g(l, j));
  }
  SUBCASE("identities") {
    auto v = space({{-1, 1}, {0, 2}}), w = space({{1, 2}});
    CHECK(nat(GradedOperator<Q>::identity(v), GradedOperator<Q>::identity(w)) ==
          GradedOperator<Q>::identity(TensorLayout(v, w).space()));
  }
  SUBCASE("two odd maps: sign (-1)^{|v|}") {
    auto v = space({{0, 1}, {1, 1}}), w = space({{0, 1}, {1, 1}});
    GradedOperator<Q> f(v, v, -1), g(w, w, -1);
    f.set(0, 1, Q(1));
    g.set(0, 1, Q(1));
    TensorLayout lay(v, w);
    // v1 (x) w1 -> (-1)^{1*(-1)} v0 (x) w0
    CHECK(nat(f, g)(lay.index(0, 0), lay.index(1, 1)) == -1);
  }
}

TEST_CASE("tensor differential obeys the Leibniz sign law on basis tensors") {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 10; ++trial) {
    auto v = random_space(rng, -2, 1, 2), w = random_space(rng, -1, 1, 2);
    if (v.total() == 0 || w.total() == 0) continue;
    CochainComplex<Q> cv{v, random_operator<Q>(rng, v, v, 1)}, cw{w, random_operator<Q>(rng, w, w, 1)};
    auto t = tensor_complex(cv, cw);
    TensorLayout lay(v, w);
    // delta(v_i (x) w_j) = delta v_i (x) w_j + (-1)^{|v_i|} v_i (x) delta w_j
    Matrix<Q> expect(lay.space().total(), lay.space().total());
    for (std::size_t i = 0; i < v.total(); ++i)
      for (std::size_t j = 0; j < w.total(); ++j) {
        const std::size_t col = lay.index(i, j);
        for (std::size_t k = 0; k < v.total(); ++k) expect(lay.index(k, j), col) += cv.differential(k, i);
        for (std::size_t l = 0; l < w.total(); ++l)
          expect(lay.index(i, l), col) += Q(koszul(v.degree_of(i))) * cw.differential(l, j);
      }
    CHECK(t.differential.matrix() == expect);
  }
}

TEST_CASE("float operators") {
  std::mt19937_64 rng(7);
  auto v = space({{-1, 3}, {0, 3}});
  auto f = random_operator<double>(rng, v, v, 0), g = random_operator<double>(rng, v, v, 0);
  auto lhs = graded_commutator(f, g) + graded_commutator(g, f);
  CHECK(lhs.max_abs() < 1e-15);
}
