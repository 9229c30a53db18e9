#include <doctest.h>

#include <array>

#include "lyapdisp/catalog.hpp"
#include "lyapdisp/exactmat.hpp"

using namespace lyapdisp;

namespace {

RationalMatrix mat(Eigen::Index r, Eigen::Index c, std::initializer_list<int> v) {
  RationalMatrix m(r, c);
  auto it = v.begin();
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = Rational(*it++);
  return m;
}

}  // namespace

TEST_SUITE("exactmat") {
  TEST_CASE("rational parsing and formatting") {
    CHECK(parse_rational("6/4") == Rational(3, 2));
    CHECK(parse_rational("-7") == Rational(-7));
    CHECK(format_rational(Rational(-3, 9)) == "-1/3");
    CHECK_THROWS_AS(parse_rational("1/0"), Error);
    CHECK_THROWS_AS(parse_rational("x"), Error);
  }

  TEST_CASE("products") {
    const auto a = mat(2, 2, {3, -4, 1, -2});
    CHECK(mat_mul(identity<Rational>(2), a) == a);
    const auto g2 = get_family("g2");
    CHECK(mat_mul(g2.d0, g2.d0) == g2.d0);
    CHECK(mat_mul(mat(1, 1, {2}), mat(1, 1, {2})) == mat(1, 1, {4}));
    CHECK_THROWS_AS(mat_mul(mat(1, 2, {1, 2}), mat(1, 2, {1, 2})), Error);
  }

  TEST_CASE("powers") {
    CHECK(mat_pow(mat(2, 2, {3, -4, 1, -2}), 0) == identity<Rational>(2));
    const auto g3 = get_family("g3");
    const auto sq = mat_pow(g3.d0, 2);
    CHECK(exact_rank(sq) == 1);
    CHECK(sq.row(0) == mat(1, 3, {1, 2, 2}));
    CHECK(sq.bottomRows(2).isZero());
    CHECK(mat_pow(*get_family("g2").d1_prime, 2) == mat(2, 2, {5, -4, 1, 0}));
    // The (0,0) entry of D1'^k follows (2^{k+2} - (-1)^k)/3 shifted by one.
    const auto p = mat_pow(*get_family("g2").d1_prime, 7);
    CHECK(p(0, 0) == Rational((1 << 9) + 1, 3));
  }

  TEST_CASE("kronecker") {
    CHECK(kronecker(mat(1, 1, {1}), mat(1, 1, {1})) == mat(1, 1, {1}));
    CHECK(kronecker(mat(1, 1, {2}), mat(1, 1, {2})) == mat(1, 1, {4}));
    const auto d0 = get_family("g2").d0;
    const auto k = kronecker(d0, d0);
    REQUIRE(k.rows() == 4);
    CHECK(k.row(0) == mat(1, 4, {1, 2, 2, 4}));
    CHECK(k.bottomRows(3).isZero());
    CHECK(kronecker_power(d0, 3).rows() == 8);
    CHECK_THROWS_AS(kronecker(identity<Rational>(64), identity<Rational>(65)), Error);
  }

  TEST_CASE("rank-one factorization") {
    const auto e00 = elementary<Rational>(3, 0, 0);
    const auto f = rank_one_factor(e00);
    CHECK(f.alpha == RationalVector::Unit(3, 0));
    CHECK(f.beta == RationalVector::Unit(3, 0));
    const auto d0 = get_family("g2").d0;
    const auto g = rank_one_factor(d0);
    CHECK(g.alpha * g.beta.transpose() == d0);
    CHECK(g.alpha(1) == 0);
    CHECK(g.beta(1) == 2 * g.beta(0));
    CHECK_THROWS_AS(rank_one_factor(identity<Rational>(2)), Error);
    CHECK_THROWS_AS(rank_one_factor(RationalMatrix(RationalMatrix::Zero(2, 2))), Error);
  }

  TEST_CASE("inverse") {
    CHECK(mat_inverse(identity<Rational>(3)) == identity<Rational>(3));
    const auto d = mat(2, 2, {2, 0, 0, 4});
    RationalMatrix inv(2, 2);
    inv << Rational(1, 2), 0, 0, Rational(1, 4);
    CHECK(mat_inverse(d) == inv);
    const auto q = mat(2, 2, {1, -2, 0, 1});
    CHECK(mat_mul(q, mat_inverse(q)) == identity<Rational>(2));
    CHECK_THROWS_AS(mat_inverse(mat(2, 2, {1, 2, 2, 4})), Error);
  }

  TEST_CASE("null space and exact solve") {
    const auto a = mat(2, 3, {1, 2, 2, 0, 0, 0});
    const auto ns = null_space(a);
    CHECK(ns.cols() == 2);
    CHECK((a * ns).isZero());
    RationalVector b(2);
    b << 5, 0;
    const auto x = solve_exact(a, b, true);
    REQUIRE(x);
    CHECK(a * *x == b);
    CHECK_FALSE(solve_exact(a, b, false));
    b(1) = 1;
    CHECK_FALSE(solve_exact(a, b, true));
  }

  TEST_CASE("spectral radius") {
    CHECK(spectral_radius(Eigen::Matrix2d::Identity()) == doctest::Approx(1.0).epsilon(1e-14));
    Eigen::Matrix2d m;
    m << 1, 2, 0, 0;
    CHECK(spectral_radius(m) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(spectral_radius(Eigen::MatrixXd::Constant(1, 1, 1.5)) == doctest::Approx(1.5));
    const auto g1 = get_family("g1");
    const FloatMatrix avg = 0.5 * (to_float(kronecker(g1.d0, g1.d0)) + to_float(kronecker(g1.d1, g1.d1)));
    CHECK(spectral_radius(avg) == doctest::Approx(2.5).epsilon(1e-14));
    const auto g2 = get_family("g2");
    const FloatMatrix avg2 =
        0.5 * (to_float(kronecker(g2.d0, g2.d0)) + to_float(kronecker(g2.d1, g2.d1)));
    CHECK(spectral_radius(avg2) == doctest::Approx(2.813).epsilon(1e-3));
  }

  TEST_CASE("polynomial residual") {
    const std::array<std::int64_t, 4> p{1, -2, -3, 2};
    CHECK(poly_eval(p, 1.0) == -2.0);
    CHECK(poly_derivative(p, 1.0) == -4.0);
    const auto g2 = get_family("g2");
    const FloatMatrix avg2 =
        0.5 * (to_float(kronecker(g2.d0, g2.d0)) + to_float(kronecker(g2.d1, g2.d1)));
    CHECK(poly_root_residual(p, spectral_radius(avg2)) < 1e-8);
  }

  TEST_CASE("infinity norm") {
    CHECK(inf_norm(identity<Rational>(2)) == 1.0);
    CHECK(inf_norm(mat(2, 2, {1, 2, 0, 0})) == 3.0);
    CHECK(inf_norm(mat(2, 2, {3, -4, 1, -2})) == 7.0);
  }
}
