#include <doctest.h>

#include <cmath>

#include "lyapdisp/gle.hpp"
#include "lyapdisp/regroup.hpp"

using namespace lyapdisp;

namespace {

const double ln2 = std::log(2.0);

}  // namespace

TEST_SUITE("gle") {
  TEST_CASE("prefactors") {
    CHECK(moment_prefactor(1) == Rational(1, 4));
    CHECK(moment_prefactor(2) == Rational(1, 24));
    CHECK(sigma2_prefactor(1) == 3);
    CHECK(sigma2_prefactor(2) == Rational(29, 3));
    CHECK(sigma2_prefactor(3) == Rational(169, 7));
  }

  TEST_CASE("moment series of the binomial family") {
    const auto s = accumulate_moments(get_family("g1"), 40);
    const auto lam = s.cumulative_lambda();
    double closed = 0.0;
    for (int k = 0; k <= 40; ++k) {
      closed += k * std::ldexp(1.0, -k);
      CHECK(lam[k] == doctest::Approx(ln2 * closed / 4).epsilon(1e-14));
    }
    const auto z = accumulate_moments(get_family("g3"), 0);
    CHECK(z.cumulative_lambda().back() == 0.0);
    CHECK(z.cumulative_mu().back() == 0.0);
    CHECK(z.slabs[0].words == 1);
  }

  TEST_CASE("moment series are independent of the thread count") {
    const auto fam = get_family("h3");
    const auto a = accumulate_moments(fam, 18, ParallelOptions{1});
    const auto b = accumulate_moments(fam, 18, ParallelOptions{7});
    for (std::size_t l = 0; l <= 18; ++l) {
      CHECK(a.slabs[l].words == b.slabs[l].words);
      CHECK(a.slabs[l].lambda == b.slabs[l].lambda);
      CHECK(a.slabs[l].mu == b.slabs[l].mu);
    }
  }

  TEST_CASE("sigma2 from closed-form moments") {
    const double s2 = sigma2_from_moments(ln2 / 2, 2 * ln2, 1.5 * ln2 * ln2, 1);
    CHECK(s2 == doctest::Approx(ln2 * ln2 / 4).epsilon(1e-14));
  }

  TEST_CASE("exponents") {
    SUBCASE("binomial") {
      const auto r = exponents(get_family("g1"));
      CHECK(std::abs(r.lambda.accelerated - ln2 / 2) < 1e-12);
      CHECK(std::abs(r.sigma2 / ln2 - 0.1732867951399863) < 1e-12);
      CHECK(r.skipped_words == 0);
    }
    SUBCASE("trinomial-I") {
      const auto r = exponents(get_family("g2"));
      CHECK(std::abs(r.lambda.accelerated - 0.4299474333424527) < 1e-8);
      CHECK(std::abs(r.sigma2 - 0.1211367118847285) < 1e-7);
      REQUIRE(r.replica_l2);
      CHECK(std::abs(*r.replica_l2 - 2.813) < 1e-3);
    }
    SUBCASE("quadrinomial at max_len 30") {
      ExponentOptions o;
      o.max_len = 30;
      o.replica = false;
      const auto r = exponents(get_family("g3"), o);
      CHECK(std::abs(r.lambda.accelerated - ln2 / 2) < 1e-6);
      CHECK_FALSE(r.replica_l2);
    }
    SUBCASE("h3 at max_len 30") {
      ExponentOptions o;
      o.max_len = 30;
      const auto r = exponents(get_family("h3"), o);
      CHECK(std::abs(r.lambda.accelerated - 0.45454538229305) < 1e-6);
      CHECK(std::abs(r.sigma2 - 0.12497319) < 1e-5);
      CHECK(std::abs(r.sigma2 / ln2 - 0.18029820) < 1e-5);
    }
    SUBCASE("unaccelerated estimates are the raw sums") {
      ExponentOptions o;
      o.max_len = 20;
      o.accelerate = false;
      const auto r = exponents(get_family("g2"), o);
      CHECK(r.lambda.accelerated == r.lambda.raw);
    }
  }

  TEST_CASE("F near the origin") {
    const auto fam = get_family("g3");
    CHECK(std::abs(F_eval(fam, 1.0, 0.0, 30).value - 1.0) < 1e-6);
    const double h = 1e-4;
    const double fs = (F_eval(fam, 1.0 + h, 0.0, 30).value - F_eval(fam, 1.0 - h, 0.0, 30).value) / (2 * h);
    CHECK(fs == doctest::Approx(6.0).epsilon(1e-5));
    CHECK(lambda_from_F(get_family("g2"), 30) == doctest::Approx(0.4299474333).epsilon(1e-6));
  }

  TEST_CASE("generalized exponent") {
    CHECK(L_of_t(get_family("g2"), 0.0, 30) == 0.0);
    CHECK(std::abs(L_of_t(get_family("g1"), 2.0, 36) - std::log(2.5)) < 1e-12);
    CHECK(std::abs(L_of_t(get_family("g3"), 1.0, 30) - std::log(1.5)) < 1e-8);
    CHECK(std::abs(L_of_t(get_family("g2"), 2.0, 36) - std::log(replica_exponent(get_family("g2"), 2))) < 1e-10);
  }

  TEST_CASE("replica exponents") {
    CHECK(replica_exponent(get_family("g1"), 2) == doctest::Approx(2.5).epsilon(1e-14));
    CHECK(replica_exponent(get_family("g1"), 1) == doctest::Approx(1.5).epsilon(1e-14));
    const auto g4 = get_family("g4");
    const double x4 = replica_exponent(g4, 2);
    CHECK(std::abs(x4 - 3.145) < 1e-3);
    CHECK(poly_root_residual(g4.reference.minpoly, x4) < 1e-8);
    CHECK(std::abs(replica_exponent(get_family("g6"), 2) - 3.307) < 1e-3);
    const auto h3 = get_family("h3");
    CHECK(poly_root_residual(h3.reference.minpoly, replica_exponent(h3, 2)) < 1e-8);
    CHECK_THROWS_AS(replica_exponent(get_family("h4"), 5, 4096), Error);
  }

  TEST_CASE("dispersion parameters") {
    const auto d = dispersion_params(get_family("g1"));
    CHECK(d.avg == doctest::Approx(1.3219280948).epsilon(1e-10));
    CHECK(d.typ == doctest::Approx(0.1732867951).epsilon(1e-9));
  }

  TEST_CASE("finite differences of L reproduce the moments") {
    const auto r = exponents(get_family("g2"));
    const auto d = derivative_check(get_family("g2"), 36);
    CHECK(std::abs(d.lambda_fd - r.lambda.accelerated) < std::max(1e-4, 20 * d.truncation_error));
    CHECK(std::abs(d.sigma2_fd - r.sigma2) < std::max(1e-4, 20 * d.truncation_error));
  }

  TEST_CASE("quadrinomial regrouping") {
    const auto rq = regroup_quadrinomial();
    for (int i = 1; i <= 2; ++i)
      for (int j = 1; j <= 2; ++j)
        for (unsigned k = 0; k <= 20; ++k) {
          Rational pattern = rq.coeff[i - 1][j - 1];
          for (unsigned p = 0; p < k; ++p) pattern *= rq.ratio[i - 1][j - 1];
          CHECK(regroup_corner(rq, i, j, k) == pattern);
        }
    CHECK(std::abs(quadrinomial_regroup_L(0.0)) < 1e-12);
    CHECK(quadrinomial_regroup_L(1.0) == doctest::Approx(std::log(1.5)).epsilon(1e-13));
    CHECK(quadrinomial_regroup_L(2.0) == doctest::Approx(std::log(2.5)).epsilon(1e-13));
    for (double t = -1.0; t <= 3.0; t += 0.25)
      CHECK(std::abs(quadrinomial_regroup_L(t) - std::log((std::exp2(t) + 1) / 2)) < 1e-12);
  }
}
