#include <doctest.h>

#include <cmath>

#include "lyapdisp/catalog.hpp"
#include "lyapdisp/mcsim.hpp"

using namespace lyapdisp;

namespace {

const double ln2 = std::log(2.0);

}  // namespace

TEST_SUITE("mcsim") {
  TEST_CASE("philox known answers") {
    using C = Philox4x32::Counter;
    using K = Philox4x32::Key;
    CHECK(Philox4x32::block(C{0, 0, 0, 0}, K{0, 0}) ==
          C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
    CHECK(Philox4x32::block(C{~0u, ~0u, ~0u, ~0u}, K{~0u, ~0u}) ==
          C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
    CHECK(Philox4x32::block(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                            K{0xa4093822, 0x299f31d0}) ==
          C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
  }

  TEST_CASE("streams are independent of call order") {
    const auto a = trial_digits(7, 1234, 100);
    (void)trial_digits(7, 1, 100);
    CHECK(trial_digits(7, 1234, 100) == a);
    CHECK(trial_digits(8, 1234, 100) != a);
  }

  TEST_CASE("renormalization is exact for short products") {
    const auto g2 = get_family("g2");
    const auto d0 = to_float(g2.d0), d1 = to_float(g2.d1);
    for (std::uint64_t i = 0; i < 50; ++i) {
      const auto digits = trial_digits(3, i, 20);
      const auto exact = word_product(g2.d0, g2.d1, digits);
      const double ln = std::log(inf_norm(exact));
      CHECK(log_norm_product(d0, d1, digits) == doctest::Approx(ln).epsilon(1e-14));
    }
    const auto long_digits = trial_digits(3, 0, 4000);
    CHECK(std::isfinite(log_norm_product(d0, d1, long_digits)));
  }

  TEST_CASE("binomial product is exactly the digit count") {
    const auto g1 = get_family("g1");
    SimConfig c;
    c.family = g1;
    c.k = 64;
    c.trials = 100000;
    c.seed = 11;
    const auto r = simulate(c);
    CHECK(r.degenerate == 0);
    CHECK(std::abs(r.lambda_hat - ln2 / 2) < 4 * r.lambda_se);
    CHECK(std::abs(r.sigma2_hat - ln2 * ln2 / 4) < 4 * r.sigma2_se);
  }

  TEST_CASE("trinomial-I dispersion") {
    SimConfig c;
    c.family = get_family("g2");
    c.k = 256;
    c.trials = 100000;
    c.seed = 1;
    const auto r = simulate(c);
    CHECK(std::abs(r.sigma2_hat - 0.12113671) < 4 * r.sigma2_se);
  }

  TEST_CASE("seed determinism and thread independence") {
    SimConfig c;
    c.family = get_family("h3");
    c.k = 40;
    c.trials = 9000;
    c.seed = 5;
    c.threads = 1;
    const auto a = simulate(c);
    c.threads = 6;
    const auto b = simulate(c);
    CHECK(a.mean == b.mean);
    CHECK(a.variance == b.variance);
    CHECK(a.sigma2_se == b.sigma2_se);
  }

  TEST_CASE("moment growth") {
    SimConfig c;
    c.family = get_family("g1");
    c.k = 32;
    c.trials = 1000000;
    const auto zero = simulate_moment(c, 0.0);
    CHECK(zero.growth == 0.0);
    const auto r = simulate_moment(c, 2.0);
    CHECK(std::abs(r.growth - std::log(2.5)) < 4 * r.growth_se);

    // Finite products bias the quadrinomial estimate by O(1/k); the
    // combination 2 g(2k) - g(k) removes the leading term.
    SimConfig q;
    q.family = get_family("g3");
    q.trials = 200000;
    q.k = 32;
    const auto a = simulate_moment(q, 1.0);
    q.k = 64;
    const auto b = simulate_moment(q, 1.0);
    const double rich = 2 * b.growth - a.growth;
    const double se = std::hypot(2 * b.growth_se, a.growth_se);
    CHECK(std::abs(rich - std::log(1.5)) < 4 * se);
    CHECK_THROWS_AS(simulate_moment(q, 5.0), Error);
  }

  TEST_CASE("degenerate configurations") {
    SimConfig c;
    c.family = get_family("g1");
    c.k = 0;
    CHECK_THROWS_AS(simulate(c), Error);
  }
}
