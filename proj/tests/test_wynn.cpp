#include <doctest.h>

#include <cmath>
#include <vector>

#include "lyapdisp/error.hpp"
#include "lyapdisp/wynn.hpp"

using namespace lyapdisp;

TEST_SUITE("wynn") {
  TEST_CASE("geometric series is exact at depth two") {
    std::vector<double> s;
    double acc = 0.0;
    for (int k = 0; k < 6; ++k) s.push_back(acc += std::ldexp(1.0, -k));
    const auto r = wynn_epsilon(s);
    CHECK(r.estimate == doctest::Approx(2.0).epsilon(1e-15));
    const EpsilonTable t(std::span<const double>(s.data(), 3));
    CHECK(t.column(2).front() == doctest::Approx(2.0).epsilon(1e-15));
  }

  TEST_CASE("arithmetico-geometric series") {
    std::vector<double> s;
    double acc = 0.0;
    for (int k = 0; k <= 30; ++k) s.push_back(acc += k * std::ldexp(1.0, -k));
    const auto r = wynn_epsilon(s);
    CHECK(std::abs(r.estimate - 2.0) < 1e-12);
    CHECK(r.raw == s.back());
    CHECK(r.depth % 2 == 0);
  }

  TEST_CASE("alternating log series") {
    std::vector<double> s;
    double acc = 0.0;
    for (int k = 1; k <= 20; ++k) s.push_back(acc += (k % 2 ? 1.0 : -1.0) / k);
    CHECK(std::abs(wynn_epsilon(s).estimate - std::log(2.0)) < 1e-12);
  }

  TEST_CASE("stalled sequences do not poison the estimate") {
    std::vector<double> s{0.0, 0.0, 0.0, 1.0, 1.5, 1.75, 1.875, 1.9375};
    const auto r = wynn_epsilon(s);
    CHECK(std::isfinite(r.estimate));
    CHECK(r.estimate == doctest::Approx(2.0).epsilon(1e-12));
    const std::vector<double> flat(8, 3.0);
    CHECK(wynn_epsilon(flat).estimate == 3.0);
  }

  TEST_CASE("too short") {
    const std::vector<double> s{1.0, 2.0};
    CHECK_THROWS_AS(wynn_epsilon(s), Error);
  }
}
