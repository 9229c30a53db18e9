#include <doctest.h>

#include <bit>
#include <cmath>

#include "lyapdisp/digitsum.hpp"

using namespace lyapdisp;

TEST_SUITE("digitsum") {
  TEST_CASE("digit sums") {
    CHECK(digit_sum(0) == 0);
    CHECK(digit_sum(7) == 3);
    for (unsigned k = 0; k < 64; ++k) CHECK(digit_sum(std::uint64_t{1} << k) == 1);
  }

  TEST_CASE("summatory functions against brute force") {
    UInt128 s = 0, sf = 0;
    for (std::uint64_t n = 0; n <= (1u << 16); ++n) {
      if (summatory_digit_sum(n) != s || summatory_f(n) != sf) {
        FAIL("mismatch at n = " << n);
        break;
      }
      s += std::popcount(n);
      sf += UInt128{1} << std::popcount(n);
    }
    CHECK(summatory_digit_sum(1) == 0);
    CHECK(summatory_digit_sum(4) == 4);
    CHECK(summatory_f(1) == 1);
    CHECK(summatory_f(4) == 9);
    UInt128 p3 = 1;
    for (unsigned j = 0; j <= 62; ++j, p3 *= 3) {
      CHECK(summatory_digit_sum(std::uint64_t{1} << j) == (UInt128{j} << j) / 2);
      CHECK(summatory_f(std::uint64_t{1} << j) == p3);
    }
    CHECK(to_string(summatory_f(std::uint64_t{1} << 40)) == "12157665459056928801");
  }

  TEST_CASE("fluctuations at powers of two") {
    for (unsigned j = 1; j < 63; ++j) {
      CHECK(phi(std::uint64_t{1} << j).value == 0.0);
      CHECK(psi(std::uint64_t{1} << j).value == doctest::Approx(1.0).epsilon(1e-15));
    }
  }

  TEST_CASE("periodicity of the rational parts") {
    // x(n) = x(2n), and S(2n)/(2n) - (j+1)/2 = S(n)/n - j/2 exactly.
    for (std::uint64_t n = 1; n < 5000; n += 7) {
      CHECK(phi_rational_part(2 * n) == phi_rational_part(n));
      CHECK(psi_rational_part(2 * n) == psi_rational_part(n));
      CHECK(phi(2 * n).x == phi(n).x);
    }
  }

  TEST_CASE("scans") {
    const auto p = scan_fluctuation(Fluctuation::Phi, 1u << 20);
    CHECK(p.bound_violations == 0);
    CHECK(p.sup == 0.0);
    CHECK(std::abs(p.inf - (std::log(3.0) / (2 * std::log(2.0)) - 1)) < 1e-4);
    const auto q = scan_fluctuation(Fluctuation::Psi, 1u << 20);
    CHECK(q.bound_violations == 0);
    CHECK(q.sup == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(q.inf - 0.8125565590160063) < 1e-4);
    CHECK(std::abs(q.mean - 0.8636049963990796) < 2e-3);
  }

  TEST_CASE("fluctuation statistics") {
    const auto s = phi_statistics(1, 40, 1u << 16);
    CHECK(std::abs(s.mean - (-0.1455994557083223)) < 2e-3);
    CHECK(std::abs(s.inf - (-0.20751874)) < 1e-4);
    REQUIRE_FALSE(s.percentiles.empty());
    CHECK(s.percentiles.back().p == 100.0);
    CHECK(std::abs(s.percentiles.back().value) < 1e-3);
    double mass = 0.0;
    for (const auto& b : s.histogram) mass += b.mass;
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
    const auto t = psi_statistics(1, 20, 1u << 12);
    CHECK(std::abs(t.mean - 0.8636049963990796) < 2e-3);
  }

  TEST_CASE("gf2 products and row counts") {
    const auto a = Gf2Poly::from_mask(0b11);
    CHECK((a * a) == Gf2Poly::from_mask(0b101));
    CHECK(Gf2Poly::from_mask(0).degree() == -1);
    Gf2Poly big = Gf2Poly::from_mask(1);
    for (int i = 0; i < 100; ++i) big = big * a;
    CHECK(big.degree() == 100);
    CHECK(big.popcount() == (std::size_t{1} << std::popcount(100u)));

    const auto counts = gf2_row_counts(a, 1u << 14);
    bool all = true;
    for (std::uint64_t n = 0; n <= (1u << 14); ++n)
      all = all && counts[n] == (std::uint64_t{1} << std::popcount(n));
    CHECK(all);

    const auto tri = gf2_row_counts(Gf2Poly::from_mask(0b111), 300);
    Gf2Poly p = Gf2Poly::from_mask(1);
    for (std::uint64_t n = 0; n <= 300; ++n, p = p * Gf2Poly::from_mask(0b111))
      CHECK(tri[n] == p.popcount());
    CHECK_THROWS_AS(gf2_row_counts(a, kMaxRowCount + 1), Error);
  }

  TEST_CASE("linear representations") {
    const auto g1 = fit_linear_representation(get_family("g1"), 1024);
    CHECK(g1.u(0) * g1.v(0) == 1);

    for (const char* name : {"g2", "g3"}) {
      CAPTURE(name);
      const auto fam = get_family(name);
      const auto rep = fit_linear_representation(fam, 1u << 12);
      CHECK(rep.validated_below == (1u << 12));
      const auto counts = gf2_row_counts(Gf2Poly::from_mask(fam.polynomial_mask), (1u << 12) - 1);
      for (std::uint64_t n = 0; n < (1u << 12); n += 37)
        CHECK(representation_value(rep, fam.d0, fam.d1, n) == Rational(counts[n]));
    }

    const auto g2 = get_family("g2");
    const auto wrong = gf2_row_counts(Gf2Poly::from_mask(get_family("g3").polynomial_mask), 4095);
    CHECK_THROWS_AS(fit_linear_representation(g2.d0, g2.d1, wrong), Error);
  }

  TEST_CASE("empirical dispersion") {
    const auto d = empirical_dispersion(get_family("g1"), 16);
    CHECK(d.typ_slope == doctest::Approx(std::log(2.0) / 4).epsilon(1e-10));
    const auto e = empirical_dispersion(get_family("g2"), 20);
    CHECK(std::abs(e.typ_slope - 0.17476333) < 0.02);
  }

  TEST_CASE("digit distributions") {
    const auto same = digit_distribution_compare(1, 0, 16, 1u << 16);
    CHECK(same.cdf_distance == 0.0);
    CHECK(same.samples == (1u << 16));
    const auto r = digit_distribution_compare(3, 0, 24, 1000000, 1);
    CHECK(std::abs(r.reference.mean) < 0.02);
    CHECK(std::abs(r.reference.variance - 1.0) < 0.02);
    CHECK(r.reference.normal_cdf_distance < 0.02);
    const auto again = digit_distribution_compare(3, 0, 24, 1000000, 1);
    CHECK(again.shifted.mean == r.shifted.mean);
  }
}
