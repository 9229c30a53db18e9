#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "lyapdisp/catalog.hpp"
#include "lyapdisp/gle.hpp"

using namespace lyapdisp;

namespace {

std::string with_d0(const MatrixFamily& base, const std::vector<std::string>& d0, unsigned q) {
  MatrixFamily f = base;
  f.q = q;
  f.d0 = RationalMatrix(f.dim(), f.dim());
  for (Eigen::Index i = 0; i < f.dim(); ++i)
    for (Eigen::Index j = 0; j < f.dim(); ++j) f.d0(i, j) = parse_rational(d0[i * f.dim() + j]);
  f.d0_prime.reset();
  f.d1_prime.reset();
  return family_to_json(f);
}

}  // namespace

TEST_SUITE("catalog") {
  TEST_CASE("built-in lookups") {
    const auto g1 = get_family("g1");
    CHECK(g1.q == 1);
    CHECK(g1.d0(0, 0) == 1);
    CHECK(g1.d1(0, 0) == 2);
    const auto g6 = get_family("g6");
    CHECK(g6.q == 3);
    CHECK(g6.dim() == 6);
    const std::vector<int> row{1, 0, 1, 2, 0, 0};
    for (int j = 0; j < 6; ++j) CHECK(g6.d0(0, j) == row[j]);
    CHECK(get_family("trinomial-I").name == "g2");
    CHECK(builtin_family_names().size() == 8);
    CHECK_THROWS_AS(get_family("nosuch"), Error);
    for (const auto& f : builtin_families()) CHECK_NOTHROW(validate_family(f));
  }

  TEST_CASE("json round trip") {
    for (const auto& f : builtin_families()) {
      const auto back = parse_family_json(family_to_json(f));
      CHECK(back.d0 == f.d0);
      CHECK(back.d1 == f.d1);
      CHECK(back.q == f.q);
      CHECK(back.reference.minpoly == f.reference.minpoly);
    }
  }

  TEST_CASE("family files") {
    const auto dir = std::filesystem::temp_directory_path();
    const auto good = dir / "lyapdisp_family_g2.json";
    std::ofstream(good) << family_to_json(get_family("g2"));
    CHECK(get_family("@" + good.string()).d1 == get_family("g2").d1);
    CHECK_THROWS_AS(get_family("@" + (dir / "missing_family.json").string()), Error);
    CHECK_THROWS_AS(parse_family_json("{not json"), Error);
  }

  TEST_CASE("invariant violations") {
    const auto g2 = get_family("g2");
    try {
      parse_family_json(with_d0(g2, {"1", "0", "0", "1"}, 1));
      FAIL("rank-two sentinel accepted");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::InvariantViolation);
      CHECK(std::string(e.what()).find("rank") != std::string::npos);
    }
    try {
      parse_family_json(with_d0(g2, {"2", "0", "0", "0"}, 1));
      FAIL("trace-two sentinel accepted");
    } catch (const Error& e) {
      CHECK(e.code() == Errc::InvariantViolation);
      CHECK(std::string(e.what()).find("trace") != std::string::npos);
    }
  }

  TEST_CASE("verification rows") {
    const auto g2 = get_family("g2");
    const auto rows = verify_constants(g2, exponents(g2));
    bool saw_sigma2 = false;
    for (const auto& r : rows) {
      CAPTURE(r.quantity);
      CHECK(r.pass);
      if (r.quantity.rfind("sigma2 vs", 0) == 0) saw_sigma2 = true;
    }
    CHECK(saw_sigma2);

    auto report = exponents(g2);
    report.sigma2 += 1e-3;
    report.sigma2_error = 0.0;
    bool failed = false;
    for (const auto& r : verify_constants(g2, report))
      if (r.quantity.rfind("sigma2 vs", 0) == 0) failed = !r.pass;
    CHECK(failed);
  }
}
