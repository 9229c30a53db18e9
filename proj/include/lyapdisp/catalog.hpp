#pragma once

// Built-in matrix families and their published reference constants, plus a
// JSON family-definition format for user-supplied pairs.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lyapdisp/conjugate.hpp"

namespace lyapdisp {

struct ReferenceValue {
  double value = 0.0;
  std::string printed;  // digits as printed, for reports
  double tol = 0.0;     // pinned comparison tolerance
  std::string source;   // e.g. "published", "closed form"
};

struct ReferenceConstants {
  std::optional<ReferenceValue> lambda;
  std::optional<ReferenceValue> kappa;
  std::optional<ReferenceValue> mu;
  std::optional<ReferenceValue> sigma2;
  std::optional<ReferenceValue> avg;  // L(2)/ln 2
  std::optional<ReferenceValue> typ;  // sigma^2/ln 2
  std::vector<std::int64_t> minpoly;  // of xi = e^{L(2)}, highest degree first
  std::string minpoly_source;
};

struct MatrixFamily {
  std::string name;
  std::vector<std::string> aliases;
  unsigned q = 1;
  RationalMatrix d0;
  RationalMatrix d1;
  std::optional<RationalMatrix> d0_prime;
  std::optional<RationalMatrix> d1_prime;
  /// GF(2) polynomial whose powers the family counts: bit i = coefficient of x^i.
  std::uint64_t polynomial_mask = 0;
  ReferenceConstants reference;

  Eigen::Index dim() const { return d0.rows(); }
  /// Factorization of D0^q; valid for every family that passed validation.
  SentinelFactorization factorization() const;
};

/// Rank/trace/nonnegativity checks; throws InvariantViolation naming the check.
void validate_family(const MatrixFamily& family);

const std::vector<MatrixFamily>& builtin_families();
std::vector<std::string> builtin_family_names();

/// Built-in by name or alias ("g2", "trinomial-I", ...) or "@path.json".
MatrixFamily get_family(std::string_view name);

MatrixFamily load_family_file(const std::filesystem::path& path);
MatrixFamily parse_family_json(std::string_view text);
std::string family_to_json(const MatrixFamily& family);

struct ExponentReport;

struct VerifyRow {
  std::string quantity;
  double computed = 0.0;
  double reference = 0.0;
  double tol = 0.0;
  bool pass = false;
};

/// Compares a report against the family's reference constants. The tolerance
/// of each row is max(pinned tolerance, 10 * the report's own error bar).
std::vector<VerifyRow> verify_constants(const MatrixFamily& family, const ExponentReport& report);

}  // namespace lyapdisp
