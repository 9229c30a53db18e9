#pragma once

// Binary digit sums, odd-coefficient counts of GF(2) polynomial powers, the
// Trollope-Delange and Stein-Larcher fluctuation functions, and empirical
// dispersion of the counts.
//
//   S(n)  = sum_{k<n} #(k),        Phi(x(n)) = S(n)/n - log2(n)/2
//   Sf(n) = sum_{k<n} 2^{#(k)},    Psi(x(n)) = Sf(n) / n^{log2 3}
// with x(n) = frac(log2 n). Both identities are exact for every n >= 1.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lyapdisp/catalog.hpp"

namespace lyapdisp {

using UInt128 = unsigned __int128;
std::string to_string(UInt128 v);

unsigned digit_sum(std::uint64_t n);
UInt128 summatory_digit_sum(std::uint64_t n);
UInt128 summatory_f(std::uint64_t n);

enum class Fluctuation { Phi, Psi };
const char* to_string(Fluctuation kind);

struct FluctuationSample {
  std::uint64_t n = 0;
  double x = 0.0;
  double value = 0.0;
};

/// Requires 1 <= n < 2^63.
FluctuationSample phi(std::uint64_t n);
FluctuationSample psi(std::uint64_t n);
FluctuationSample fluctuation(Fluctuation kind, std::uint64_t n);
/// S(n)/n - floor(log2 n)/2 and Sf(n)/3^floor(log2 n): the exact rational parts.
Rational phi_rational_part(std::uint64_t n);
Rational psi_rational_part(std::uint64_t n);

/// Every n in [2, n_max], evaluated incrementally.
struct FluctuationScan {
  Fluctuation kind = Fluctuation::Phi;
  std::uint64_t n_max = 0;
  double inf = 0.0;
  std::uint64_t inf_n = 0;
  double sup = 0.0;
  std::uint64_t sup_n = 0;
  /// Trapezoid mean over the top complete octave [2^J, 2^{J+1}] within n_max.
  double mean = 0.0;
  /// Samples violating Phi <= 0 or 0 < Psi <= 1 (and the first offender).
  std::uint64_t bound_violations = 0;
  std::uint64_t first_violation = 0;
};

FluctuationScan scan_fluctuation(Fluctuation kind, std::uint64_t n_max);

struct Percentile {
  double p = 0.0;  // in [0, 100]
  double value = 0.0;
};

struct HistogramBin {
  double lo = 0.0, hi = 0.0, mass = 0.0;
};

struct FluctuationStatistics {
  Fluctuation kind = Fluctuation::Phi;
  double inf = 0.0, sup = 0.0, mean = 0.0;
  std::vector<Percentile> percentiles;
  std::vector<HistogramBin> histogram;
  std::vector<FluctuationSample> samples;  // sorted by x
};

/// Samples n = floor(2^{j + i/samples_per_octave}) for every octave j in
/// [j_min, j_max] (j_max <= 40). Each sample carries the weight of its share of
/// the period in x; the mean is the periodic trapezoid rule and percentiles
/// are taken from that measure.
FluctuationStatistics fluctuation_statistics(Fluctuation kind, unsigned j_min, unsigned j_max,
                                             unsigned samples_per_octave, unsigned bins = 64);
inline FluctuationStatistics phi_statistics(unsigned j_min, unsigned j_max,
                                            unsigned samples_per_octave) {
  return fluctuation_statistics(Fluctuation::Phi, j_min, j_max, samples_per_octave);
}
inline FluctuationStatistics psi_statistics(unsigned j_min, unsigned j_max,
                                            unsigned samples_per_octave) {
  return fluctuation_statistics(Fluctuation::Psi, j_min, j_max, samples_per_octave);
}

/// Polynomial over GF(2); bit i of the packed words is the coefficient of x^i.
struct Gf2Poly {
  std::vector<std::uint64_t> words;

  static Gf2Poly from_mask(std::uint64_t mask);
  /// -1 for the zero polynomial.
  long degree() const;
  bool coefficient(std::size_t i) const;
  std::size_t popcount() const;
  Gf2Poly operator*(const Gf2Poly& other) const;
  friend bool operator==(const Gf2Poly& a, const Gf2Poly& b);
};

inline constexpr std::uint64_t kMaxRowCount = 1u << 18;

/// Number of odd coefficients of poly^n for n = 0..n_max.
std::vector<std::uint64_t> gf2_row_counts(const Gf2Poly& poly, std::uint64_t n_max);

enum class DigitOrder { MsbFirst, LsbFirst };
const char* to_string(DigitOrder order);

/// count(n) = u^T D_{z(n)} v, where z(n) lists the binary digits of n (no
/// leading zeros; n = 0 gives the empty word) in the given order and
/// D_{z_0 z_1 ...} = D_{z_0} D_{z_1} ...
struct LinearRepresentation {
  DigitOrder order = DigitOrder::LsbFirst;
  RationalVector u;
  RationalVector v;
  std::uint64_t validated_below = 0;  // exact on every n < validated_below
};

Rational representation_value(const LinearRepresentation& rep, const RationalMatrix& d0,
                              const RationalMatrix& d1, std::uint64_t n);

/// Tries LSB-first, then MSB-first. The vector on the leading-zero side is the
/// fixed vector of D0; the other is solved exactly from the first 4 dim^2
/// counts (free coordinates set to zero when the system is rank deficient).
/// Every count in `counts` must then be reproduced.
/// Throws NoRepresentationFound naming the first mismatch of each order.
LinearRepresentation fit_linear_representation(const RationalMatrix& d0, const RationalMatrix& d1,
                                               std::span<const std::uint64_t> counts);
/// Uses gf2_row_counts of the family's polynomial for n < n_check (>= 2 dim^2).
LinearRepresentation fit_linear_representation(const MatrixFamily& family, std::uint64_t n_check);

/// count(N) for every N < 2^j from a representation, in floating point.
std::vector<double> representation_counts(const LinearRepresentation& rep, const MatrixFamily& family,
                                          unsigned j);

struct OctaveRow {
  unsigned j = 0;
  double mean = 0.0;
  double var = 0.0;     // Var(count(N)), N uniform on [0, 2^j)
  double var_ln = 0.0;  // Var(ln count(N))
  double avg_ratio = 0.0;  // ln var / ln n
  double typ_ratio = 0.0;  // var_ln / ln n
};

struct EmpiricalDispersion {
  double avg_slope = 0.0;  // OLS slope of ln Var(count) against ln n
  double typ_slope = 0.0;  // OLS slope of Var(ln count) against ln n
  std::vector<OctaveRow> octaves;
  DigitOrder order = DigitOrder::LsbFirst;
};

EmpiricalDispersion empirical_dispersion(const MatrixFamily& family, unsigned j_max,
                                         unsigned j_min = 8);

struct DigitMoments {
  double mean = 0.0;      // of (#(M) - ln n/(2 ln 2)) / sqrt(ln n/(4 ln 2))
  double variance = 0.0;  // of the same standardized variable
  double skewness = 0.0;
  double normal_cdf_distance = 0.0;  // sup over k of |P(# <= k) - Phi((k + 1/2 - c)/s)|
};

struct DigitComparison {
  std::uint64_t a = 1, b = 0;
  unsigned j = 0;
  std::uint64_t samples = 0;
  DigitMoments reference;  // #(N)
  DigitMoments shifted;    // #(aN + b)
  double cdf_distance = 0.0;  // two-sample sup distance between the two
};

/// N uniform on [0, 2^j): exhaustive when n_samples >= 2^j, otherwise drawn
/// with Philox from `seed`. Both digit sums use the same N.
DigitComparison digit_distribution_compare(std::uint64_t a, std::uint64_t b, unsigned j,
                                           std::uint64_t n_samples, std::uint64_t seed = 1);

}  // namespace lyapdisp
