#pragma once

// Lyapunov exponent, dispersion and generalized Lyapunov exponent L(t) for
// random products of a family (D0, D1) with rank-one sentinel D0^q.
//
// With uniform digits and corner values c(w) = beta^T D_w alpha over
// w in chi(0^q), and P = 1 / (2^{q+1} (2^q - 1)):
//
//   lambda = P sum 2^{-|w|} ln|c(w)|
//   kappa  = P sum (q + |w|) 2^{-|w|} ln|c(w)|
//   mu     = P sum 2^{-|w|} ln^2|c(w)|
//   sigma2 = (1 + 2 (2^{2q+1} - (3+q) 2^q + 1)/(2^q - 1)) lambda^2 - 2 lambda kappa + mu
//
// and L(t) = -ln s(t) where F(s(t), t) = 1 for
//   F(s, t) = sum (s/2)^{|w|+q} |c(w)|^t.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lyapdisp/catalog.hpp"
#include "lyapdisp/wynn.hpp"

namespace lyapdisp {

struct ParallelOptions {
  unsigned threads = 0;  // 0 = hardware concurrency
};

/// Per-length slab sums (not cumulative, not prefactored).
struct MomentSlab {
  std::uint64_t words = 0;
  double lambda = 0.0;  // sum 2^{-l} ln|c|
  double kappa = 0.0;   // sum (q+l) 2^{-l} ln|c|
  double mu = 0.0;      // sum 2^{-l} ln^2|c|
};

struct MomentSeries {
  unsigned q = 1;
  std::vector<MomentSlab> slabs;  // index = word length, 0..max_len
  std::uint64_t skipped_words = 0;  // corner exactly zero

  std::size_t max_len() const { return slabs.empty() ? 0 : slabs.size() - 1; }
  /// Prefactored cumulative sums through each length.
  std::vector<double> cumulative_lambda() const;
  std::vector<double> cumulative_kappa() const;
  std::vector<double> cumulative_mu() const;
};

/// 1 / (2^{q+1} (2^q - 1)), exact.
Rational moment_prefactor(unsigned q);
/// 1 + 2 (2^{2q+1} - (3+q) 2^q + 1) / (2^q - 1), exact.
Rational sigma2_prefactor(unsigned q);

MomentSeries accumulate_moments(const SentinelFactorization& fact, std::size_t max_len,
                                const ParallelOptions& par = {});
inline MomentSeries accumulate_moments(const MatrixFamily& family, std::size_t max_len,
                                       const ParallelOptions& par = {}) {
  return accumulate_moments(family.factorization(), max_len, par);
}

double sigma2_from_moments(double lambda, double kappa, double mu, unsigned q);

struct SeriesEstimate {
  double raw = 0.0;
  double accelerated = 0.0;
  double error = 0.0;
  std::size_t depth = 0;
};

struct LSample {
  double t = 0.0;
  double value = 0.0;
};

struct ExponentReport {
  std::string family;
  unsigned q = 1;
  std::size_t max_len = 0;
  bool accelerated = true;
  SeriesEstimate lambda, kappa, mu;
  double sigma2 = 0.0;
  double sigma2_error = 0.0;
  std::vector<LSample> l_samples;
  std::optional<double> replica_l1;  // e^{L(1)}
  std::optional<double> replica_l2;  // e^{L(2)}
  std::uint64_t skipped_words = 0;
  std::uint64_t words_visited = 0;
};

struct ExponentOptions {
  std::size_t max_len = 0;  // 0 = default_max_len(q)
  bool accelerate = true;
  bool replica = true;
  std::vector<double> l_samples;  // t values at which to report L(t)
  ParallelOptions parallel;
};

/// 36 for q <= 2, 30 for q >= 3.
std::size_t default_max_len(unsigned q);

SeriesEstimate accelerate(const std::vector<double>& cumulative, bool on);

ExponentReport exponents(const MatrixFamily& family, const ExponentOptions& opts = {});

/// Slab sums G_l(t) = sum_{|w| = l} |c(w)|^t for several t at once.
struct PowerSlabs {
  unsigned q = 1;
  std::vector<double> ts;
  std::vector<std::vector<double>> slabs;  // [t index][length]
  std::uint64_t skipped_words = 0;
  std::size_t max_len() const { return slabs.empty() ? 0 : slabs.front().size() - 1; }
};

PowerSlabs accumulate_power_slabs(const SentinelFactorization& fact, std::vector<double> ts,
                                  std::size_t max_len, const ParallelOptions& par = {});

struct FValue {
  double value = 0.0;       // accelerated (or raw when acceleration is off)
  double raw = 0.0;         // truncated sum
  double tail_ratio = 0.0;  // last length slab / raw total
};

/// F(s, t) from precomputed slabs, truncated at `len` (<= slabs.max_len()).
FValue F_eval(const PowerSlabs& slabs, std::size_t t_index, double s, std::size_t len,
              bool accelerate = true);
FValue F_eval(const MatrixFamily& family, double s, double t, std::size_t max_len,
              bool accelerate = true);

struct LOptions {
  double tol = 1e-12;                   // bisection tolerance in s
  std::optional<double> truncation_tol;  // default 10 * tol
  bool accelerate = true;
  std::size_t check_offset = 4;  // re-solve at max_len - check_offset
};

struct LResult {
  double value = 0.0;
  double at_check_len = 0.0;  // same computation at max_len - check_offset
  double truncation_error = 0.0;
};

/// Root s_n of the truncated F(s, t) = 1 for every truncation n; L = -ln s.
/// With acceleration the sequence -ln s_n is Wynn-extrapolated.
LResult L_from_slabs(const PowerSlabs& slabs, std::size_t t_index, std::size_t max_len,
                     const LOptions& opts = {});
double L_of_t(const MatrixFamily& family, double t, std::size_t max_len,
              const LOptions& opts = {});

/// e^{L(t)} for integer t >= 1: spectral radius of (D0^{(x)t} + D1^{(x)t}) / 2.
double replica_exponent(const MatrixFamily& family, unsigned t,
                        Eigen::Index cap = kDefaultKroneckerCap);

struct DispersionParams {
  double avg = 0.0;  // L(2)/ln 2
  double typ = 0.0;  // sigma^2/ln 2
  double typ_error = 0.0;
};

DispersionParams dispersion_params(const MatrixFamily& family, const ExponentOptions& opts = {});

/// Finite-difference derivatives of L at 0 from the F route.
struct DerivativeCheck {
  double h = 1e-3;
  double lambda_fd = 0.0;
  double sigma2_fd = 0.0;
  double lambda_fd_check = 0.0;  // same at max_len - 4
  double sigma2_fd_check = 0.0;
  double truncation_error = 0.0;  // max gap between the two depths
};

DerivativeCheck derivative_check(const MatrixFamily& family, std::size_t max_len, double h = 1e-3,
                                 const ParallelOptions& par = {});

/// F_t(1,0) / F_s(1,0) by centered differences of F; equals lambda.
double lambda_from_F(const MatrixFamily& family, std::size_t max_len, double h = 1e-4,
                     const ParallelOptions& par = {});

}  // namespace lyapdisp
