#pragma once

// Monte Carlo estimates of lambda, sigma^2 and L(t) from random products of
// length k with i.i.d. uniform digits.

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "lyapdisp/catalog.hpp"

namespace lyapdisp {

/// Philox4x32-10 counter-based generator. Each (key, counter) pair maps to
/// four independent 32-bit words, so streams can be addressed directly.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;
  using result_type = std::uint32_t;

  static Counter block(Counter ctr, Key key);

  /// Stream keyed by `seed`, with counter words 2 and 3 fixed to `stream`.
  Philox4x32(std::uint64_t seed, std::uint64_t stream);

  result_type operator()();
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

 private:
  Key key_;
  Counter ctr_;
  Counter buf_{};
  unsigned used_ = 4;
};

struct SimConfig {
  MatrixFamily family;
  std::size_t k = 64;
  std::uint64_t trials = 10000;
  std::uint64_t seed = 1;
  unsigned threads = 0;  // 0 = hardware concurrency
  bool keep_log_norms = false;
};

struct SimResult {
  std::size_t k = 0;
  std::uint64_t trials = 0;
  std::uint64_t degenerate = 0;  // products that became exactly zero, excluded
  double mean = 0.0;             // of ln ||D_z||_inf
  double variance = 0.0;         // unbiased
  double lambda_hat = 0.0;
  double lambda_se = 0.0;
  double sigma2_hat = 0.0;
  double sigma2_se = 0.0;
  std::optional<double> t;
  double growth = 0.0;  // (1/k) ln of the sample mean of ||D_z||^t
  double growth_se = 0.0;
  std::vector<double> log_norms;  // per trial, in trial order, when kept (NaN if degenerate)
};

/// ln ||D_z||_inf for the digits z, rescaling by the norm whenever it leaves
/// [2^-100, 2^100]. Returns -inf for an exactly zero product.
double log_norm_product(const FloatMatrix& d0, const FloatMatrix& d1,
                        const std::vector<std::uint8_t>& digits);

/// Digits of trial `index` for a given seed.
std::vector<std::uint8_t> trial_digits(std::uint64_t seed, std::uint64_t index, std::size_t k);

SimResult simulate(const SimConfig& config);
/// Also fills t, growth and a bootstrap standard error; requires |t| <= 4.
SimResult simulate_moment(const SimConfig& config, double t, unsigned bootstrap = 200);

}  // namespace lyapdisp
