#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lyapdisp {

/// Wynn epsilon table seeded with partial sums S_0..S_{n-1}:
///   eps_{-1}^{(j)} = 0,  eps_0^{(j)} = S_j,
///   eps_{k+1}^{(j)} = eps_{k-1}^{(j+1)} + 1 / (eps_k^{(j+1)} - eps_k^{(j)}).
/// Even columns are the extrapolants.
class EpsilonTable {
 public:
  explicit EpsilonTable(std::span<const double> partials, double guard = 1e-300);

  /// Number of columns built (column 0 is the input). Entries that would
  /// divide by a difference below the guard are NaN.
  std::size_t columns() const { return columns_.size(); }
  const std::vector<double>& column(std::size_t k) const { return columns_.at(k); }
  /// Deepest even column whose last entry is defined.
  std::size_t deepest_even() const;

 private:
  std::vector<std::vector<double>> columns_;
};

struct WynnResult {
  double estimate = 0.0;
  double error_est = 0.0;
  std::size_t depth = 0;  // even column the estimate came from
  double raw = 0.0;       // last partial sum
};

/// Deepest even-column entry whose construction never divided by a
/// difference below `guard`. The error estimate is the gap between the last
/// two entries of that column (or, if it has one entry, the gap to the last
/// entry of the previous even column). Throws DegenerateSequence for < 3 terms.
WynnResult wynn_epsilon(std::span<const double> partials, double guard = 1e-300);

}  // namespace lyapdisp
