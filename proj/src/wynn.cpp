#include "lyapdisp/wynn.hpp"

#include <cmath>
#include <limits>

#include "lyapdisp/error.hpp"

namespace lyapdisp {

EpsilonTable::EpsilonTable(std::span<const double> partials, double guard) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  columns_.emplace_back(partials.begin(), partials.end());
  const std::vector<double> zero_column(partials.size() + 1, 0.0);  // eps_{-1}
  while (columns_.back().size() > 1) {
    const auto& prev = columns_.back();
    const auto& before = columns_.size() >= 2 ? columns_[columns_.size() - 2] : zero_column;
    std::vector<double> next(prev.size() - 1);
    bool any = false;
    for (std::size_t j = 0; j + 1 < prev.size(); ++j) {
      // Entries built from a tiny (or undefined) difference stay undefined,
      // and so does everything computed from them.
      const double diff = prev[j + 1] - prev[j];
      next[j] = std::abs(diff) >= guard ? before[j + 1] + 1.0 / diff : nan;
      if (!std::isfinite(next[j])) next[j] = nan;
      any = any || !std::isnan(next[j]);
    }
    if (!any) break;
    columns_.push_back(std::move(next));
  }
}

std::size_t EpsilonTable::deepest_even() const {
  std::size_t k = columns_.size() - 1;
  k -= k % 2;
  while (k > 0 && std::isnan(columns_[k].back())) k -= 2;
  return k;
}

WynnResult wynn_epsilon(std::span<const double> partials, double guard) {
  if (partials.size() < 3)
    throw Error(Errc::DegenerateSequence, "wynn_epsilon needs at least 3 partial sums");
  const EpsilonTable table(partials, guard);
  WynnResult r;
  r.raw = partials.back();
  r.depth = table.deepest_even();
  const auto& col = table.column(r.depth);
  r.estimate = col.back();
  if (col.size() >= 2 && !std::isnan(col[col.size() - 2])) {
    r.error_est = std::abs(col[col.size() - 1] - col[col.size() - 2]);
  } else if (r.depth >= 2) {
    r.error_est = std::abs(r.estimate - table.column(r.depth - 2).back());
  }
  return r;
}

}  // namespace lyapdisp
