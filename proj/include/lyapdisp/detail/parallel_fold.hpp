#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>
#include <vector>

#include "lyapdisp/fold.hpp"

namespace lyapdisp::detail {

/// Neumaier compensated sum.
struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  void add(const CompensatedSum& other) {
    add(other.sum);
    add(other.comp);
  }
  double value() const { return sum + comp; }
};

inline unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Splits chi(0^q) restricted to |w| <= max_len into the words shorter than a
/// fixed depth plus one subtree per length-depth prefix, folds each part with
/// its own accumulator, and returns the accumulators in tree order. The split
/// does not depend on the thread count, so merging in order is deterministic.
template <typename Acc, typename MakeAcc, typename Visit>
std::vector<Acc> partitioned_fold(const IntegerSentinel& image, std::size_t max_len,
                                  unsigned threads, MakeAcc make_acc, Visit visit) {
  const std::size_t depth = std::min<std::size_t>(max_len, 10);
  const std::vector<BinaryWord> prefixes = partition_prefixes(image.q, depth);
  std::vector<Acc> parts;
  parts.reserve(prefixes.size() + 1);
  for (std::size_t i = 0; i <= prefixes.size(); ++i) parts.push_back(make_acc());

  auto run_part = [&](std::size_t i) {
    Acc& acc = parts[i];
    auto visitor = [&](std::span<const std::uint8_t> word, const auto& corner) {
      visit(acc, word, corner);
    };
    if (i == 0) {
      if (depth == max_len)
        fold_products(image, max_len, visitor);
      else
        fold_products(image, depth - 1, visitor);
    } else {
      if (depth == max_len) return;  // already covered by part 0
      fold_products(image, max_len, visitor, std::span<const std::uint8_t>(prefixes[i - 1].bits),
                    depth);
    }
  };

  const unsigned n = std::min<unsigned>(resolve_threads(threads),
                                        static_cast<unsigned>(parts.size()));
  if (n <= 1) {
    for (std::size_t i = 0; i < parts.size(); ++i) run_part(i);
    return parts;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < n; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= parts.size() || failed.load()) return;
        try {
          run_part(i);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return parts;
}

}  // namespace lyapdisp::detail
