#pragma once

// Words over {0,1} with no factor 0^q and rightmost digit 1 (plus the empty
// word). These index every series over a family with sentinel 0^q.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lyapdisp/error.hpp"

namespace lyapdisp {

struct BinaryWord {
  std::vector<std::uint8_t> bits;

  BinaryWord() = default;
  explicit BinaryWord(std::vector<std::uint8_t> b) : bits(std::move(b)) {}
  /// From a string of '0'/'1' characters.
  static BinaryWord parse(std::string_view text);

  std::size_t length() const noexcept { return bits.size(); }
  bool empty() const noexcept { return bits.empty(); }
  std::string str() const;

  friend bool operator==(const BinaryWord&, const BinaryWord&) = default;
  friend auto operator<=>(const BinaryWord&, const BinaryWord&) = default;
};

BinaryWord concat(const BinaryWord& a, const BinaryWord& b);
BinaryWord zeros(std::size_t n);

/// Membership in chi(0^q).
bool in_chi(std::span<const std::uint8_t> bits, unsigned q);
inline bool in_chi(const BinaryWord& w, unsigned q) { return in_chi(w.bits, q); }

namespace detail {

template <typename Fn>
void words_dfs(std::vector<std::uint8_t>& buf, std::size_t len, unsigned q, unsigned zero_run,
               Fn& fn) {
  if (buf.size() == len) {
    if (len == 0 || buf.back() == 1) fn(std::span<const std::uint8_t>(buf));
    return;
  }
  if (zero_run + 1 < q) {
    buf.push_back(0);
    words_dfs(buf, len, q, zero_run + 1, fn);
    buf.pop_back();
  }
  buf.push_back(1);
  words_dfs(buf, len, q, 0, fn);
  buf.pop_back();
}

}  // namespace detail

/// Streams the words of chi(0^q) of length `len` in lexicographic order.
template <typename Fn>
void for_each_word_of_length(unsigned q, std::size_t len, Fn&& fn) {
  if (q == 0) throw Error(Errc::InvalidArgument, "q must be >= 1");
  std::vector<std::uint8_t> buf;
  buf.reserve(len);
  detail::words_dfs(buf, len, q, 0, fn);
}

std::vector<BinaryWord> words_of_length(unsigned q, std::size_t len);

/// Compositions of len into parts 1..q; throws Overflow beyond 64 bits.
std::uint64_t word_count(unsigned q, std::size_t len);

/// Every length-`depth` prefix that can start a word of chi(0^q), in
/// lexicographic order. Used to split the word tree into independent parts.
std::vector<BinaryWord> partition_prefixes(unsigned q, std::size_t depth);

}  // namespace lyapdisp
