#pragma once

// Depth-first fold over chi(0^q) carrying the row vector beta^T D_prefix.
//
// The rational data is rescaled once to integers,
//   D_i = M_i / d_i,   alpha = a / da,   beta = b / db,
// so the corner value of w is (b M_w a) / (db da d0^{#0(w)} d1^{#1(w)}) and
// the fold itself only does integer vector-matrix products. When a bound on
// the entries fits, the integers are __int128; otherwise GMP integers.

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "lyapdisp/conjugate.hpp"

namespace lyapdisp {

struct IntegerSentinel {
  unsigned q = 1;
  Matrix<Integer> m0, m1;
  Integer d0 = 1, d1 = 1;
  Vector<Integer> a;
  Vector<Integer> b;
  Integer base_den = 1;  // db * da
  double log_base_den = 0.0, log_d0 = 0.0, log_d1 = 0.0;

  /// log2 of an upper bound on |entries| of b^T M_w for |w| <= len, and of the corner.
  double magnitude_bits(std::size_t len) const;
};

IntegerSentinel integer_image(const SentinelFactorization& fact);

using Int128 = __int128;

inline double int_to_double(Int128 v) { return static_cast<double>(v); }
inline double int_to_double(const Integer& v) { return v.convert_to<double>(); }
inline Integer int_to_integer(Int128 v) {
  const bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1u
                            : static_cast<unsigned __int128>(v);
  Integer out = static_cast<std::uint64_t>(u >> 64);
  out <<= 64;
  out += static_cast<std::uint64_t>(u);
  return neg ? Integer(-out) : out;
}
inline Integer int_to_integer(const Integer& v) { return v; }

/// Corner value handed to fold visitors: exact numerator over a denominator
/// determined by the digit counts of the word.
template <typename Int>
struct Corner {
  const Int* numerator;
  std::size_t zeros;
  std::size_t ones;
  const IntegerSentinel* scale;

  bool is_zero() const { return *numerator == 0; }
  bool is_negative() const { return *numerator < 0; }
  /// ln |corner|; -inf for zero.
  double log_abs() const {
    const double num = std::abs(int_to_double(*numerator));
    return std::log(num) - scale->log_base_den - static_cast<double>(zeros) * scale->log_d0 -
           static_cast<double>(ones) * scale->log_d1;
  }
  Rational exact() const {
    Integer den = scale->base_den;
    for (std::size_t i = 0; i < zeros; ++i) den *= scale->d0;
    for (std::size_t i = 0; i < ones; ++i) den *= scale->d1;
    return Rational(int_to_integer(*numerator), den);
  }
};

namespace detail {

template <typename Int>
struct FoldKernel {
  std::size_t m;
  unsigned q;
  std::vector<Int> m0, m1, a;  // row-major matrices
  const IntegerSentinel* scale;

  static Int convert(const Integer& v) {
    if constexpr (std::is_same_v<Int, Integer>) {
      return v;
    } else {
      // Entries of the catalog data are small; the magnitude bound checked by
      // the caller guarantees this conversion is lossless.
      Int out = 0;
      Integer absval = mp::abs(v);
      const Integer two64 = Integer(1) << 64;
      out = static_cast<Int>(static_cast<std::uint64_t>(absval >> 64)) << 64;
      out += static_cast<Int>(static_cast<std::uint64_t>(absval % two64));
      return v < 0 ? -out : out;
    }
  }

  explicit FoldKernel(const IntegerSentinel& s) : m(s.m0.rows()), q(s.q), scale(&s) {
    m0.resize(m * m);
    m1.resize(m * m);
    a.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      a[i] = convert(s.a(i));
      for (std::size_t j = 0; j < m; ++j) {
        m0[i * m + j] = convert(s.m0(i, j));
        m1[i * m + j] = convert(s.m1(i, j));
      }
    }
  }

  void step(const Int* row, const std::vector<Int>& mat, Int* out) const {
    for (std::size_t j = 0; j < m; ++j) out[j] = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (row[i] == 0) continue;
      const Int r = row[i];
      const Int* mrow = &mat[i * m];
      for (std::size_t j = 0; j < m; ++j)
        if (mrow[j] != 0) out[j] += r * mrow[j];
    }
  }

  Int dot_a(const Int* row) const {
    Int acc = 0;
    for (std::size_t i = 0; i < m; ++i) acc += row[i] * a[i];
    return acc;
  }

  template <typename Visitor>
  void run(std::span<const std::uint8_t> root, std::size_t min_len, std::size_t max_len,
           Visitor& visitor) const {
    if (root.size() > max_len) return;
    // rows[d] holds b^T M_{w[0..d)}.
    std::vector<Int> rows((max_len + 1) * m);
    std::vector<std::uint8_t> word(root.begin(), root.end());
    word.reserve(max_len);
    for (std::size_t j = 0; j < m; ++j) rows[j] = convert(scale->b(j));
    std::size_t zeros = 0, ones = 0;
    unsigned zero_run = 0;
    for (std::size_t d = 0; d < word.size(); ++d) {
      const std::uint8_t bit = word[d];
      step(&rows[d * m], bit ? m1 : m0, &rows[(d + 1) * m]);
      bit ? ++ones : ++zeros;
      zero_run = bit ? 0 : zero_run + 1;
      if (zero_run >= q) return;  // root is not a prefix of any word
    }
    dfs(word, rows, zeros, ones, zero_run, min_len, max_len, visitor);
  }

  template <typename Visitor>
  void dfs(std::vector<std::uint8_t>& word, std::vector<Int>& rows, std::size_t zeros,
           std::size_t ones, unsigned zero_run, std::size_t min_len, std::size_t max_len,
           Visitor& visitor) const {
    const std::size_t d = word.size();
    if (d >= min_len && (d == 0 || word.back() == 1)) {
      const Int corner = dot_a(&rows[d * m]);
      const Corner<Int> c{&corner, zeros, ones, scale};
      visitor(std::span<const std::uint8_t>(word), c);
    }
    if (d == max_len) return;
    if (zero_run + 1 < q) {
      step(&rows[d * m], m0, &rows[(d + 1) * m]);
      word.push_back(0);
      dfs(word, rows, zeros + 1, ones, zero_run + 1, min_len, max_len, visitor);
      word.pop_back();
    }
    step(&rows[d * m], m1, &rows[(d + 1) * m]);
    word.push_back(1);
    dfs(word, rows, zeros, ones + 1, 0, min_len, max_len, visitor);
    word.pop_back();
  }
};

inline constexpr double kInt128SafeBits = 124.0;

}  // namespace detail

enum class FoldArithmetic { Auto, Wide, Big };

/// Visits every w in chi(0^q) extending `root` with min_len <= |w| <= max_len,
/// depth-first in lexicographic order. The visitor is called as
/// visitor(std::span<const std::uint8_t> word, const Corner<Int>& corner) for
/// Int in {__int128, Integer}, so it must be generic over the corner type.

template <typename Visitor>
void fold_products(const IntegerSentinel& image, std::size_t max_len, Visitor&& visitor,
                   std::span<const std::uint8_t> root = {}, std::size_t min_len = 0,
                   FoldArithmetic arithmetic = FoldArithmetic::Auto) {
  const bool fits = image.magnitude_bits(max_len) < detail::kInt128SafeBits;
  if (arithmetic == FoldArithmetic::Wide && !fits)
    throw Error(Errc::Overflow, "corner values may exceed 128-bit integers");
  if (arithmetic == FoldArithmetic::Wide || (arithmetic == FoldArithmetic::Auto && fits)) {
    detail::FoldKernel<Int128> kernel(image);
    kernel.run(root, min_len, max_len, visitor);
  } else {
    detail::FoldKernel<Integer> kernel(image);
    kernel.run(root, min_len, max_len, visitor);
  }
}

template <typename Visitor>
void fold_products(const SentinelFactorization& fact, std::size_t max_len, Visitor&& visitor) {
  const IntegerSentinel image = integer_image(fact);
  fold_products(image, max_len, visitor);
}

}  // namespace lyapdisp
