#include "lyapdisp/words.hpp"

#include <algorithm>

namespace lyapdisp {

BinaryWord BinaryWord::parse(std::string_view text) {
  BinaryWord w;
  w.bits.reserve(text.size());
  for (char c : text) {
    if (c != '0' && c != '1')
      throw Error(Errc::ParseError, "binary word may contain only 0 and 1: '" +
                                        std::string(text) + "'");
    w.bits.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return w;
}

std::string BinaryWord::str() const {
  std::string s;
  s.reserve(bits.size());
  for (auto b : bits) s.push_back(b ? '1' : '0');
  return s;
}

BinaryWord concat(const BinaryWord& a, const BinaryWord& b) {
  BinaryWord out = a;
  out.bits.insert(out.bits.end(), b.bits.begin(), b.bits.end());
  return out;
}

BinaryWord zeros(std::size_t n) { return BinaryWord(std::vector<std::uint8_t>(n, 0)); }

bool in_chi(std::span<const std::uint8_t> bits, unsigned q) {
  if (bits.empty()) return true;
  if (bits.back() != 1) return false;
  unsigned run = 0;
  for (auto b : bits) {
    run = b ? 0 : run + 1;
    if (run >= q) return false;
  }
  return true;
}

std::vector<BinaryWord> words_of_length(unsigned q, std::size_t len) {
  std::vector<BinaryWord> out;
  for_each_word_of_length(q, len, [&](std::span<const std::uint8_t> w) {
    out.emplace_back(std::vector<std::uint8_t>(w.begin(), w.end()));
  });
  return out;
}

std::uint64_t word_count(unsigned q, std::size_t len) {
  if (q == 0) throw Error(Errc::InvalidArgument, "q must be >= 1");
  std::vector<std::uint64_t> c(len + 1, 0);
  c[0] = 1;
  for (std::size_t l = 1; l <= len; ++l) {
    std::uint64_t acc = 0;
    for (std::size_t i = 1; i <= std::min<std::size_t>(q, l); ++i)
      if (__builtin_add_overflow(acc, c[l - i], &acc))
        throw Error(Errc::Overflow, "word_count exceeds 64 bits at length " + std::to_string(l));
    c[l] = acc;
  }
  return c[len];
}

std::vector<BinaryWord> partition_prefixes(unsigned q, std::size_t depth) {
  if (q == 0) throw Error(Errc::InvalidArgument, "q must be >= 1");
  std::vector<BinaryWord> out;
  std::vector<std::uint8_t> buf;
  auto rec = [&](auto&& self, unsigned zero_run) -> void {
    if (buf.size() == depth) {
      out.emplace_back(buf);
      return;
    }
    if (zero_run + 1 < q) {
      buf.push_back(0);
      self(self, zero_run + 1);
      buf.pop_back();
    }
    buf.push_back(1);
    self(self, 0);
    buf.pop_back();
  };
  rec(rec, 0);
  return out;
}

}  // namespace lyapdisp
