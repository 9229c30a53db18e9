#pragma once

#include <stdexcept>
#include <string>

namespace lyapdisp {

enum class Errc {
  DimensionMismatch,
  DimensionCap,
  RankNotOne,
  ZeroMatrix,
  Singular,
  NonConvergence,
  NotIdempotentSimilar,
  DegenerateSequence,
  Overflow,
  NoBracket,
  NoRoot,
  TruncationUnstable,
  UnknownFamily,
  InvariantViolation,
  ParseError,
  DegenerateProduct,
  NoRepresentationFound,
  InvalidArgument,
};

const char* to_string(Errc code);

// Every failure the library reports carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace lyapdisp
