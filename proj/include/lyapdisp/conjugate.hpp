#pragma once

// Rank-one sentinel D0^q = alpha beta^T and the similarity Q that moves it to
// E00. Corner values D'_w(0,0) are computed as beta^T D_w alpha with the
// original matrices, which needs neither Q nor its inverse.

#include <string>

#include "lyapdisp/exactmat.hpp"
#include "lyapdisp/words.hpp"

namespace lyapdisp {

struct SentinelFactorization {
  unsigned q = 1;
  RationalMatrix d0;
  RationalMatrix d1;
  RationalVector alpha;
  RationalVector beta;  // beta^T alpha == 1
  std::string family;

  Eigen::Index dim() const { return d0.rows(); }
};

/// Factors D0^q. Throws RankNotOne, ZeroMatrix, or NotIdempotentSimilar when
/// trace(D0^q) != 1 (no Q with Q^-1 D0^q Q = E00 exists then).
SentinelFactorization sentinel_factorization(const RationalMatrix& d0, const RationalMatrix& d1,
                                             unsigned q, std::string family = {});

Rational corner_value(const SentinelFactorization& fact, std::span<const std::uint8_t> word);
inline Rational corner_value(const SentinelFactorization& fact, const BinaryWord& w) {
  return corner_value(fact, std::span<const std::uint8_t>(w.bits));
}

/// D_w = D_{w_0} D_{w_1} ... (leftmost letter first); the empty word gives I.
RationalMatrix word_product(const RationalMatrix& d0, const RationalMatrix& d1,
                            std::span<const std::uint8_t> word);

struct ConjugationResult {
  RationalMatrix q;
  RationalMatrix q_inv;
  RationalMatrix d0_prime;
  RationalMatrix d1_prime;
};

/// Columns of the returned m x (m-1) matrix span the null space of beta^T:
/// pivot on the first nonzero coordinate of beta, unit vectors elsewhere.
RationalMatrix null_space_basis(const RationalVector& beta);

/// Q = [alpha | basis]; verifies Q^-1 D0^q Q == E00 exactly.
ConjugationResult conjugation_matrix(const SentinelFactorization& fact);
ConjugationResult conjugation_matrix(const SentinelFactorization& fact,
                                     const RationalMatrix& null_basis);

}  // namespace lyapdisp
