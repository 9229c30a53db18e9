#include "lyapdisp/conjugate.hpp"

namespace lyapdisp {

SentinelFactorization sentinel_factorization(const RationalMatrix& d0, const RationalMatrix& d1,
                                             unsigned q, std::string family) {
  if (q == 0) throw Error(Errc::InvalidArgument, "sentinel power q must be >= 1");
  if (d0.rows() != d0.cols() || d1.rows() != d1.cols() || d0.rows() != d1.rows())
    throw Error(Errc::DimensionMismatch, "D0 and D1 must be square of equal size");

  const RationalMatrix sentinel = mat_pow(d0, q);
  auto factors = rank_one_factor(sentinel);
  const Rational trace = sentinel.trace();
  if (trace != 1)
    throw Error(Errc::NotIdempotentSimilar,
                "trace(D0^q) = " + format_rational(trace) + ", must be 1");

  SentinelFactorization f;
  f.q = q;
  f.d0 = d0;
  f.d1 = d1;
  f.alpha = std::move(factors.alpha);
  f.beta = factors.beta / trace;
  f.family = std::move(family);
  return f;
}

RationalMatrix word_product(const RationalMatrix& d0, const RationalMatrix& d1,
                            std::span<const std::uint8_t> word) {
  RationalMatrix p = identity<Rational>(d0.rows());
  for (auto b : word) p = p * (b ? d1 : d0);
  return p;
}

Rational corner_value(const SentinelFactorization& fact, std::span<const std::uint8_t> word) {
  RowVector<Rational> row = fact.beta.transpose();
  for (auto b : word) row = row * (b ? fact.d1 : fact.d0);
  return row.dot(fact.alpha);
}

RationalMatrix null_space_basis(const RationalVector& beta) {
  const Eigen::Index m = beta.size();
  Eigen::Index pivot = 0;
  while (pivot < m && beta(pivot) == 0) ++pivot;
  if (pivot == m) throw Error(Errc::ZeroMatrix, "null_space_basis: beta is zero");
  RationalMatrix basis = RationalMatrix::Zero(m, m - 1);
  Eigen::Index col = 0;
  for (Eigen::Index j = 0; j < m; ++j) {
    if (j == pivot) continue;
    basis(j, col) = 1;
    basis(pivot, col) = -beta(j) / beta(pivot);
    ++col;
  }
  return basis;
}

ConjugationResult conjugation_matrix(const SentinelFactorization& fact) {
  return conjugation_matrix(fact, null_space_basis(fact.beta));
}

ConjugationResult conjugation_matrix(const SentinelFactorization& fact,
                                     const RationalMatrix& null_basis) {
  const Eigen::Index m = fact.dim();
  if (null_basis.rows() != m || null_basis.cols() != m - 1)
    throw Error(Errc::DimensionMismatch, "null-space basis must be m x (m-1)");
  if (!(fact.beta.transpose() * null_basis).isZero())
    throw Error(Errc::InvalidArgument, "basis columns are not orthogonal to beta");

  ConjugationResult r;
  r.q.resize(m, m);
  r.q.col(0) = fact.alpha;
  r.q.rightCols(m - 1) = null_basis;
  r.q_inv = mat_inverse(r.q);  // Singular cannot happen when beta^T alpha = 1
  r.d0_prime = r.q_inv * fact.d0 * r.q;
  r.d1_prime = r.q_inv * fact.d1 * r.q;

  const RationalMatrix sentinel = r.q_inv * mat_pow(fact.d0, fact.q) * r.q;
  if (sentinel != elementary<Rational>(m, 0, 0))
    throw Error(Errc::InvariantViolation, "Q^-1 D0^q Q is not E00");
  return r;
}

}  // namespace lyapdisp
