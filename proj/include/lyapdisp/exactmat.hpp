#pragma once

// Dense matrix algebra over exact rationals (GMP via Boost.Multiprecision)
// and doubles. All routines are free functions templated on the scalar so
// that the same code path serves RationalMatrix and FloatMatrix.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/eigen.hpp>
#include <Eigen/Dense>

#include "lyapdisp/error.hpp"

namespace lyapdisp {

namespace mp = boost::multiprecision;

using Integer = mp::number<mp::gmp_int, mp::et_off>;
using Rational = mp::number<mp::gmp_rational, mp::et_off>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using RowVector = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

using RationalMatrix = Matrix<Rational>;
using RationalVector = Vector<Rational>;
using FloatMatrix = Eigen::MatrixXd;

inline constexpr Eigen::Index kDefaultKroneckerCap = 4096;

/// Parses "p", "-p" or "p/q" into a reduced rational. Throws ParseError.
Rational parse_rational(std::string_view text);
std::string format_rational(const Rational& r);

inline double to_double(const Rational& r) { return r.convert_to<double>(); }
inline double to_double(double x) { return x; }

FloatMatrix to_float(const RationalMatrix& a);

template <typename Scalar>
Matrix<Scalar> identity(Eigen::Index dim) {
  Matrix<Scalar> out(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) out(i, j) = Scalar(i == j ? 1 : 0);
  return out;
}

template <typename Scalar>
Matrix<Scalar> elementary(Eigen::Index dim, Eigen::Index row, Eigen::Index col) {
  Matrix<Scalar> out = Matrix<Scalar>::Zero(dim, dim);
  out(row, col) = Scalar(1);
  return out;
}

template <typename Scalar>
Matrix<Scalar> mat_mul(const Matrix<Scalar>& a, const Matrix<Scalar>& b) {
  if (a.cols() != b.rows())
    throw Error(Errc::DimensionMismatch, "mat_mul: " + std::to_string(a.rows()) + "x" +
                                             std::to_string(a.cols()) + " times " +
                                             std::to_string(b.rows()) + "x" +
                                             std::to_string(b.cols()));
  return a * b;
}

template <typename Scalar>
Matrix<Scalar> mat_pow(const Matrix<Scalar>& a, unsigned k) {
  if (a.rows() != a.cols()) throw Error(Errc::DimensionMismatch, "mat_pow: matrix not square");
  Matrix<Scalar> result = identity<Scalar>(a.rows());
  Matrix<Scalar> base = a;
  while (k > 0) {
    if (k & 1u) result = result * base;
    k >>= 1u;
    if (k > 0) base = base * base;
  }
  return result;
}

/// Block (i,j) of the result is a(i,j) * b.
template <typename Scalar>
Matrix<Scalar> kronecker(const Matrix<Scalar>& a, const Matrix<Scalar>& b,
                         Eigen::Index cap = kDefaultKroneckerCap) {
  const Eigen::Index rows = a.rows() * b.rows();
  const Eigen::Index cols = a.cols() * b.cols();
  if (rows > cap || cols > cap)
    throw Error(Errc::DimensionCap, "kronecker: result dimension " + std::to_string(rows) +
                                        " exceeds cap " + std::to_string(cap));
  Matrix<Scalar> out(rows, cols);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

template <typename Scalar>
Matrix<Scalar> kronecker_power(const Matrix<Scalar>& a, unsigned t,
                               Eigen::Index cap = kDefaultKroneckerCap) {
  if (t == 0) return identity<Scalar>(1);
  Matrix<Scalar> out = a;
  for (unsigned i = 1; i < t; ++i) out = kronecker(out, a, cap);
  return out;
}

template <typename Scalar>
struct RankOneFactors {
  Vector<Scalar> alpha;
  Vector<Scalar> beta;
};

/// Factors a = alpha * beta^T exactly. alpha is the first nonzero column of a,
/// scaled so that its first nonzero entry is 1; beta is the matching row.
template <typename Scalar>
RankOneFactors<Scalar> rank_one_factor(const Matrix<Scalar>& a) {
  Eigen::Index pr = -1, pc = -1;
  for (Eigen::Index j = 0; j < a.cols() && pc < 0; ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i)
      if (a(i, j) != Scalar(0)) {
        pr = i;
        pc = j;
        break;
      }
  if (pc < 0) throw Error(Errc::ZeroMatrix, "rank_one_factor: matrix is zero");

  const Scalar pivot = a(pr, pc);
  RankOneFactors<Scalar> f;
  f.alpha = a.col(pc) / pivot;
  f.beta = a.row(pr).transpose();
  // Every 2x2 minor through the pivot must vanish.
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (a(i, j) * pivot != a(i, pc) * a(pr, j))
        throw Error(Errc::RankNotOne, "rank_one_factor: nonzero 2x2 minor at (" +
                                          std::to_string(i) + "," + std::to_string(j) + ")");
  return f;
}

/// Gauss-Jordan inverse with exact pivot tests (first nonzero pivot).
template <typename Scalar>
Matrix<Scalar> mat_inverse(const Matrix<Scalar>& a) {
  if (a.rows() != a.cols()) throw Error(Errc::DimensionMismatch, "mat_inverse: not square");
  const Eigen::Index n = a.rows();
  Matrix<Scalar> work = a;
  Matrix<Scalar> inv = identity<Scalar>(n);
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index p = c;
    while (p < n && work(p, c) == Scalar(0)) ++p;
    if (p == n) throw Error(Errc::Singular, "mat_inverse: matrix is singular");
    if (p != c) {
      work.row(p).swap(work.row(c));
      inv.row(p).swap(inv.row(c));
    }
    const Scalar piv = work(c, c);
    work.row(c) /= piv;
    inv.row(c) /= piv;
    for (Eigen::Index r = 0; r < n; ++r) {
      if (r == c || work(r, c) == Scalar(0)) continue;
      const Scalar f = work(r, c);
      work.row(r) -= f * work.row(c);
      inv.row(r) -= f * inv.row(c);
    }
  }
  return inv;
}

template <typename Scalar>
Eigen::Index exact_rank(Matrix<Scalar> work) {
  Eigen::Index rank = 0;
  for (Eigen::Index c = 0; c < work.cols() && rank < work.rows(); ++c) {
    Eigen::Index p = rank;
    while (p < work.rows() && work(p, c) == Scalar(0)) ++p;
    if (p == work.rows()) continue;
    work.row(p).swap(work.row(rank));
    for (Eigen::Index r = rank + 1; r < work.rows(); ++r) {
      if (work(r, c) == Scalar(0)) continue;
      const Scalar f = work(r, c) / work(rank, c);
      work.row(r) -= f * work.row(rank);
    }
    ++rank;
  }
  return rank;
}

/// Reduced row echelon form in place; returns the pivot column of each pivot row.
template <typename Scalar>
std::vector<Eigen::Index> rref(Matrix<Scalar>& work) {
  std::vector<Eigen::Index> pivots;
  Eigen::Index row = 0;
  for (Eigen::Index c = 0; c < work.cols() && row < work.rows(); ++c) {
    Eigen::Index p = row;
    while (p < work.rows() && work(p, c) == Scalar(0)) ++p;
    if (p == work.rows()) continue;
    work.row(p).swap(work.row(row));
    work.row(row) /= Scalar(work(row, c));
    for (Eigen::Index r = 0; r < work.rows(); ++r) {
      if (r == row || work(r, c) == Scalar(0)) continue;
      const Scalar f = work(r, c);
      work.row(r) -= f * work.row(row);
    }
    pivots.push_back(c);
    ++row;
  }
  return pivots;
}

/// Columns span the right null space of `a`, one unit free variable each.
template <typename Scalar>
Matrix<Scalar> null_space(const Matrix<Scalar>& a) {
  Matrix<Scalar> work = a;
  const auto pivots = rref(work);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto c : pivots) is_pivot[c] = true;
  Matrix<Scalar> out(a.cols(), a.cols() - static_cast<Eigen::Index>(pivots.size()));
  out.setZero();
  Eigen::Index k = 0;
  for (Eigen::Index f = 0; f < a.cols(); ++f) {
    if (is_pivot[f]) continue;
    out(f, k) = Scalar(1);
    for (std::size_t r = 0; r < pivots.size(); ++r) out(pivots[r], k) = -work(r, f);
    ++k;
  }
  return out;
}

/// A solution of a x = b, or nullopt when the system is inconsistent. When the
/// solution is not unique, nullopt as well unless `allow_free`, in which case
/// free variables are set to zero. `a` may have more rows than columns.
template <typename Scalar>
std::optional<Vector<Scalar>> solve_exact(const Matrix<Scalar>& a, const Vector<Scalar>& b,
                                          bool allow_free = false) {
  if (a.rows() != b.size()) throw Error(Errc::DimensionMismatch, "solve_exact: shape mismatch");
  Matrix<Scalar> work(a.rows(), a.cols() + 1);
  work << a, b;
  const auto pivots = rref(work);
  if (!pivots.empty() && pivots.back() == a.cols()) return std::nullopt;
  if (!allow_free && static_cast<Eigen::Index>(pivots.size()) != a.cols()) return std::nullopt;
  Vector<Scalar> x = Vector<Scalar>::Zero(a.cols());
  for (std::size_t r = 0; r < pivots.size(); ++r)
    x(pivots[r]) = work(static_cast<Eigen::Index>(r), a.cols());
  return x;
}

/// Maximum absolute row sum.
template <typename Scalar>
double inf_norm(const Matrix<Scalar>& a) {
  double best = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    double row = 0.0;
    for (Eigen::Index j = 0; j < a.cols(); ++j) row += std::abs(to_double(a(i, j)));
    best = std::max(best, row);
  }
  return best;
}

struct SpectralOptions {
  double tol = 1e-14;
  long max_iterations = 1'000'000;
};

/// Dominant eigenvalue modulus of a nonnegative matrix by power iteration
/// from the all-ones vector. Throws NonConvergence.
double spectral_radius(const FloatMatrix& a, const SpectralOptions& opts = {});

/// Horner evaluation; coefficients are highest degree first.
double poly_eval(std::span<const std::int64_t> coeffs, double x);
double poly_derivative(std::span<const std::int64_t> coeffs, double x);
/// |p(x)| / |p'(x)|: the Newton step from x, i.e. the distance to the nearby root.
double poly_root_residual(std::span<const std::int64_t> coeffs, double x);

}  // namespace lyapdisp
