#include "lyapdisp/fold.hpp"

#include <algorithm>

namespace lyapdisp {

namespace {

Integer lcm_of_denominators(const RationalMatrix& a) {
  Integer l = 1;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) l = mp::lcm(l, mp::denominator(a(i, j)));
  return l;
}

Integer lcm_of_denominators(const RationalVector& v) {
  Integer l = 1;
  for (Eigen::Index i = 0; i < v.size(); ++i) l = mp::lcm(l, mp::denominator(v(i)));
  return l;
}

double log2_of(const Integer& v) {
  if (v == 0) return 0.0;
  return std::log2(mp::abs(v).convert_to<double>());
}

}  // namespace

IntegerSentinel integer_image(const SentinelFactorization& fact) {
  IntegerSentinel s;
  s.q = fact.q;
  s.d0 = lcm_of_denominators(fact.d0);
  s.d1 = lcm_of_denominators(fact.d1);
  const Integer da = lcm_of_denominators(fact.alpha);
  const Integer db = lcm_of_denominators(fact.beta);
  const Eigen::Index m = fact.dim();
  s.m0.resize(m, m);
  s.m1.resize(m, m);
  s.a.resize(m);
  s.b.resize(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    s.a(i) = mp::numerator(Rational(fact.alpha(i) * da));
    s.b(i) = mp::numerator(Rational(fact.beta(i) * db));
    for (Eigen::Index j = 0; j < m; ++j) {
      s.m0(i, j) = mp::numerator(Rational(fact.d0(i, j) * s.d0));
      s.m1(i, j) = mp::numerator(Rational(fact.d1(i, j) * s.d1));
    }
  }
  s.base_den = da * db;
  s.log_base_den = std::log(s.base_den.convert_to<double>());
  s.log_d0 = std::log(s.d0.convert_to<double>());
  s.log_d1 = std::log(s.d1.convert_to<double>());
  return s;
}

double IntegerSentinel::magnitude_bits(std::size_t len) const {
  auto row_norm = [](const Matrix<Integer>& mat) {
    Integer best = 0;
    for (Eigen::Index i = 0; i < mat.rows(); ++i) {
      Integer row = 0;
      for (Eigen::Index j = 0; j < mat.cols(); ++j) row += mp::abs(mat(i, j));
      best = std::max(best, row);
    }
    return best;
  };
  Integer b1 = 0, amax = 0;
  for (Eigen::Index i = 0; i < b.size(); ++i) {
    b1 += mp::abs(b(i));
    amax = std::max(amax, Integer(mp::abs(a(i))));
  }
  const double growth = std::max(1.0, log2_of(std::max(row_norm(m0), row_norm(m1))));
  return log2_of(b1) + 1.0 + static_cast<double>(len) * growth + log2_of(amax) + 1.0 +
         std::log2(static_cast<double>(a.size()));
}

}  // namespace lyapdisp
