#include "lyapdisp/regroup.hpp"

#include <cmath>
#include <limits>

#include "lyapdisp/catalog.hpp"

namespace lyapdisp {

namespace {

RationalMatrix lower_right(const RationalMatrix& a) { return a.bottomRightCorner(2, 2); }

Rational corner_of(const RationalMatrix& m, const RationalVector& alpha,
                   const RationalVector& beta, unsigned k) {
  const RationalVector v = mat_pow(m, k) * alpha;
  return beta.dot(v);
}

double weight_r(int i, double s) {
  const double z = s / 2.0;
  return i == 0 ? z : z * z * z / (1.0 - z);
}

}  // namespace

RegroupedQuadrinomial regroup_quadrinomial() {
  const MatrixFamily fam = get_family("quadrinomial");
  RegroupedQuadrinomial r;
  const RationalMatrix d10 = mat_mul(fam.d1, fam.d0);
  r.e0 = lower_right(fam.d1);
  r.e1 = lower_right(d10);
  const RationalMatrix d100 = mat_mul(d10, fam.d0);
  r.e2 = lower_right(d100);
  // The top rows of all three products vanish, so the blocks carry everything.
  for (const RationalMatrix* full : {&fam.d1, &d10, &d100}) {
    for (Eigen::Index c = 0; c < 3; ++c)
      if ((*full)(0, c) != 0)
        throw Error(Errc::InvariantViolation, "regrouped product has a nonzero first row");
  }
  const auto f0 = rank_one_factor(r.e0);
  const auto f2 = rank_one_factor(r.e2);
  r.alpha1 = f0.alpha;
  r.beta1 = f0.beta;
  r.alpha2 = f2.alpha;
  r.beta2 = f2.beta;

  const RationalVector* alphas[2] = {&r.alpha1, &r.alpha2};
  const RationalVector* betas[2] = {&r.beta1, &r.beta2};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const Rational c0 = corner_of(r.e1, *alphas[i], *betas[j], 0);
      const Rational c1 = corner_of(r.e1, *alphas[i], *betas[j], 1);
      if (c0 == 0) throw Error(Errc::InvariantViolation, "regrouped corner is zero");
      r.coeff[i][j] = c0;
      r.ratio[i][j] = c1 / c0;
      Rational expect = c0;
      for (unsigned k = 0; k <= 8; ++k) {
        if (corner_of(r.e1, *alphas[i], *betas[j], k) != expect)
          throw Error(Errc::InvariantViolation, "regrouped corners are not geometric in k");
        expect *= r.ratio[i][j];
      }
    }
  }
  return r;
}

Rational regroup_corner(const RegroupedQuadrinomial& r, int i, int j, unsigned k) {
  if (i < 1 || i > 2 || j < 1 || j > 2)
    throw Error(Errc::InvalidArgument, "regroup indices must be 1 or 2");
  return corner_of(r.e1, i == 1 ? r.alpha1 : r.alpha2, j == 1 ? r.beta1 : r.beta2, k);
}

Eigen::Matrix2d regroup_F(const RegroupedQuadrinomial& r, double s, double t) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  const double z = s / 2.0;
  const double w_m = z * z;
  Eigen::Matrix2d f;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const double c = std::pow(std::abs(to_double(r.coeff[i][j])), t);
      const double rho = std::pow(std::abs(to_double(r.ratio[i][j])), t);
      const double denom = 1.0 - w_m * rho;
      const double ri = weight_r(i, s);
      f(i, j) = (denom > 0.0 && z < 1.0) ? ri * c / denom : inf;
    }
  }
  return f;
}

double quadrinomial_regroup_L(double t, double tol) {
  static const RegroupedQuadrinomial r = regroup_quadrinomial();
  auto g = [&](double s) {
    const Eigen::Matrix2d f = regroup_F(r, s, t);
    if (!f.allFinite()) return std::numeric_limits<double>::quiet_NaN();
    return (Eigen::Matrix2d::Identity() - f).determinant();
  };
  // det(I - F) -> 1 as s -> 0; scan upward for the first sign change before
  // any geometric sum diverges, then bisect.
  constexpr int kSteps = 4000;
  double prev_s = 0.0;
  for (int n = 1; n < kSteps; ++n) {
    const double s = 2.0 * n / kSteps;
    const double v = g(s);
    if (std::isnan(v)) break;
    if (v <= 0.0) {
      double lo = prev_s, hi = s;
      while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (g(mid) > 0.0 ? lo : hi) = mid;
      }
      return -std::log(0.5 * (lo + hi));
    }
    prev_s = s;
  }
  throw Error(Errc::NoRoot, "det(I - F(s, t)) has no zero in (0, 2) for t = " + std::to_string(t));
}

}  // namespace lyapdisp
