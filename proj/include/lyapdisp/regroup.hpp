#pragma once

// Regrouped quadrinomial products. Writing each word as 1 0^{j_0} 1 0^{j_1} ...
// turns D_z into a product of D1 D0^j, which for the quadrinomial family take
// only three distinct values (j = 0, 1, >= 2). Their lower-right 2x2 blocks are
//   E0 = alpha1 beta1^T,  E1 = M,  E2 = alpha2 beta2^T
// with weights s/2, s^2/4 and (s^3/8)/(1 - s/2). Then
//   F_ij(s, t) = sum_k r_i(s) w_M(s)^k |beta_j^T M^k alpha_i|^t
// with r_1 = s/2, r_2 = (s^3/8)/(1 - s/2), w_M = s^2/4, and L(t) = -ln s where
// s is the smallest zero of det(I - F(s, t)).

#include <array>

#include "lyapdisp/exactmat.hpp"

namespace lyapdisp {

struct RegroupedQuadrinomial {
  RationalMatrix e0, e1, e2;  // lower-right blocks of D1, D1 D0, D1 D0^2
  RationalVector alpha1, beta1, alpha2, beta2;
  /// beta_j^T M^k alpha_i = coeff[i][j] * ratio[i][j]^k, verified exactly for k <= 8.
  std::array<std::array<Rational, 2>, 2> coeff, ratio;
};

/// Builds the regrouped matrices from the built-in quadrinomial family.
RegroupedQuadrinomial regroup_quadrinomial();

/// beta_j^T M^k alpha_i for i, j in {1, 2}.
Rational regroup_corner(const RegroupedQuadrinomial& r, int i, int j, unsigned k);

/// Closed-form 2x2 matrix F(s, t); entries are +inf where a geometric sum diverges.
Eigen::Matrix2d regroup_F(const RegroupedQuadrinomial& r, double s, double t);

/// -ln of the smallest s in (0, 2) with det(I - F(s, t)) = 0. Throws NoRoot.
double quadrinomial_regroup_L(double t, double tol = 1e-15);

}  // namespace lyapdisp
