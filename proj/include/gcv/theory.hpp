#ifndef GCV_THEORY_HPP
#define GCV_THEORY_HPP

#include "gcv/dense.hpp"

namespace gcv {

double normal_pdf(double z);
double normal_cdf(double z);
/// Inverse of normal_cdf; rational approximation polished by Newton steps.
double normal_quantile(double p);
/// P(a < Z < b) for standard normal Z, stable in both tails.
double normal_interval_mass(double a, double b);

/// E(Z | a < Z < b) for standard normal Z; infinite endpoints allowed.
double truncated_normal_mean(double a, double b);

/// E{(Z - delta)^2 | a < Z < b}; infinite endpoints allowed.
double truncated_normal_sqdev(double delta, double a, double b);

/// Single bivariate normal cluster with correlation rho: true iff a single
/// Gabriel fold asymptotically prefers k = 1 over every k > 1 (|rho| < 1/2;
/// the boundary itself counts as "does not prefer one", mirroring the
/// smallest-k tie rule).
bool single_cluster_2d_prefers_one(double rho);

/// Symmetric two-component normal mixture with means +/-(mu_x, mu_y): true
/// iff a single Gabriel fold asymptotically prefers k = 2 over k = 1, i.e.
/// 2*phi(mu_y) + mu_y + 2*mu_y*Phi(mu_y) < 4*mu_y*Phi(mu_x).
bool two_cluster_prefers_two(double mu_x, double mu_y);

/// Joint covariance of a (predictor, response) block pair.
struct BlockCovariance {
  Matrix sxx;  // p x p
  Matrix sxy;  // p x q
  Matrix syy;  // q x q

  Matrix assembled() const;  // the full (p+q) x (p+q) symmetric matrix
};

/// General-dimension single-cluster condition: true iff
/// sqrt(lambda_1)/2 > u1' Syx Sxy u1 / sqrt(u1' Syx Sxx Sxy u1) with
/// (lambda_1, u1) the leading eigenpair of Syy. A vanishing denominator
/// makes the right side zero, so independence always prefers one cluster.
bool single_cluster_general_prefers_one(const BlockCovariance& cov);

}  // namespace gcv

#endif  // GCV_THEORY_HPP
