#include "gcv/theory.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace gcv {
namespace {

constexpr double kInvSqrt2 = 0.7071067811865475244;
constexpr double kInvSqrt2Pi = 0.3989422804014326779;

double phi_or_zero(double z) {  // density, with phi(+/-inf) = 0
  if (std::isinf(z)) return 0.0;
  return kInvSqrt2Pi * std::exp(-0.5 * z * z);
}

}  // namespace

double normal_pdf(double z) { return phi_or_zero(z); }

double normal_cdf(double z) {
  if (std::isinf(z)) return z > 0 ? 1.0 : 0.0;
  return 0.5 * std::erfc(-z * kInvSqrt2);
}

double normal_interval_mass(double a, double b) {
  if (!(a < b)) throw std::invalid_argument("normal_interval_mass: requires a < b");
  // erfc keeps precision deep in the tail on whichever side dominates.
  const double fa = std::isinf(a) ? (a > 0 ? 0.0 : 2.0) : std::erfc(a * kInvSqrt2);
  const double fb = std::isinf(b) ? (b > 0 ? 0.0 : 2.0) : std::erfc(b * kInvSqrt2);
  const double ga = std::isinf(a) ? (a > 0 ? 2.0 : 0.0) : std::erfc(-a * kInvSqrt2);
  const double gb = std::isinf(b) ? (b > 0 ? 2.0 : 0.0) : std::erfc(-b * kInvSqrt2);
  const double mass = (a + b > 0.0 || std::isinf(b)) ? 0.5 * (fa - fb) : 0.5 * (gb - ga);
  return std::max(0.0, mass);
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("normal_quantile: p must be in (0, 1)");

  // Acklam's rational approximation, then two Newton polish steps.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double p_low = 0.02425;
  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  for (int i = 0; i < 2; ++i) {
    const double err = normal_cdf(x) - p;
    const double dens = normal_pdf(x);
    if (dens <= 0.0) break;
    x -= err / dens;
  }
  return x;
}

double truncated_normal_mean(double a, double b) {
  if (!(a < b)) throw std::invalid_argument("truncated_normal_mean: requires a < b");
  const double mass = normal_interval_mass(a, b);
  if (mass <= 0.0)
    throw std::domain_error("truncated_normal_mean: interval has zero probability mass");
  return -(phi_or_zero(b) - phi_or_zero(a)) / mass;
}

double truncated_normal_sqdev(double delta, double a, double b) {
  if (!(a < b)) throw std::invalid_argument("truncated_normal_sqdev: requires a < b");
  const double mass = normal_interval_mass(a, b);
  if (mass <= 0.0)
    throw std::domain_error("truncated_normal_sqdev: interval has zero probability mass");
  // (z - 2 delta) phi(z) -> 0 as z -> +/-inf.
  const double top_b = std::isinf(b) ? 0.0 : (b - 2.0 * delta) * phi_or_zero(b);
  const double top_a = std::isinf(a) ? 0.0 : (a - 2.0 * delta) * phi_or_zero(a);
  return delta * delta + 1.0 - (top_b - top_a) / mass;
}

bool single_cluster_2d_prefers_one(double rho) {
  if (!(std::abs(rho) <= 1.0))
    throw std::invalid_argument("single_cluster_2d_prefers_one: |rho| must be <= 1");
  return std::abs(rho) < 0.5;
}

bool two_cluster_prefers_two(double mu_x, double mu_y) {
  if (mu_x < 0.0 || mu_y < 0.0)
    throw std::invalid_argument("two_cluster_prefers_two: means must be >= 0");
  const double lhs =
      2.0 * normal_pdf(mu_y) + mu_y + 2.0 * mu_y * normal_cdf(mu_y);
  const double rhs = 4.0 * mu_y * normal_cdf(mu_x);
  return lhs < rhs;
}

Matrix BlockCovariance::assembled() const {
  const Index p = sxx.rows();
  const Index q = syy.rows();
  if (sxx.cols() != p || syy.cols() != q || sxy.rows() != p || sxy.cols() != q)
    throw std::invalid_argument("BlockCovariance: inconsistent block shapes");
  Matrix full(p + q, p + q);
  full.topLeftCorner(p, p) = sxx;
  full.topRightCorner(p, q) = sxy;
  full.bottomLeftCorner(q, p) = sxy.transpose();
  full.bottomRightCorner(q, q) = syy;
  return full;
}

bool single_cluster_general_prefers_one(const BlockCovariance& cov) {
  const Matrix full = cov.assembled();
  Eigen::SelfAdjointEigenSolver<Matrix> full_eig(full, Eigen::EigenvaluesOnly);
  const double scale = std::max(1.0, full_eig.eigenvalues().cwiseAbs().maxCoeff());
  if (full_eig.eigenvalues().minCoeff() < -1e-10 * scale)
    throw std::invalid_argument(
        "single_cluster_general_prefers_one: assembled covariance is not PSD");

  Eigen::SelfAdjointEigenSolver<Matrix> yy_eig(cov.syy);
  const Index last = cov.syy.rows() - 1;  // Eigen sorts ascending
  const double lambda1 = yy_eig.eigenvalues()(last);
  if (!(lambda1 > 0.0))
    throw std::invalid_argument(
        "single_cluster_general_prefers_one: Syy needs a positive leading eigenvalue");
  const Vector u1 = yy_eig.eigenvectors().col(last);

  const Vector sxy_u1 = cov.sxy * u1;            // p-vector
  const double numer = sxy_u1.squaredNorm();     // u1' Syx Sxy u1
  const double denom_sq = sxy_u1.dot(cov.sxx * sxy_u1);
  if (denom_sq <= 0.0) return true;  // uncorrelated blocks: right side is zero
  return 0.5 * std::sqrt(lambda1) > numer / std::sqrt(denom_sq);
}

}  // namespace gcv
