#ifndef GCV_DENSE_HPP
#define GCV_DENSE_HPP

#include <Eigen/Dense>

namespace gcv {

template <typename Scalar>
using MatrixT = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorT = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Matrix = MatrixT<double>;
using Vector = VectorT<double>;
using IntVector = Eigen::VectorXi;
using BoolMatrix = MatrixT<bool>;
using Index = Eigen::Index;

/// Pairwise squared Euclidean distances: D(i, j) = ||points.row(i) - centers.row(j)||^2.
/// Uses the expanded form so the n x k block is a single GEMM; clamped at zero.
template <typename DPoints, typename DCenters>
MatrixT<typename DPoints::Scalar> squared_distances(
    const Eigen::MatrixBase<DPoints>& points,
    const Eigen::MatrixBase<DCenters>& centers) {
  using Mat = MatrixT<typename DPoints::Scalar>;
  Mat d = (-2.0 * (points * centers.transpose())).colwise() +
          points.rowwise().squaredNorm();
  d.rowwise() += centers.rowwise().squaredNorm().transpose();
  return d.cwiseMax(typename DPoints::Scalar(0));
}

/// Total sum of squares about the column means.
template <typename Derived>
typename Derived::Scalar total_sum_of_squares(const Eigen::MatrixBase<Derived>& x) {
  auto means = x.colwise().mean();
  return (x.rowwise() - means).squaredNorm();
}

/// Smallest pairwise row distance; +inf for a single row.
template <typename Derived>
typename Derived::Scalar min_pairwise_distance(const Eigen::MatrixBase<Derived>& rows) {
  using Scalar = typename Derived::Scalar;
  Scalar best = std::numeric_limits<Scalar>::infinity();
  for (Index i = 0; i < rows.rows(); ++i)
    for (Index j = i + 1; j < rows.rows(); ++j)
      best = std::min(best, (rows.row(i) - rows.row(j)).norm());
  return best;
}

/// Max absolute entry of (a - b); convenience for closeness checks.
template <typename DA, typename DB>
typename DA::Scalar max_abs_diff(const Eigen::MatrixBase<DA>& a,
                                 const Eigen::MatrixBase<DB>& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace gcv

#endif  // GCV_DENSE_HPP
