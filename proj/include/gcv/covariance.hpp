#ifndef GCV_COVARIANCE_HPP
#define GCV_COVARIANCE_HPP

#include <stdexcept>

#include "gcv/data_matrix.hpp"
#include "gcv/dense.hpp"
#include "gcv/rng.hpp"

namespace gcv {

/// Thrown when a covariance estimate has no usable spectrum (all eigenvalues <= 0).
struct DegenerateCovariance : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Eigendecomposition of a symmetric matrix with eigenvalues sorted
/// non-increasing and orthonormal eigenvector columns.
struct SymmetricEig {
  Vector eigenvalues;
  Matrix eigenvectors;
};

/// Pooled within-cluster covariance with the N - k denominator:
/// (1/(N-k)) * sum_i (x_i - mean(cluster(i))) (x_i - mean(cluster(i)))^T.
/// labels take values in [0, k). Requires complete data and N > k.
Matrix pooled_noise_covariance(const DataMatrix& data, const IntVector& labels, int k);

/// Requires symmetry within 1e-10 absolute.
SymmetricEig symmetric_eig(const Matrix& m);

/// Haar-distributed p x p orthogonal matrix: QR of an i.i.d. standard normal
/// matrix with the R diagonal's signs folded into Q.
Matrix haar_orthogonal(int p, Rng& rng);

/// X * Gamma * Lambda^{-1/2} * Q with eigenvalues floored at eps * max(eigenvalue).
/// Column labels are dropped (columns lose their identity under rotation).
DataMatrix whiten_transform(const DataMatrix& data, const SymmetricEig& eig,
                            const Matrix& q, double eps = 1e-12);

}  // namespace gcv

#endif  // GCV_COVARIANCE_HPP
