#include "gcv/covariance.hpp"

#include <cmath>

namespace gcv {

Matrix pooled_noise_covariance(const DataMatrix& data, const IntVector& labels, int k) {
  data.validate();
  data.require_complete("pooled_noise_covariance");
  const Index n = data.rows();
  const Index p = data.cols();
  if (k < 1) throw std::invalid_argument("pooled_noise_covariance: k must be >= 1");
  if (labels.size() != n)
    throw std::invalid_argument("pooled_noise_covariance: labels length != row count");
  if (n <= k)
    throw std::invalid_argument("pooled_noise_covariance: requires N > k");

  Matrix sums = Matrix::Zero(k, p);
  VectorT<Index> counts = VectorT<Index>::Zero(k);
  for (Index i = 0; i < n; ++i) {
    const int g = labels[i];
    if (g < 0 || g >= k)
      throw std::invalid_argument("pooled_noise_covariance: label out of range [0, k)");
    sums.row(g) += data.values.row(i);
    counts[g] += 1;
  }
  Matrix means(k, p);
  for (int g = 0; g < k; ++g)
    means.row(g) = counts[g] > 0 ? (sums.row(g) / double(counts[g])).eval()
                                 : Matrix::Zero(1, p);

  Matrix centered(n, p);
  for (Index i = 0; i < n; ++i)
    centered.row(i) = data.values.row(i) - means.row(labels[i]);

  Matrix sigma = (centered.transpose() * centered) / double(n - k);
  sigma = ((sigma + sigma.transpose()) * 0.5).eval();  // exact symmetry
  return sigma;
}

SymmetricEig symmetric_eig(const Matrix& m) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("symmetric_eig: matrix must be square");
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("symmetric_eig: matrix is not symmetric within 1e-10");

  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("symmetric_eig: eigensolver failed to converge");

  // Eigen sorts ascending; flip to non-increasing.
  SymmetricEig out;
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

Matrix haar_orthogonal(int p, Rng& rng) {
  if (p < 1) throw std::invalid_argument("haar_orthogonal: p must be >= 1");
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(p, p);
  for (Index i = 0; i < p; ++i)
    for (Index j = 0; j < p; ++j) g(i, j) = gauss(rng);

  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the sign convention so Q is Haar rather than QR-canonical.
  for (Index j = 0; j < p; ++j)
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  return q;
}

DataMatrix whiten_transform(const DataMatrix& data, const SymmetricEig& eig,
                            const Matrix& q, double eps) {
  data.validate();
  data.require_complete("whiten_transform");
  const Index p = data.cols();
  if (eig.eigenvalues.size() != p || eig.eigenvectors.rows() != p ||
      eig.eigenvectors.cols() != p)
    throw std::invalid_argument("whiten_transform: eigendecomposition dimension mismatch");
  if (q.rows() != p || q.cols() != p)
    throw std::invalid_argument("whiten_transform: rotation dimension mismatch");

  const double lambda_max = eig.eigenvalues.maxCoeff();
  if (!(lambda_max > 0.0))
    throw DegenerateCovariance("whiten_transform: covariance has no positive eigenvalue");

  const double floor = eps * lambda_max;
  Vector inv_sqrt = eig.eigenvalues.cwiseMax(floor).cwiseSqrt().cwiseInverse();

  DataMatrix out;
  out.values = data.values * eig.eigenvectors * inv_sqrt.asDiagonal() * q;
  out.row_ids = data.row_ids;
  return out;
}

}  // namespace gcv
