#ifndef GCV_KMEANS_HPP
#define GCV_KMEANS_HPP

#include <vector>

#include "gcv/data_matrix.hpp"
#include "gcv/dense.hpp"
#include "gcv/rng.hpp"

namespace gcv {

struct KMeansParams {
  int restarts = 10;
  int max_iter = 300;
};

/// Fitted k-means model. labels take values in [0, k); every cluster is
/// nonempty and each point is at least as close to its own center as to any
/// other (exact ties allowed). dispersion is the within-cluster sum of
/// squares of the returned (centers, labels) pair.
struct KMeansModel {
  Matrix centers;  // k x d
  IntVector labels;
  double dispersion = 0.0;

  int k() const { return static_cast<int>(centers.rows()); }
};

/// Lloyd iterations with k-means++ seeding, run `restarts` times from
/// per-restart derived streams; returns the lowest-dispersion model (ties go
/// to the earliest restart). Empty clusters are reseeded from the point
/// farthest from its assigned center. Deterministic given the rng state.
KMeansModel kmeans_fit(const Matrix& points, int k, const KMeansParams& params, Rng& rng);

/// Alternating k-means over a partially observed matrix: assignment by
/// observed-coordinate squared distance scaled by P/|observed(i)|, center
/// coordinates from entries observed in the cluster (global column mean when
/// a cluster sees none). A complete mask reduces to kmeans_fit exactly.
KMeansModel kmeans_fit_missing(const DataMatrix& data, int k, const KMeansParams& params,
                               Rng& rng);

/// Nearest-centroid classifier: LDA with equal priors and identity noise.
struct CentroidClassifier {
  Matrix class_means;  // k x p

  int k() const { return static_cast<int>(class_means.rows()); }
};

/// class_means[g] = mean of predictor rows labeled g; every class in
/// [0, k) must be represented.
CentroidClassifier classifier_fit(const Matrix& predictors, const IntVector& labels, int k);

/// Argmin over squared distance to the class means; exact floating-point
/// ties are resolved uniformly at random.
int classifier_predict(const CentroidClassifier& model, const Eigen::Ref<const Vector>& x,
                       Rng& rng);

struct DispersionPoint {
  int k = 0;
  double w = 0.0;
  bool rose = false;  // true when W_k > W_{k-1}; restarts are heuristic
};

/// W_k for k = 1..k_max.
std::vector<DispersionPoint> dispersion_curve(const Matrix& points, int k_max,
                                              const KMeansParams& params, Rng& rng);

}  // namespace gcv

#endif  // GCV_KMEANS_HPP
