#include "gcv/kmeans.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace gcv {
namespace {

Matrix plus_plus_seeds(const Matrix& points, int k, Rng& rng) {
  const Index n = points.rows();
  std::uniform_int_distribution<Index> any_row(0, n - 1);
  Matrix centers(k, points.cols());
  centers.row(0) = points.row(any_row(rng));
  Vector d2 = (points.rowwise() - centers.row(0)).rowwise().squaredNorm();
  for (int j = 1; j < k; ++j) {
    const double total = d2.sum();
    Index pick;
    if (total > 0.0) {
      std::uniform_real_distribution<double> u(0.0, total);
      const double target = u(rng);
      double cum = 0.0;
      pick = n - 1;
      for (Index i = 0; i < n; ++i) {
        cum += d2[i];
        if (cum >= target) {
          pick = i;
          break;
        }
      }
    } else {
      pick = any_row(rng);  // all points coincide with a chosen center
    }
    centers.row(j) = points.row(pick);
    d2 = d2.cwiseMin((points.rowwise() - centers.row(j)).rowwise().squaredNorm());
  }
  return centers;
}

// Assignment against fixed centers. Ties keep the previous label when it is
// among the minimizers (otherwise lowest index); without stickiness the
// duplicated-point regimes oscillate between equal-distance clusters.
void assign(const Matrix& d2, const IntVector* prev, IntVector& labels, Vector& dist) {
  const Index n = d2.rows();
  const int k = static_cast<int>(d2.cols());
  labels.resize(n);
  dist.resize(n);
  for (Index i = 0; i < n; ++i) {
    int best = 0;
    double bd = d2(i, 0);
    for (int g = 1; g < k; ++g)
      if (d2(i, g) < bd) {
        bd = d2(i, g);
        best = g;
      }
    if (prev) {
      const int pg = (*prev)[i];
      if (pg >= 0 && pg < k && d2(i, pg) == bd) best = pg;
    }
    labels[i] = best;
    dist[i] = bd;
  }
}

// Reseed each empty cluster from the point farthest from its assigned center,
// drawn from a cluster that can spare a member. Returns true if anything moved.
bool repair_empty(const Matrix& points, Matrix& centers, IntVector& labels, Vector& dist) {
  const Index n = points.rows();
  const int k = static_cast<int>(centers.rows());
  std::vector<Index> count(k, 0);
  for (Index i = 0; i < n; ++i) count[labels[i]]++;

  bool repaired = false;
  for (int g = 0; g < k; ++g) {
    if (count[g] > 0) continue;
    Index donor = -1;
    double farthest = -1.0;
    for (Index i = 0; i < n; ++i)
      if (count[labels[i]] >= 2 && dist[i] > farthest) {
        farthest = dist[i];
        donor = i;
      }
    if (donor < 0)
      throw std::runtime_error("kmeans: cannot repair empty cluster (n < k?)");
    count[labels[donor]]--;
    labels[donor] = g;
    count[g] = 1;
    centers.row(g) = points.row(donor);
    dist[donor] = 0.0;
    repaired = true;
  }
  return repaired;
}

KMeansModel lloyd_once(const Matrix& points, int k, int max_iter, Rng& rng) {
  const Index n = points.rows();
  Matrix centers = plus_plus_seeds(points, k, rng);
  IntVector labels, prev;
  Vector dist;
  bool have_prev = false;

  for (int iter = 0; iter < max_iter; ++iter) {
    Matrix d2 = squared_distances(points, centers);
    assign(d2, have_prev ? &prev : nullptr, labels, dist);
    const bool repaired = repair_empty(points, centers, labels, dist);
    if (!repaired && have_prev && labels == prev) break;
    prev = labels;
    have_prev = true;

    Matrix sums = Matrix::Zero(k, points.cols());
    IntVector count = IntVector::Zero(k);
    for (Index i = 0; i < n; ++i) {
      sums.row(labels[i]) += points.row(i);
      count[labels[i]] += 1;
    }
    for (int g = 0; g < k; ++g) centers.row(g) = sums.row(g) / double(count[g]);
  }

  // A repair in the final iteration can leave stale assignments against the
  // reseeded center; settle them.
  for (int extra = 0; extra <= k; ++extra) {
    Matrix d2 = squared_distances(points, centers);
    assign(d2, &labels, labels, dist);
    if (!repair_empty(points, centers, labels, dist)) break;
  }

  KMeansModel model;
  model.centers = std::move(centers);
  model.labels = labels;
  model.dispersion = dist.sum();
  return model;
}

void check_fit_args(Index n, int k, const KMeansParams& params) {
  if (k < 1) throw std::invalid_argument("kmeans: k must be >= 1");
  if (n < k) throw std::invalid_argument("kmeans: need at least k points");
  if (params.restarts < 1) throw std::invalid_argument("kmeans: restarts must be >= 1");
  if (params.max_iter < 1) throw std::invalid_argument("kmeans: max_iter must be >= 1");
}

}  // namespace

KMeansModel kmeans_fit(const Matrix& points, int k, const KMeansParams& params, Rng& rng) {
  check_fit_args(points.rows(), k, params);
  const std::uint64_t base = rng();
  KMeansModel best;
  for (int r = 0; r < params.restarts; ++r) {
    Rng sub = derive_rng(base, r);
    KMeansModel model = lloyd_once(points, k, params.max_iter, sub);
    if (r == 0 || model.dispersion < best.dispersion) best = std::move(model);
  }
  return best;
}

CentroidClassifier classifier_fit(const Matrix& predictors, const IntVector& labels, int k) {
  if (k < 1) throw std::invalid_argument("classifier_fit: k must be >= 1");
  if (labels.size() != predictors.rows())
    throw std::invalid_argument("classifier_fit: labels length != row count");
  Matrix sums = Matrix::Zero(k, predictors.cols());
  IntVector count = IntVector::Zero(k);
  for (Index i = 0; i < predictors.rows(); ++i) {
    const int g = labels[i];
    if (g < 0 || g >= k)
      throw std::invalid_argument("classifier_fit: label out of range [0, k)");
    sums.row(g) += predictors.row(i);
    count[g] += 1;
  }
  CentroidClassifier model;
  model.class_means.resize(k, predictors.cols());
  for (int g = 0; g < k; ++g) {
    if (count[g] == 0)
      throw std::invalid_argument("classifier_fit: class with no training rows");
    model.class_means.row(g) = sums.row(g) / double(count[g]);
  }
  return model;
}

int classifier_predict(const CentroidClassifier& model, const Eigen::Ref<const Vector>& x,
                       Rng& rng) {
  if (x.size() != model.class_means.cols())
    throw std::invalid_argument("classifier_predict: dimension mismatch");
  Vector d2 = (model.class_means.rowwise() - x.transpose()).rowwise().squaredNorm();
  const double best = d2.minCoeff();
  int tied = 0;
  for (Index g = 0; g < d2.size(); ++g)
    if (d2[g] == best) tied++;
  if (tied == 1) {
    for (Index g = 0; g < d2.size(); ++g)
      if (d2[g] == best) return static_cast<int>(g);
  }
  std::uniform_int_distribution<int> pick(0, tied - 1);
  int target = pick(rng);
  for (Index g = 0; g < d2.size(); ++g)
    if (d2[g] == best && target-- == 0) return static_cast<int>(g);
  return 0;  // unreachable
}

std::vector<DispersionPoint> dispersion_curve(const Matrix& points, int k_max,
                                              const KMeansParams& params, Rng& rng) {
  if (k_max < 1 || k_max > points.rows())
    throw std::invalid_argument("dispersion_curve: need 1 <= k_max <= n");
  const std::uint64_t base = rng();
  std::vector<DispersionPoint> curve;
  curve.reserve(k_max);
  for (int k = 1; k <= k_max; ++k) {
    Rng sub = derive_rng(base, k);
    KMeansModel model = kmeans_fit(points, k, params, sub);
    DispersionPoint pt;
    pt.k = k;
    pt.w = model.dispersion;
    pt.rose = !curve.empty() && model.dispersion > curve.back().w;
    curve.push_back(pt);
  }
  return curve;
}

namespace {

struct MaskedData {
  const Matrix& x;
  const BoolMatrix& mask;
  std::vector<std::vector<Index>> row_obs;  // observed column indices per row
  Vector col_means;                         // over observed entries
  double p;                                 // total columns, for the distance scale

  explicit MaskedData(const DataMatrix& data) : x(data.values), mask(*data.mask) {
    const Index n = x.rows();
    const Index cols = x.cols();
    p = double(cols);
    row_obs.resize(n);
    col_means = Vector::Zero(cols);
    VectorT<Index> col_count = VectorT<Index>::Zero(cols);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < cols; ++j)
        if (mask(i, j)) {
          row_obs[i].push_back(j);
          col_means[j] += x(i, j);
          col_count[j] += 1;
        }
    for (Index i = 0; i < n; ++i)
      if (row_obs[i].empty())
        throw std::invalid_argument("kmeans_fit_missing: row with no observed entries");
    for (Index j = 0; j < cols; ++j) {
      if (col_count[j] == 0)
        throw std::invalid_argument("kmeans_fit_missing: column with no observed entries");
      col_means[j] /= double(col_count[j]);
    }
  }

  // Squared distance over row i's observed coordinates, scaled by P/|observed(i)|.
  double scaled_d2(Index i, const Matrix& centers, int g) const {
    double d = 0.0;
    for (Index j : row_obs[i]) {
      const double diff = x(i, j) - centers(g, j);
      d += diff * diff;
    }
    return d * (p / double(row_obs[i].size()));
  }
};

void masked_assign(const MaskedData& md, const Matrix& centers, const IntVector* prev,
                   IntVector& labels, Vector& dist) {
  const Index n = md.x.rows();
  const int k = static_cast<int>(centers.rows());
  labels.resize(n);
  dist.resize(n);
  for (Index i = 0; i < n; ++i) {
    int best = 0;
    double bd = md.scaled_d2(i, centers, 0);
    for (int g = 1; g < k; ++g) {
      const double d = md.scaled_d2(i, centers, g);
      if (d < bd) {
        bd = d;
        best = g;
      }
    }
    if (prev) {
      const int pg = (*prev)[i];
      if (pg >= 0 && pg < k && md.scaled_d2(i, centers, pg) == bd) best = pg;
    }
    labels[i] = best;
    dist[i] = bd;
  }
}

bool masked_repair(const MaskedData& md, Matrix& centers, IntVector& labels, Vector& dist) {
  const Index n = md.x.rows();
  const int k = static_cast<int>(centers.rows());
  std::vector<Index> count(k, 0);
  for (Index i = 0; i < n; ++i) count[labels[i]]++;

  bool repaired = false;
  for (int g = 0; g < k; ++g) {
    if (count[g] > 0) continue;
    Index donor = -1;
    double farthest = -1.0;
    for (Index i = 0; i < n; ++i)
      if (count[labels[i]] >= 2 && dist[i] > farthest) {
        farthest = dist[i];
        donor = i;
      }
    if (donor < 0)
      throw std::runtime_error("kmeans_fit_missing: cannot repair empty cluster");
    count[labels[donor]]--;
    labels[donor] = g;
    count[g] = 1;
    // Center = donor's observed values, column means elsewhere.
    centers.row(g) = md.col_means.transpose();
    for (Index j : md.row_obs[donor]) centers(g, j) = md.x(donor, j);
    dist[donor] = 0.0;
    repaired = true;
  }
  return repaired;
}

void masked_update(const MaskedData& md, const IntVector& labels, Matrix& centers) {
  const Index n = md.x.rows();
  const int k = static_cast<int>(centers.rows());
  const Index cols = md.x.cols();
  Matrix sums = Matrix::Zero(k, cols);
  MatrixT<Index> count = MatrixT<Index>::Zero(k, cols);
  for (Index i = 0; i < n; ++i)
    for (Index j : md.row_obs[i]) {
      sums(labels[i], j) += md.x(i, j);
      count(labels[i], j) += 1;
    }
  for (int g = 0; g < k; ++g)
    for (Index j = 0; j < cols; ++j)
      centers(g, j) = count(g, j) > 0 ? sums(g, j) / double(count(g, j)) : md.col_means[j];
}

KMeansModel masked_lloyd_once(const MaskedData& md, int k, int max_iter, Rng& rng) {
  // Seed on the column-mean-imputed matrix, then iterate on observed entries.
  Matrix imputed = md.x;
  for (Index i = 0; i < imputed.rows(); ++i)
    for (Index j = 0; j < imputed.cols(); ++j)
      if (!md.mask(i, j)) imputed(i, j) = md.col_means[j];
  Matrix centers = plus_plus_seeds(imputed, k, rng);

  IntVector labels, prev;
  Vector dist;
  bool have_prev = false;
  for (int iter = 0; iter < max_iter; ++iter) {
    masked_assign(md, centers, have_prev ? &prev : nullptr, labels, dist);
    const bool repaired = masked_repair(md, centers, labels, dist);
    if (!repaired && have_prev && labels == prev) break;
    prev = labels;
    have_prev = true;
    masked_update(md, labels, centers);
  }
  for (int extra = 0; extra <= k; ++extra) {
    masked_assign(md, centers, &labels, labels, dist);
    if (!masked_repair(md, centers, labels, dist)) break;
  }

  KMeansModel model;
  model.centers = std::move(centers);
  model.labels = labels;
  model.dispersion = dist.sum();
  return model;
}

}  // namespace

KMeansModel kmeans_fit_missing(const DataMatrix& data, int k, const KMeansParams& params,
                               Rng& rng) {
  data.validate();
  if (data.complete()) return kmeans_fit(data.values, k, params, rng);
  check_fit_args(data.rows(), k, params);

  MaskedData md(data);
  const std::uint64_t base = rng();
  KMeansModel best;
  for (int r = 0; r < params.restarts; ++r) {
    Rng sub = derive_rng(base, r);
    KMeansModel model = masked_lloyd_once(md, k, params.max_iter, sub);
    if (r == 0 || model.dispersion < best.dispersion) best = std::move(model);
  }
  return best;
}

}  // namespace gcv
