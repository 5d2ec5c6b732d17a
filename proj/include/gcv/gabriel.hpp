#ifndef GCV_GABRIEL_HPP
#define GCV_GABRIEL_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "gcv/covariance.hpp"
#include "gcv/data_matrix.hpp"
#include "gcv/kmeans.hpp"
#include "gcv/rng.hpp"

namespace gcv {

/// Random partition of rows into K test subsets and columns into L response
/// subsets; fold (r, s) holds out row subset r and predicts column subset s.
struct FoldPlan {
  std::vector<std::vector<Index>> row_subsets;
  std::vector<std::vector<Index>> col_subsets;
  std::vector<std::pair<int, int>> folds;  // every (r, s) pair, r-major

  int fold_count() const { return static_cast<int>(folds.size()); }
  Index min_train_rows(Index n_rows) const {
    Index largest = 0;
    for (const auto& s : row_subsets) largest = std::max(largest, Index(s.size()));
    return n_rows - largest;
  }
};

/// Subset sizes differ by at most one; deterministic given the rng state.
FoldPlan plan_folds(Index n_rows, Index n_cols, int K, int L, Rng& rng);

/// One fold's blocks: X = predictor columns, Y = response columns.
struct FoldView {
  Matrix x_train, y_train, x_test, y_test;
};

FoldView make_fold_view(const Matrix& values, const FoldPlan& plan, int fold_index);

/// Cluster / Classify / Predict / Evaluate for one fold and one k:
/// k-means on Y_train, centroid classifier on (X_train, labels), predicted
/// responses are the Y-cluster means of the predicted classes, and the error
/// is (1/m) * sum of squared test-row residuals.
double fold_cv_error(const FoldView& view, int k, const KMeansParams& params, Rng& rng);

/// Cross-validation errors for every (k, fold) pair plus the selected k.
struct CvReport {
  std::vector<int> k_grid;
  std::vector<std::pair<int, int>> folds;
  Matrix errors;      // k_grid.size() x folds.size()
  Vector mean_error;  // per k
  int selected_k = 0;
  bool corrected = false;

  void finalize();  // fills mean_error and selected_k (smallest k wins ties)
};

/// Full Gabriel selection: K x L folds, fold_cv_error over k_grid, smallest
/// mean error wins with ties resolved toward smaller k. Each (fold, k) task
/// derives its stream from (seed, fold, k), so evaluation order is immaterial.
CvReport gabriel_select_k(const DataMatrix& data, const std::vector<int>& k_grid, int K,
                          int L, const KMeansParams& params, std::uint64_t seed);

/// The single-fold protocol of the bivariate sweeps: one (r=0, s=0) fold of
/// a K=2, L=2 plan, errors per k, arg-min with the smallest-k tie rule.
struct SingleFoldSelection {
  std::vector<int> k_grid;
  Vector errors;
  int selected_k = 0;
};

SingleFoldSelection single_fold_select_k(const DataMatrix& data,
                                         const std::vector<int>& k_grid,
                                         const KMeansParams& params, std::uint64_t seed);

struct CorrectedSelection {
  CvReport stage1;        // on the raw data; gives the preliminary k
  CvReport stage2;        // on the whitened data (copy of stage1 on fallback)
  Matrix sigma_hat;       // pooled noise covariance from the stage-1 fit
  bool degenerate_fallback = false;
};

/// Two-stage correlation correction: select, estimate pooled noise
/// covariance at the preliminary k, whiten with a Haar rotation, re-select
/// on fresh folds. A covariance without positive spectrum falls back to the
/// stage-1 report with the warning flag set.
CorrectedSelection gabriel_select_k_corrected(const DataMatrix& data,
                                              const std::vector<int>& k_grid, int K, int L,
                                              const KMeansParams& params, std::uint64_t seed);

}  // namespace gcv

#endif  // GCV_GABRIEL_HPP
