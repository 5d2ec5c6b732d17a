#ifndef GCV_WOLD_HPP
#define GCV_WOLD_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "gcv/data_matrix.hpp"
#include "gcv/gabriel.hpp"
#include "gcv/kmeans.hpp"

namespace gcv {

/// Speckled holdout: disjoint sets of (row, col) entry indices, resampled so
/// no single fold blanks out an entire row or column.
struct SpeckledPlan {
  std::vector<std::vector<std::pair<Index, Index>>> holdout_sets;
  double holdout_fraction = 0.0;
};

/// With fraction * folds == 1 the sets partition the entry grid (every entry
/// held out exactly once); per-fold sizes stay within one of
/// fraction * n_rows * n_cols. Deterministic given the rng state.
SpeckledPlan plan_speckled(Index n_rows, Index n_cols, int folds, double holdout_fraction,
                           Rng& rng);

/// Per fold: fit the missing-data k-means on the non-held-out (and observed)
/// entries, then score the held-out observed entries against the assigned
/// cluster's center coordinate. Returns the mean over folds of the per-fold
/// mean squared deviation.
double wold_cv_error(const DataMatrix& data, const SpeckledPlan& plan, int k,
                     const KMeansParams& params, std::uint64_t seed);

/// Wold selection over a k grid; smallest-k tie rule as in Gabriel. Fold ids
/// are recorded as (fold, 0) in the report.
CvReport wold_select_k(const DataMatrix& data, const std::vector<int>& k_grid,
                       const SpeckledPlan& plan, const KMeansParams& params,
                       std::uint64_t seed);

}  // namespace gcv

#endif  // GCV_WOLD_HPP
