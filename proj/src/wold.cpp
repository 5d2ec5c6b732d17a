#include "gcv/wold.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gcv {
namespace {

bool fold_blanks_line(const std::vector<std::pair<Index, Index>>& holdout, Index n_rows,
                      Index n_cols) {
  std::vector<Index> per_row(n_rows, 0), per_col(n_cols, 0);
  for (const auto& [i, j] : holdout) {
    per_row[i]++;
    per_col[j]++;
  }
  for (Index i = 0; i < n_rows; ++i)
    if (per_row[i] == n_cols) return true;
  for (Index j = 0; j < n_cols; ++j)
    if (per_col[j] == n_rows) return true;
  return false;
}

// One (fold, k) task: fit on everything except the held-out entries, then
// return the mean squared deviation of the held-out observed entries from
// their row's assigned cluster center.
double speckled_fold_error(const DataMatrix& data,
                           const std::vector<std::pair<Index, Index>>& holdout, int k,
                           const KMeansParams& params, Rng& rng) {
  BoolMatrix train_mask =
      data.mask ? *data.mask : BoolMatrix::Constant(data.rows(), data.cols(), true);
  for (const auto& [i, j] : holdout) train_mask(i, j) = false;

  DataMatrix train(data.values, std::move(train_mask));
  KMeansModel model = kmeans_fit_missing(train, k, params, rng);

  double err = 0.0;
  Index scored = 0;
  for (const auto& [i, j] : holdout) {
    if (!data.observed(i, j)) continue;  // nothing to score against
    const double diff = data.values(i, j) - model.centers(model.labels[i], j);
    err += diff * diff;
    scored++;
  }
  if (scored == 0)
    throw std::runtime_error("wold: a fold held out no observed entries");
  return err / double(scored);
}

}  // namespace

SpeckledPlan plan_speckled(Index n_rows, Index n_cols, int folds, double holdout_fraction,
                           Rng& rng) {
  if (folds < 2) throw std::invalid_argument("plan_speckled: need folds >= 2");
  if (!(holdout_fraction > 0.0 && holdout_fraction < 1.0))
    throw std::invalid_argument("plan_speckled: holdout_fraction must be in (0, 1)");
  if (holdout_fraction * double(folds) > 1.0 + 1e-9)
    throw std::invalid_argument(
        "plan_speckled: folds * holdout_fraction exceeds 1; sets cannot stay disjoint");

  const Index total_cells = n_rows * n_cols;
  const Index total_hold = std::min<Index>(
      total_cells, llround(holdout_fraction * double(total_cells) * folds));
  const Index base = total_hold / folds;
  const Index rem = total_hold % folds;
  if (base < 1)
    throw std::invalid_argument("plan_speckled: holdout_fraction gives empty folds");

  std::vector<std::pair<Index, Index>> cells;
  cells.reserve(total_cells);
  for (Index i = 0; i < n_rows; ++i)
    for (Index j = 0; j < n_cols; ++j) cells.emplace_back(i, j);

  constexpr int kMaxAttempts = 1000;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    std::shuffle(cells.begin(), cells.end(), rng);
    SpeckledPlan plan;
    plan.holdout_fraction = holdout_fraction;
    plan.holdout_sets.resize(folds);
    Index at = 0;
    bool ok = true;
    for (int f = 0; f < folds; ++f) {
      const Index size = base + (f < rem ? 1 : 0);
      plan.holdout_sets[f].assign(cells.begin() + at, cells.begin() + at + size);
      at += size;
      if (fold_blanks_line(plan.holdout_sets[f], n_rows, n_cols)) {
        ok = false;
        break;
      }
    }
    if (ok) return plan;
  }
  throw std::runtime_error(
      "plan_speckled: could not draw a plan that keeps every row and column "
      "partially observed (infeasible configuration)");
}

double wold_cv_error(const DataMatrix& data, const SpeckledPlan& plan, int k,
                     const KMeansParams& params, std::uint64_t seed) {
  data.validate();
  if (k > data.rows()) throw std::invalid_argument("wold_cv_error: k exceeds row count");

  const int folds = static_cast<int>(plan.holdout_sets.size());
  double total = 0.0;
  for (int f = 0; f < folds; ++f) {
    Rng task_rng = derive_rng(seed, 0x776f6c64ull, f, k);
    total += speckled_fold_error(data, plan.holdout_sets[f], k, params, task_rng);
  }
  return total / double(folds);
}

CvReport wold_select_k(const DataMatrix& data, const std::vector<int>& k_grid,
                       const SpeckledPlan& plan, const KMeansParams& params,
                       std::uint64_t seed) {
  data.validate();
  if (k_grid.empty()) throw std::invalid_argument("wold_select_k: k_grid must be nonempty");
  for (int k : k_grid)
    if (k < 1 || k > data.rows())
      throw std::invalid_argument("wold_select_k: k_grid values must be in [1, N]");

  const int folds = static_cast<int>(plan.holdout_sets.size());
  CvReport report;
  report.k_grid = k_grid;
  for (int f = 0; f < folds; ++f) report.folds.emplace_back(f, 0);
  report.errors.resize(k_grid.size(), folds);

  for (std::size_t ki = 0; ki < k_grid.size(); ++ki)
    for (int f = 0; f < folds; ++f) {
      Rng task_rng = derive_rng(seed, 0x776f6c64ull, f, k_grid[ki]);
      report.errors(ki, f) =
          speckled_fold_error(data, plan.holdout_sets[f], k_grid[ki], params, task_rng);
    }
  report.finalize();
  return report;
}

}  // namespace gcv
