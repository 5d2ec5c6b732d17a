#include "gcv/gabriel.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace gcv {
namespace {

std::vector<std::vector<Index>> random_partition(Index n, int parts, Rng& rng) {
  std::vector<Index> order(n);
  std::iota(order.begin(), order.end(), Index(0));
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<std::vector<Index>> subsets(parts);
  const Index base = n / parts;
  const Index rem = n % parts;
  Index at = 0;
  for (int s = 0; s < parts; ++s) {
    const Index size = base + (s < rem ? 1 : 0);
    subsets[s].assign(order.begin() + at, order.begin() + at + size);
    std::sort(subsets[s].begin(), subsets[s].end());
    at += size;
  }
  return subsets;
}

void check_k_grid(const std::vector<int>& k_grid, Index max_train) {
  if (k_grid.empty()) throw std::invalid_argument("k_grid must be nonempty");
  for (int k : k_grid) {
    if (k < 1) throw std::invalid_argument("k_grid values must be >= 1");
    if (k > max_train)
      throw std::invalid_argument(
          "k_grid exceeds the smallest train-row count across folds");
  }
}

}  // namespace

FoldPlan plan_folds(Index n_rows, Index n_cols, int K, int L, Rng& rng) {
  if (K < 2 || L < 2) throw std::invalid_argument("plan_folds: need K >= 2 and L >= 2");
  if (K > n_rows) throw std::invalid_argument("plan_folds: K exceeds row count");
  if (L > n_cols) throw std::invalid_argument("plan_folds: L exceeds column count");

  FoldPlan plan;
  plan.row_subsets = random_partition(n_rows, K, rng);
  plan.col_subsets = random_partition(n_cols, L, rng);
  plan.folds.reserve(static_cast<std::size_t>(K) * L);
  for (int r = 0; r < K; ++r)
    for (int s = 0; s < L; ++s) plan.folds.emplace_back(r, s);
  return plan;
}

FoldView make_fold_view(const Matrix& values, const FoldPlan& plan, int fold_index) {
  if (fold_index < 0 || fold_index >= plan.fold_count())
    throw std::invalid_argument("make_fold_view: fold index out of range");
  const auto [r, s] = plan.folds[fold_index];

  std::vector<char> row_is_test(values.rows(), 0), col_is_response(values.cols(), 0);
  for (Index i : plan.row_subsets[r]) row_is_test[i] = 1;
  for (Index j : plan.col_subsets[s]) col_is_response[j] = 1;

  std::vector<Index> train_rows, test_rows, x_cols, y_cols;
  for (Index i = 0; i < values.rows(); ++i)
    (row_is_test[i] ? test_rows : train_rows).push_back(i);
  for (Index j = 0; j < values.cols(); ++j)
    (col_is_response[j] ? y_cols : x_cols).push_back(j);

  FoldView view;
  view.x_train = values(train_rows, x_cols);
  view.y_train = values(train_rows, y_cols);
  view.x_test = values(test_rows, x_cols);
  view.y_test = values(test_rows, y_cols);
  return view;
}

double fold_cv_error(const FoldView& view, int k, const KMeansParams& params, Rng& rng) {
  const Index n = view.y_train.rows();
  const Index m = view.y_test.rows();
  if (k > n) throw std::invalid_argument("fold_cv_error: k exceeds train rows");
  if (m < 1) throw std::invalid_argument("fold_cv_error: empty test set");

  KMeansModel clusters = kmeans_fit(view.y_train, k, params, rng);          // Cluster
  CentroidClassifier classifier = classifier_fit(view.x_train, clusters.labels, k);  // Classify

  double total = 0.0;
  for (Index i = 0; i < m; ++i) {
    const int g = classifier_predict(classifier, view.x_test.row(i).transpose(), rng);  // Predict
    total += (view.y_test.row(i) - clusters.centers.row(g)).squaredNorm();             // Evaluate
  }
  return total / double(m);
}

void CvReport::finalize() {
  const Index nk = static_cast<Index>(k_grid.size());
  mean_error = errors.rowwise().mean();
  Index best = 0;
  for (Index i = 1; i < nk; ++i)
    if (mean_error[i] < mean_error[best]) best = i;  // ties keep the smaller k
  selected_k = k_grid[best];
}

CvReport gabriel_select_k(const DataMatrix& data, const std::vector<int>& k_grid, int K,
                          int L, const KMeansParams& params, std::uint64_t seed) {
  data.validate();
  data.require_complete("gabriel_select_k");

  Rng plan_rng = derive_rng(seed, 0x706c616eull);  // fold-plan stream
  FoldPlan plan = plan_folds(data.rows(), data.cols(), K, L, plan_rng);
  check_k_grid(k_grid, plan.min_train_rows(data.rows()));

  CvReport report;
  report.k_grid = k_grid;
  report.folds = plan.folds;
  report.errors.resize(k_grid.size(), plan.folds.size());
  for (int f = 0; f < plan.fold_count(); ++f) {
    const FoldView view = make_fold_view(data.values, plan, f);
    for (std::size_t ki = 0; ki < k_grid.size(); ++ki) {
      Rng task_rng = derive_rng(seed, 0x666f6c64ull, f, k_grid[ki]);
      report.errors(ki, f) = fold_cv_error(view, k_grid[ki], params, task_rng);
    }
  }
  report.finalize();
  return report;
}

SingleFoldSelection single_fold_select_k(const DataMatrix& data,
                                         const std::vector<int>& k_grid,
                                         const KMeansParams& params, std::uint64_t seed) {
  data.validate();
  data.require_complete("single_fold_select_k");

  Rng plan_rng = derive_rng(seed, 0x706c616eull);
  FoldPlan plan = plan_folds(data.rows(), data.cols(), 2, 2, plan_rng);
  check_k_grid(k_grid, plan.min_train_rows(data.rows()));
  const FoldView view = make_fold_view(data.values, plan, 0);

  SingleFoldSelection out;
  out.k_grid = k_grid;
  out.errors.resize(k_grid.size());
  for (std::size_t ki = 0; ki < k_grid.size(); ++ki) {
    Rng task_rng = derive_rng(seed, 0x666f6c64ull, 0, k_grid[ki]);
    out.errors[ki] = fold_cv_error(view, k_grid[ki], params, task_rng);
  }
  Index best = 0;
  for (Index i = 1; i < out.errors.size(); ++i)
    if (out.errors[i] < out.errors[best]) best = i;
  out.selected_k = k_grid[best];
  return out;
}

CorrectedSelection gabriel_select_k_corrected(const DataMatrix& data,
                                              const std::vector<int>& k_grid, int K, int L,
                                              const KMeansParams& params,
                                              std::uint64_t seed) {
  CorrectedSelection result;
  result.stage1 = gabriel_select_k(data, k_grid, K, L, params, seed_path(seed, 1));
  const int k0 = result.stage1.selected_k;

  Rng fit_rng = derive_rng(seed, 2);
  KMeansModel full_fit = kmeans_fit(data.values, k0, params, fit_rng);
  result.sigma_hat = pooled_noise_covariance(data, full_fit.labels, k0);

  try {
    SymmetricEig eig = symmetric_eig(result.sigma_hat);
    Rng haar_rng = derive_rng(seed, 3);
    Matrix q = haar_orthogonal(static_cast<int>(data.cols()), haar_rng);
    DataMatrix whitened = whiten_transform(data, eig, q);
    // Stage 2 re-randomizes the fold plan rather than reusing stage 1's.
    result.stage2 = gabriel_select_k(whitened, k_grid, K, L, params, seed_path(seed, 4));
    result.stage2.corrected = true;
  } catch (const DegenerateCovariance&) {
    result.stage2 = result.stage1;
    result.stage2.corrected = true;
    result.degenerate_fallback = true;
  }
  return result;
}

}  // namespace gcv
