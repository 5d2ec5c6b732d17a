#include "gcv/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "gcv/theory.hpp"

namespace gcv {

std::pair<double, double> wilson_interval(int successes, int trials, double confidence) {
  if (trials < 1) throw std::invalid_argument("wilson_interval: trials must be >= 1");
  if (successes < 0 || successes > trials)
    throw std::invalid_argument("wilson_interval: successes must be in [0, trials]");
  if (!(confidence > 0.0 && confidence < 1.0))
    throw std::invalid_argument("wilson_interval: confidence must be in (0, 1)");

  const double z = normal_quantile(0.5 * (1.0 + confidence));
  const double n = double(trials);
  const double p = double(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;

  double low = std::max(0.0, center - half);
  double high = std::min(1.0, center + half);
  if (successes == 0) low = 0.0;        // exact at the boundaries
  if (successes == trials) high = 1.0;
  return {low, high};
}

ConfusionMatrix confusion_matrix(const IntVector& a, const IntVector& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("confusion_matrix: labelings differ in length");

  std::map<int, int> index_a, index_b;
  for (Index i = 0; i < a.size(); ++i) {
    index_a.emplace(a[i], 0);
    index_b.emplace(b[i], 0);
  }
  ConfusionMatrix cm;
  for (auto& [level, idx] : index_a) {
    idx = static_cast<int>(cm.levels_a.size());
    cm.levels_a.push_back(level);
  }
  for (auto& [level, idx] : index_b) {
    idx = static_cast<int>(cm.levels_b.size());
    cm.levels_b.push_back(level);
  }

  cm.counts = MatrixT<int>::Zero(cm.levels_a.size(), cm.levels_b.size());
  for (Index i = 0; i < a.size(); ++i)
    cm.counts(index_a[a[i]], index_b[b[i]]) += 1;
  cm.row_totals = cm.counts.rowwise().sum();
  cm.col_totals = cm.counts.colwise().sum();
  cm.total = static_cast<int>(a.size());
  return cm;
}

namespace {

double log_choose(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace

double enrichment_pvalue(int in_cluster_category, int cluster_size, int category_size,
                         int population) {
  const int x = in_cluster_category;
  if (population < 1) throw std::invalid_argument("enrichment_pvalue: empty population");
  if (cluster_size < 0 || cluster_size > population ||
      category_size < 0 || category_size > population)
    throw std::invalid_argument("enrichment_pvalue: sizes exceed population");
  if (x < 0 || x > std::min(cluster_size, category_size))
    throw std::invalid_argument("enrichment_pvalue: observed count is inconsistent");

  const int lo_support = std::max(0, cluster_size + category_size - population);
  if (x <= lo_support) return 1.0;  // the whole support is >= x

  const int hi_support = std::min(cluster_size, category_size);
  const double log_total = log_choose(population, cluster_size);
  double tail = 0.0;
  for (int i = x; i <= hi_support; ++i) {
    const double log_p = log_choose(category_size, i) +
                         log_choose(population - category_size, cluster_size - i) -
                         log_total;
    tail += std::exp(log_p);
  }
  return std::min(1.0, tail);
}

double bonferroni_threshold(double alpha, int m) {
  if (m < 1) throw std::invalid_argument("bonferroni_threshold: m must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("bonferroni_threshold: alpha must be in (0, 1)");
  return alpha / double(m);
}

MethodSummary summarize_selection(const std::string& method, const std::string& setting,
                                  double param, int correct, int total) {
  MethodSummary row;
  row.method = method;
  row.setting = setting;
  row.param = param;
  row.correct = correct;
  row.total = total;
  if (total > 0) {
    auto [low, high] = wilson_interval(correct, total);
    row.wilson_low = low;
    row.wilson_high = high;
  }
  return row;
}

}  // namespace gcv
