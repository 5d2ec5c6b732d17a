#ifndef GCV_EVALUATION_HPP
#define GCV_EVALUATION_HPP

#include <string>
#include <utility>
#include <vector>

#include "gcv/dense.hpp"

namespace gcv {

/// Wilson score interval for a binomial proportion. Endpoints are exact 0
/// and 1 at the boundary counts.
std::pair<double, double> wilson_interval(int successes, int trials,
                                          double confidence = 0.95);

/// Co-occurrence counts between two labelings. Rows follow the distinct
/// values of `a` in sorted order, columns those of `b`.
struct ConfusionMatrix {
  std::vector<int> levels_a, levels_b;
  MatrixT<int> counts;
  VectorT<int> row_totals, col_totals;
  int total = 0;
};

ConfusionMatrix confusion_matrix(const IntVector& a, const IntVector& b);

/// Upper-tail hypergeometric probability P(X >= observed) that a category of
/// category_size members places `observed` of them in a cluster of
/// cluster_size draws from the population. Log-factorial arithmetic.
double enrichment_pvalue(int in_cluster_category, int cluster_size, int category_size,
                         int population);

/// Family-wise threshold alpha / m for m simultaneous tests.
double bonferroni_threshold(double alpha, int m);

/// One selection-frequency row: how often a method hit k_true exactly.
struct MethodSummary {
  std::string method;
  std::string setting;
  double param = 0.0;
  int correct = 0;
  int total = 0;
  double wilson_low = 0.0;
  double wilson_high = 1.0;
};

MethodSummary summarize_selection(const std::string& method, const std::string& setting,
                                  double param, int correct, int total);

}  // namespace gcv

#endif  // GCV_EVALUATION_HPP
