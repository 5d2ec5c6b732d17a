#ifndef GCV_DATA_MATRIX_HPP
#define GCV_DATA_MATRIX_HPP

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gcv/dense.hpp"

namespace gcv {

/// Dense N x P observations-by-features matrix. An absent mask means every
/// entry is observed; mask(i, j) == true marks an observed entry.
struct DataMatrix {
  Matrix values;
  std::optional<BoolMatrix> mask;
  std::vector<std::string> row_ids;  // empty when unlabeled
  std::vector<std::string> col_ids;

  DataMatrix() = default;
  explicit DataMatrix(Matrix v) : values(std::move(v)) {}
  DataMatrix(Matrix v, BoolMatrix m) : values(std::move(v)), mask(std::move(m)) {}

  Index rows() const { return values.rows(); }
  Index cols() const { return values.cols(); }

  bool observed(Index i, Index j) const { return !mask || (*mask)(i, j); }

  bool complete() const { return !mask || mask->all(); }

  Index observed_count() const {
    if (!mask) return values.size();
    return mask->template cast<Index>().sum();
  }

  void validate() const {
    if (values.rows() < 1 || values.cols() < 1)
      throw std::invalid_argument("DataMatrix must have at least one row and one column");
    if (mask && (mask->rows() != values.rows() || mask->cols() != values.cols()))
      throw std::invalid_argument("DataMatrix mask shape does not match values");
    for (Index i = 0; i < values.rows(); ++i)
      for (Index j = 0; j < values.cols(); ++j)
        if (observed(i, j) && !std::isfinite(values(i, j)))
          throw std::invalid_argument("DataMatrix has a non-finite observed entry");
    if (!row_ids.empty() && static_cast<Index>(row_ids.size()) != values.rows())
      throw std::invalid_argument("row_ids length does not match row count");
    if (!col_ids.empty() && static_cast<Index>(col_ids.size()) != values.cols())
      throw std::invalid_argument("col_ids length does not match column count");
  }

  void require_complete(const char* what) const {
    if (!complete())
      throw std::invalid_argument(std::string(what) + " does not support missing data");
  }
};

}  // namespace gcv

#endif  // GCV_DATA_MATRIX_HPP
