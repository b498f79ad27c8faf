#pragma once

#include <cstddef>
#include <span>

#include <Eigen/Core>

namespace kts {

// Rows are samples, columns are features. Row-major so that a sample is a
// contiguous span.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

// A single sample point (one row of a Matrix).
using Point = std::span<const double>;

inline Point row_of(const Matrix& m, Eigen::Index i) {
  return {m.data() + i * m.cols(), static_cast<std::size_t>(m.cols())};
}

}  // namespace kts
