#pragma once

#include <cstddef>

#include "kts/types.hpp"

namespace kts {

// Two samples X (nX x d) and Y (nY x d) sharing the feature dimension d.
class SampleSet {
 public:
  // Throws ShapeError when either sample is empty, has zero columns, or the
  // column counts differ.
  SampleSet(Matrix x, Matrix y);

  const Matrix& x() const noexcept { return x_; }
  const Matrix& y() const noexcept { return y_; }

  std::size_t nx() const noexcept { return static_cast<std::size_t>(x_.rows()); }
  std::size_t ny() const noexcept { return static_cast<std::size_t>(y_.rows()); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(x_.cols()); }

  // Y, X.
  SampleSet swapped() const { return SampleSet(y_, x_); }

  // Rows [X; Y].
  Matrix pooled() const;

 private:
  Matrix x_;
  Matrix y_;
};

// Throws InsufficientSamplesError unless nX >= 2 and nY >= 2.
void require_estimable(std::size_t nx, std::size_t ny);

}  // namespace kts
