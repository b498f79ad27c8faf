#include "kts/samples.hpp"

#include <string>
#include <utility>

#include "kts/error.hpp"

namespace kts {

SampleSet::SampleSet(Matrix x, Matrix y) : x_(std::move(x)), y_(std::move(y)) {
  if (x_.rows() == 0 || y_.rows() == 0) throw ShapeError("sample set: both samples must be non-empty");
  if (x_.cols() == 0) throw ShapeError("sample set: feature dimension must be positive");
  if (x_.cols() != y_.cols()) {
    throw ShapeError("sample set: feature dimensions differ (" + std::to_string(x_.cols()) + " vs " +
                     std::to_string(y_.cols()) + ")");
  }
}

Matrix SampleSet::pooled() const {
  Matrix z(x_.rows() + y_.rows(), x_.cols());
  z.topRows(x_.rows()) = x_;
  z.bottomRows(y_.rows()) = y_;
  return z;
}

void require_estimable(std::size_t nx, std::size_t ny) {
  if (nx < 2 || ny < 2) {
    throw InsufficientSamplesError("estimator needs at least two samples per group (got nX=" +
                                   std::to_string(nx) + ", nY=" + std::to_string(ny) + ")");
  }
}

}  // namespace kts
