#pragma once

#include <cstddef>
#include <string_view>

#include "kts/kernels.hpp"
#include "kts/samples.hpp"

namespace kts {

enum class EstimatorKind { unbiased, ustat };

std::string_view to_string(EstimatorKind kind);
EstimatorKind estimator_kind_from_string(std::string_view name);

struct EstimatorValue {
  double value = 0.0;
  EstimatorKind kind = EstimatorKind::unbiased;
  std::size_t nx = 0;
  std::size_t ny = 0;
};

// The usual unbiased MMD^2 estimator for any nX, nY >= 2:
//
//   2/(nX(nX-1)) sum_{i<j} k(x_i,x_j) + 2/(nY(nY-1)) sum_{i<j} k(y_i,y_j)
//     - 2/(nX nY) sum_{i,j} k(x_i,y_j)
//
// The cross sum is the mean of its row-major and column-major totals, which
// makes the value bitwise invariant under swapping X and Y.
EstimatorValue mmd_unbiased(const GramBlocks& blocks);

// The paired U-statistic estimator (nX == nY). Pairs z_i = (x_i, y_i) in the
// given order and averages h(z_i, z_j) over i != j; differs from
// mmd_unbiased only by dropping the k(x_i, y_i) terms.
EstimatorValue mmd_ustat(const GramBlocks& blocks);

// Same value as mmd_unbiased(gram_blocks(spec, samples)) without storing the
// blocks, for simulation loops over large samples.
double mmd_unbiased_streaming(const KernelSpec& spec, const SampleSet& samples);

// High-probability bound on |mmd_unbiased - mmd_ustat| at equal sizes n:
// (8 K / n^{3/2}) sqrt(log(2/delta)) with K = sup_x k(x, x).
double gap_bound(double kernel_sup, std::size_t n, double delta);

}  // namespace kts
