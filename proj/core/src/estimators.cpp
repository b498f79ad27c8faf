#include "kts/estimators.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "kts/error.hpp"

namespace kts {

std::string_view to_string(EstimatorKind kind) {
  return kind == EstimatorKind::unbiased ? "unbiased" : "ustat";
}

EstimatorKind estimator_kind_from_string(std::string_view name) {
  if (name == "unbiased") return EstimatorKind::unbiased;
  if (name == "ustat") return EstimatorKind::ustat;
  throw ParameterError("unknown estimator kind '" + std::string(name) + "'");
}

namespace {

void check_blocks(const GramBlocks& b) {
  if (b.xx.rows() != b.xx.cols() || b.yy.rows() != b.yy.cols() || b.xy.rows() != b.xx.rows() ||
      b.xy.cols() != b.yy.rows()) {
    throw ShapeError("gram blocks have inconsistent dimensions");
  }
}

// sum_{i<j} of a symmetric block, accumulated per row then across rows.
template <typename Entry>
double upper_sum(std::size_t n, Entry&& entry) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    double row = 0.0;
    for (std::size_t j = i + 1; j < n; ++j) row += entry(i, j);
    total += row;
  }
  return total;
}

template <typename Entry>
double cross_sum(std::size_t nx, std::size_t ny, Entry&& entry) {
  std::vector<double> col(ny, 0.0);
  double by_rows = 0.0;
  for (std::size_t i = 0; i < nx; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < ny; ++j) {
      const double v = entry(i, j);
      row += v;
      col[j] += v;
    }
    by_rows += row;
  }
  double by_cols = 0.0;
  for (double c : col) by_cols += c;
  return 0.5 * (by_rows + by_cols);
}

double combine_unbiased(double sxx, double syy, double sxy, std::size_t nx, std::size_t ny) {
  const double fx = static_cast<double>(nx);
  const double fy = static_cast<double>(ny);
  return 2.0 * sxx / (fx * (fx - 1.0)) + 2.0 * syy / (fy * (fy - 1.0)) - 2.0 * sxy / (fx * fy);
}

}  // namespace

EstimatorValue mmd_unbiased(const GramBlocks& blocks) {
  check_blocks(blocks);
  const std::size_t nx = blocks.nx();
  const std::size_t ny = blocks.ny();
  require_estimable(nx, ny);
  const auto at = [](const Matrix& m) {
    return [&m](std::size_t i, std::size_t j) {
      return m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    };
  };
  const double sxx = upper_sum(nx, at(blocks.xx));
  const double syy = upper_sum(ny, at(blocks.yy));
  const double sxy = cross_sum(nx, ny, at(blocks.xy));
  return {combine_unbiased(sxx, syy, sxy, nx, ny), EstimatorKind::unbiased, nx, ny};
}

EstimatorValue mmd_ustat(const GramBlocks& blocks) {
  check_blocks(blocks);
  const std::size_t nx = blocks.nx();
  const std::size_t ny = blocks.ny();
  if (nx != ny) {
    throw PairingError("paired estimator needs equal sample sizes (got nX=" + std::to_string(nx) +
                       ", nY=" + std::to_string(ny) + ")");
  }
  require_estimable(nx, ny);
  const std::size_t n = nx;
  double sxx = 0.0, syy = 0.0, off = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double rx = 0.0, ry = 0.0, ro = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const auto ii = static_cast<Eigen::Index>(i);
      const auto jj = static_cast<Eigen::Index>(j);
      if (j > i) {
        rx += blocks.xx(ii, jj);
        ry += blocks.yy(ii, jj);
      }
      ro += blocks.xy(ii, jj);
    }
    sxx += rx;
    syy += ry;
    off += ro;
  }
  const double fn = static_cast<double>(n);
  // sum_{i != j} h(z_i, z_j) = 2 sxx + 2 syy - 2 sum_{i != j} k(x_i, y_j)
  return {2.0 * (sxx + syy - off) / (fn * (fn - 1.0)), EstimatorKind::ustat, nx, ny};
}

double mmd_unbiased_streaming(const KernelSpec& spec, const SampleSet& samples) {
  const std::size_t nx = samples.nx();
  const std::size_t ny = samples.ny();
  require_estimable(nx, ny);
  const std::size_t d = samples.dim();
  const double* x = samples.x().data();
  const double* y = samples.y().data();
  const double sxx = upper_sum(nx, [&](std::size_t i, std::size_t j) {
    return spec.evaluate_unchecked(x + i * d, x + j * d, d);
  });
  const double syy = upper_sum(ny, [&](std::size_t i, std::size_t j) {
    return spec.evaluate_unchecked(y + i * d, y + j * d, d);
  });
  const double sxy = cross_sum(nx, ny, [&](std::size_t i, std::size_t j) {
    return spec.evaluate_unchecked(x + i * d, y + j * d, d);
  });
  return combine_unbiased(sxx, syy, sxy, nx, ny);
}

double gap_bound(double kernel_sup, std::size_t n, double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("gap bound: delta must lie in (0, 1)");
  if (!(kernel_sup >= 0.0)) throw ParameterError("gap bound: kernel sup must be >= 0");
  if (n < 2) throw ParameterError("gap bound: n must be >= 2");
  const double fn = static_cast<double>(n);
  return 8.0 * kernel_sup / std::pow(fn, 1.5) * std::sqrt(std::log(2.0 / delta));
}

}  // namespace kts
