#include "kts/variance.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "kts/error.hpp"
#include "kts/samples.hpp"

namespace kts {

namespace {

void require_n(std::size_t n, const char* what) {
  if (n < 2) throw ParameterError(std::string(what) + ": sample size must be >= 2");
}

}  // namespace

double ustat_variance(double sigma1_sq_quarter, double var_h, std::size_t n) {
  require_n(n, "ustat_variance");
  if (sigma1_sq_quarter < 0.0 || var_h < 0.0) throw ParameterError("ustat_variance: inputs must be >= 0");
  const double fn = static_cast<double>(n);
  return 4.0 * (fn - 2.0) / (fn * (fn - 1.0)) * sigma1_sq_quarter + 2.0 / (fn * (fn - 1.0)) * var_h;
}

double mmd_ustat_variance(const PopulationFunctionals& f, std::size_t n) {
  require_n(n, "mmd_ustat_variance");
  const double fn = static_cast<double>(n);
  const double hs_sum = f.hs_pp + f.hs_qq + 2.0 * f.hs_pq;
  return 4.0 / fn * (f.zeta_x + f.zeta_y) + 2.0 / (fn * (fn - 1.0)) * hs_sum;
}

ScalingRatios scaling_ratios(std::size_t nx, std::size_t ny) {
  if (nx == 0 || ny == 0) throw ParameterError("scaling ratios need positive sizes");
  const double n = static_cast<double>(std::min(nx, ny));
  return {n / static_cast<double>(nx), n / static_cast<double>(ny)};
}

double sigma_hat(double zeta_hat_x, double zeta_hat_y, std::size_t nx, std::size_t ny) {
  const ScalingRatios rho = scaling_ratios(nx, ny);
  return std::sqrt(std::max(0.0, 4.0 * rho.x * zeta_hat_x + 4.0 * rho.y * zeta_hat_y));
}

VarianceReport mmd_unbiased_variance(const PopulationFunctionals& f, std::size_t nx, std::size_t ny) {
  require_n(nx, "mmd_unbiased_variance");
  require_n(ny, "mmd_unbiased_variance");
  const double fx = static_cast<double>(nx);
  const double fy = static_cast<double>(ny);
  VarianceReport r;
  r.nx = nx;
  r.ny = ny;
  r.zeta_x = f.zeta_x;
  r.zeta_y = f.zeta_y;
  r.leading = 4.0 / fx * f.zeta_x + 4.0 / fy * f.zeta_y;
  r.total = r.leading + 2.0 / (fx * (fx - 1.0)) * f.hs_pp + 2.0 / (fy * (fy - 1.0)) * f.hs_qq +
            4.0 / (fx * fy) * f.hs_pq;
  r.sigma = sigma_hat(f.zeta_x, f.zeta_y, nx, ny);
  return r;
}

namespace {

struct MeanCovariance {
  double var_a = 0.0;
  double var_b = 0.0;
  double cov_ab = 0.0;
};

// Biased (1/m) moments of two equally long sequences, centred first.
MeanCovariance moments(const std::vector<double>& a, const std::vector<double>& b) {
  const double m = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= m;
  mb /= m;
  MeanCovariance out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    out.var_a += da * da;
    out.var_b += db * db;
    out.cov_ab += da * db;
  }
  out.var_a /= m;
  out.var_b /= m;
  out.cov_ab /= m;
  return out;
}

double zeta_from(const std::vector<double>& self_means, const std::vector<double>& cross_means) {
  const MeanCovariance mc = moments(self_means, cross_means);
  return mc.var_a + mc.var_b - 2.0 * mc.cov_ab;
}

}  // namespace

PluginZetas plugin_zetas(const GramBlocks& blocks) {
  const std::size_t nx = blocks.nx();
  const std::size_t ny = blocks.ny();
  if (nx == 0 || ny == 0) throw ShapeError("plugin zetas: empty block");
  std::vector<double> a(nx), b(nx), c(ny), d(ny);
  for (std::size_t i = 0; i < nx; ++i) {
    a[i] = blocks.xx.row(static_cast<Eigen::Index>(i)).sum() / static_cast<double>(nx);
    b[i] = blocks.xy.row(static_cast<Eigen::Index>(i)).sum() / static_cast<double>(ny);
  }
  for (std::size_t j = 0; j < ny; ++j) {
    c[j] = blocks.yy.row(static_cast<Eigen::Index>(j)).sum() / static_cast<double>(ny);
    d[j] = blocks.xy.col(static_cast<Eigen::Index>(j)).sum() / static_cast<double>(nx);
  }
  return {zeta_from(a, b), zeta_from(c, d)};
}

PluginZetas plugin_zetas_streaming(const KernelSpec& spec, const SampleSet& samples) {
  const std::size_t nx = samples.nx();
  const std::size_t ny = samples.ny();
  const std::size_t dim = samples.dim();
  const double* x = samples.x().data();
  const double* y = samples.y().data();
  std::vector<double> a(nx, 0.0), b(nx, 0.0), c(ny, 0.0), d(ny, 0.0);
  for (std::size_t i = 0; i < nx; ++i) {
    a[i] += spec.evaluate_unchecked(x + i * dim, x + i * dim, dim);
    for (std::size_t j = i + 1; j < nx; ++j) {
      const double v = spec.evaluate_unchecked(x + i * dim, x + j * dim, dim);
      a[i] += v;
      a[j] += v;
    }
  }
  for (std::size_t i = 0; i < ny; ++i) {
    c[i] += spec.evaluate_unchecked(y + i * dim, y + i * dim, dim);
    for (std::size_t j = i + 1; j < ny; ++j) {
      const double v = spec.evaluate_unchecked(y + i * dim, y + j * dim, dim);
      c[i] += v;
      c[j] += v;
    }
  }
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) {
      const double v = spec.evaluate_unchecked(x + i * dim, y + j * dim, dim);
      b[i] += v;
      d[j] += v;
    }
  }
  for (auto& v : a) v /= static_cast<double>(nx);
  for (auto& v : b) v /= static_cast<double>(ny);
  for (auto& v : c) v /= static_cast<double>(ny);
  for (auto& v : d) v /= static_cast<double>(nx);
  return {zeta_from(a, b), zeta_from(c, d)};
}

VarianceReport plugin_variance_report(const GramBlocks& blocks) {
  const PluginZetas z = plugin_zetas(blocks);
  VarianceReport r;
  r.nx = blocks.nx();
  r.ny = blocks.ny();
  r.zeta_x = z.x;
  r.zeta_y = z.y;
  r.leading = 4.0 / static_cast<double>(r.nx) * z.x + 4.0 / static_cast<double>(r.ny) * z.y;
  r.sigma = sigma_hat(z.x, z.y, r.nx, r.ny);
  return r;
}

}  // namespace kts
