#pragma once

#include <cstddef>
#include <optional>

#include "kts/kernels.hpp"
#include "kts/oracle.hpp"

namespace kts {

// leading is the 1/n-order part (4 zeta_x / nX + 4 zeta_y / nY). total is the
// full finite-sample variance; it is only available when the population
// functionals are known. zeta_x/zeta_y are population values or plug-in
// estimates depending on how the report was built; sigma is
// sqrt(4 rho_X zeta_x + 4 rho_Y zeta_y).
struct VarianceReport {
  double leading = 0.0;
  std::optional<double> total;
  double zeta_x = 0.0;
  double zeta_y = 0.0;
  double sigma = 0.0;
  std::size_t nx = 0;
  std::size_t ny = 0;
};

// Variance of an order-two U-statistic:
//   4(n-2)/(n(n-1)) Var[E[h(Z1,Z2)|Z1]] + 2/(n(n-1)) Var[h(Z1,Z2)].
double ustat_variance(double sigma1_sq_quarter, double var_h, std::size_t n);

// Var of the paired estimator at n = nX = nY:
//   (4/n)(zeta_x + zeta_y) + 2/(n(n-1)) |C_P + C_Q|_HS^2
double mmd_ustat_variance(const PopulationFunctionals& f, std::size_t n);

// Exact variance of the unbiased estimator for any nX, nY >= 2:
//
//   4/nX zeta_x + 4/nY zeta_y
//     + 2/(nX(nX-1)) |C_P|^2 + 2/(nY(nY-1)) |C_Q|^2 + 4/(nX nY) <C_P, C_Q>
//
// This is the generalized U-statistic variance formula summed over the MMD
// zeta table (see mmd_zeta_table). All of the rational prefactors in the
// individual zeta terms cancel.
VarianceReport mmd_unbiased_variance(const PopulationFunctionals& f, std::size_t nx, std::size_t ny);

struct PluginZetas {
  double x = 0.0;
  double y = 0.0;
};

// Biased plug-in estimates of zeta_x and zeta_y from kernel-matrix row and
// column means:
//   zeta_x ~ Var_i(a_i) + Var_i(b_i) - 2 Cov_i(a_i, b_i)
// with a_i the mean of row i of Kxx and b_i the mean of row i of Kxy;
// zeta_y uses rows of Kyy and columns of Kxy. Variances use the 1/m
// normalizer.
PluginZetas plugin_zetas(const GramBlocks& blocks);

// plugin_zetas without storing the blocks.
PluginZetas plugin_zetas_streaming(const KernelSpec& spec, const SampleSet& samples);

// rho_X = min(nX, nY) / nX, rho_Y = min(nX, nY) / nY.
struct ScalingRatios {
  double x = 1.0;
  double y = 1.0;
};
ScalingRatios scaling_ratios(std::size_t nx, std::size_t ny);

// sqrt(max(0, 4 rho_X zeta_x + 4 rho_Y zeta_y)).
double sigma_hat(double zeta_hat_x, double zeta_hat_y, std::size_t nx, std::size_t ny);

// Plug-in report for observed samples; `total` is left empty.
VarianceReport plugin_variance_report(const GramBlocks& blocks);

}  // namespace kts
