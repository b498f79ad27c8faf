#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "kts/types.hpp"

namespace kts {

// Null limit of min(nX, nY) * mmd_unbiased:
//   (rho_X + rho_Y) sum_l lambda_l (Z_l^2 - 1),  Z_l i.i.d. N(0, 1).
struct SpectralModel {
  std::vector<double> eigenvalues;  // descending, nonnegative
  double rho_x = 1.0;
  double rho_y = 1.0;
};

inline constexpr std::size_t kDefaultMaxEigenvalues = 256;

// Eigenvalues of H K H / n with H = I - 11^T / n, sorted descending. Negative
// values are clipped; values <= max(1e-10, 1e-8 lambda_1) are dropped and the
// result is capped at max_count entries.
std::vector<double> estimate_null_eigenvalues(const Matrix& gram, std::size_t max_count = kDefaultMaxEigenvalues);

// Validates eigenvalues (finite, >= 0) and rhos (in [0, 1], one equal to 1)
// and sorts eigenvalues descending.
SpectralModel make_spectral_model(std::vector<double> eigenvalues, double rho_x, double rho_y);

// draws samples of the null limit. Chunks of draws use RNG streams derived
// from (seed, chunk), so the output is independent of `threads`.
std::vector<double> sample_null_limit(const SpectralModel& model, std::size_t draws, std::uint64_t seed,
                                      std::size_t threads = 1);

// Order statistic ceil((1 - alpha) draws) of sample_null_limit.
double null_quantile(const SpectralModel& model, double alpha, std::size_t draws, std::uint64_t seed,
                     std::size_t threads = 1);

// Limit of sqrt(min(nX, nY)) (mmd_unbiased - mmd_sq): N(0, variance), a point
// mass when variance is 0.
struct AltLimit {
  double variance = 0.0;
  double mean = 0.0;
};

AltLimit alt_limit(double zeta_x, double zeta_y, double rho_x, double rho_y, double mmd_sq);

// Phi(sqrt(n) mmd_sq / sigma - c_alpha / (sqrt(n) sigma)).
double power_approx(std::size_t n, double mmd_sq, double sigma, double c_alpha);

}  // namespace kts
