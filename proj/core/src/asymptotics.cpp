#include "kts/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include <Eigen/Eigenvalues>

#include "kts/error.hpp"
#include "kts/parallel.hpp"
#include "kts/random.hpp"
#include "kts/stats.hpp"

namespace kts {

namespace {

constexpr std::size_t kDrawsPerChunk = 4096;

void check_rho(double rho, const char* name) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw ParameterError(std::string(name) + " must lie in [0, 1]");
}

}  // namespace

std::vector<double> estimate_null_eigenvalues(const Matrix& gram, std::size_t max_count) {
  if (gram.rows() != gram.cols()) throw ShapeError("Gram matrix must be square");
  if (gram.rows() < 2) throw InsufficientSamplesError("eigenvalue estimation needs n >= 2");
  const auto n = gram.rows();
  const double dn = static_cast<double>(n);

  Eigen::MatrixXd centred = gram;
  const Eigen::VectorXd row_means = centred.rowwise().mean();
  const Eigen::VectorXd col_means = centred.colwise().mean().transpose();
  const double grand = row_means.mean();
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      centred(i, j) = (centred(i, j) - row_means(i) - col_means(j) + grand) / dn;
    }
  }
  centred = 0.5 * (centred + centred.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(centred, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw Error("eigenvalue solver did not converge");

  std::vector<double> values(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  for (double& v : values) v = std::max(v, 0.0);
  std::sort(values.begin(), values.end(), std::greater<>());

  const double cutoff = std::max(1e-10, values.empty() ? 0.0 : 1e-8 * values.front());
  std::vector<double> kept;
  for (double v : values) {
    if (v <= cutoff || kept.size() >= max_count) break;
    kept.push_back(v);
  }
  return kept;
}

SpectralModel make_spectral_model(std::vector<double> eigenvalues, double rho_x, double rho_y) {
  check_rho(rho_x, "rho_x");
  check_rho(rho_y, "rho_y");
  if (rho_x != 1.0 && rho_y != 1.0) throw ParameterError("one of rho_x, rho_y must equal 1");
  for (double v : eigenvalues) {
    if (!std::isfinite(v) || v < 0.0) throw ParameterError("eigenvalues must be finite and nonnegative");
  }
  std::sort(eigenvalues.begin(), eigenvalues.end(), std::greater<>());
  return SpectralModel{std::move(eigenvalues), rho_x, rho_y};
}

std::vector<double> sample_null_limit(const SpectralModel& model, std::size_t draws, std::uint64_t seed,
                                      std::size_t threads) {
  if (draws == 0) throw ParameterError("draws must be positive");
  std::vector<double> out(draws, 0.0);
  if (model.eigenvalues.empty()) return out;
  const double scale = model.rho_x + model.rho_y;
  const std::size_t chunks = (draws + kDrawsPerChunk - 1) / kDrawsPerChunk;
  parallel_for(chunks, threads, [&](std::size_t c) {
    Rng rng = make_rng(seed, c);
    std::normal_distribution<double> z;
    const std::size_t end = std::min(draws, (c + 1) * kDrawsPerChunk);
    for (std::size_t i = c * kDrawsPerChunk; i < end; ++i) {
      double s = 0.0;
      for (double lambda : model.eigenvalues) {
        const double v = z(rng);
        s += lambda * (v * v - 1.0);
      }
      out[i] = scale * s;
    }
  });
  return out;
}

double null_quantile(const SpectralModel& model, double alpha, std::size_t draws, std::uint64_t seed,
                     std::size_t threads) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("alpha must lie in (0, 1)");
  return upper_quantile(sample_null_limit(model, draws, seed, threads), alpha);
}

AltLimit alt_limit(double zeta_x, double zeta_y, double rho_x, double rho_y, double mmd_sq) {
  if (!(zeta_x >= 0.0 && zeta_y >= 0.0)) throw ParameterError("zeta values must be nonnegative");
  check_rho(rho_x, "rho_x");
  check_rho(rho_y, "rho_y");
  return AltLimit{4.0 * rho_x * zeta_x + 4.0 * rho_y * zeta_y, mmd_sq};
}

double power_approx(std::size_t n, double mmd_sq, double sigma, double c_alpha) {
  if (!(sigma > 0.0)) throw ParameterError("power approximation needs sigma > 0");
  if (n == 0) throw ParameterError("power approximation needs n >= 1");
  const double rn = std::sqrt(static_cast<double>(n));
  return normal_cdf(rn * mmd_sq / sigma - c_alpha / (rn * sigma));
}

}  // namespace kts
