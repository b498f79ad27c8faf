#pragma once

#include <cstddef>
#include <initializer_list>
#include <random>
#include <vector>

#include "kts/kernels.hpp"
#include "kts/oracle.hpp"
#include "kts/samples.hpp"
#include "kts/types.hpp"

namespace kts::testing {

inline Matrix column(std::initializer_list<double> values) {
  Matrix m(static_cast<Eigen::Index>(values.size()), 1);
  Eigen::Index i = 0;
  for (double v : values) m(i++, 0) = v;
  return m;
}

inline Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed, double shift = 0.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z(shift, 1.0);
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = z(rng);
  return m;
}

inline DiscreteDistribution discrete(std::initializer_list<double> support, std::initializer_list<double> probs) {
  return DiscreteDistribution(column(support), std::vector<double>(probs));
}

// Fixtures with reference values from a 40-digit enumeration.
struct Fixture {
  DiscreteDistribution p;
  DiscreteDistribution q;
  KernelSpec kernel;
};

inline Fixture gaussian_fixture() {
  return {discrete({0.0, 1.0}, {0.3, 0.7}), discrete({0.5, 2.0}, {0.4, 0.6}), KernelSpec::gaussian(1.0)};
}

// P = Uniform{-1, 1}, Q = Uniform{0, 2}.
inline Fixture linear_fixture() {
  return {discrete({-1.0, 1.0}, {0.5, 0.5}), discrete({0.0, 2.0}, {0.5, 0.5}), KernelSpec::linear()};
}

// P = Uniform{1, 2}, Q = Uniform{3, 4}: first-order degenerate with MMD > 0.
inline Fixture triangle_fixture() {
  return {discrete({1.0, 2.0}, {0.5, 0.5}), discrete({3.0, 4.0}, {0.5, 0.5}), KernelSpec::triangle()};
}

// Unbiased estimator by direct double loops over the raw samples.
inline double naive_mmd_unbiased(const KernelSpec& k, const Matrix& x, const Matrix& y) {
  const auto nx = x.rows(), ny = y.rows();
  double sxx = 0, syy = 0, sxy = 0;
  for (Eigen::Index i = 0; i < nx; ++i)
    for (Eigen::Index j = 0; j < nx; ++j)
      if (i != j) sxx += k(row_of(x, i), row_of(x, j));
  for (Eigen::Index i = 0; i < ny; ++i)
    for (Eigen::Index j = 0; j < ny; ++j)
      if (i != j) syy += k(row_of(y, i), row_of(y, j));
  for (Eigen::Index i = 0; i < nx; ++i)
    for (Eigen::Index j = 0; j < ny; ++j) sxy += k(row_of(x, i), row_of(y, j));
  const double dx = static_cast<double>(nx), dy = static_cast<double>(ny);
  return sxx / (dx * (dx - 1)) + syy / (dy * (dy - 1)) - 2 * sxy / (dx * dy);
}

}  // namespace kts::testing
