#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <string_view>

#include "kts/types.hpp"

namespace kts {

class SampleSet;

enum class KernelFamily { gaussian, linear, triangle };

std::string_view to_string(KernelFamily family);
KernelFamily kernel_family_from_string(std::string_view name);

// A member of one of the supported kernel families.
//
//   gaussian  k(x, y) = exp(-|x - y|^2 / (2 l^2)), parameter "lengthscale" > 0
//   linear    k(x, y) = <x, y>
//   triangle  k(x, y) = prod_i max(1 - |x_i - y_i|, 0)
//
// The triangle kernel is the tensor product of the 1-D triangle kernel, which
// keeps it positive definite in every dimension and equal to
// max(1 - |x - y|, 0) on the real line.
class KernelSpec {
 public:
  using Params = std::map<std::string, double>;

  static KernelSpec gaussian(double lengthscale);
  static KernelSpec linear();
  static KernelSpec triangle();

  // Validates params against the family: gaussian requires exactly
  // "lengthscale"; linear and triangle reject any parameter.
  static KernelSpec make(KernelFamily family, const Params& params);

  KernelFamily family() const noexcept { return family_; }
  const Params& params() const noexcept { return params_; }

  // Throws ParameterError for families without a lengthscale.
  double lengthscale() const;

  // sup_x k(x, x): 1 for the bounded families, +inf for linear.
  double sup_diagonal() const noexcept;

  double operator()(Point x, Point y) const;

  // Skips the dimension check; for hot loops over a validated SampleSet.
  double evaluate_unchecked(const double* x, const double* y, std::size_t dim) const noexcept;

  friend bool operator==(const KernelSpec&, const KernelSpec&) = default;

 private:
  KernelSpec(KernelFamily family, Params params);

  KernelFamily family_;
  Params params_;
  double inv_two_l2_ = 0.0;
};

double eval_kernel(const KernelSpec& spec, Point x, Point y);

// Kernel evaluations for a SampleSet. Immutable once built; safe to share
// read-only across threads.
struct GramBlocks {
  Matrix xx;  // nX x nX
  Matrix yy;  // nY x nY
  Matrix xy;  // nX x nY

  std::size_t nx() const noexcept { return static_cast<std::size_t>(xx.rows()); }
  std::size_t ny() const noexcept { return static_cast<std::size_t>(yy.rows()); }
};

// Fills all three blocks; Kxx and Kyy are computed once per unordered pair and
// mirrored, so they are exactly symmetric.
GramBlocks gram_blocks(const KernelSpec& spec, const SampleSet& samples, std::size_t threads = 1);

// Gram matrix of the stacked sample [X; Y], (nX + nY) x (nX + nY).
Matrix pooled_gram(const KernelSpec& spec, const SampleSet& samples, std::size_t threads = 1);

// Symmetric Gram matrix of a single sample.
Matrix gram_matrix(const KernelSpec& spec, const Matrix& points, std::size_t threads = 1);

// Cross Gram matrix k(a_i, b_j).
Matrix cross_gram(const KernelSpec& spec, const Matrix& a, const Matrix& b, std::size_t threads = 1);

}  // namespace kts
