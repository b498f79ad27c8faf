#include "kts/kernels.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "kts/error.hpp"
#include "kts/parallel.hpp"
#include "kts/samples.hpp"

namespace kts {

std::string_view to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::gaussian: return "gaussian";
    case KernelFamily::linear: return "linear";
    case KernelFamily::triangle: return "triangle";
  }
  return "unknown";
}

KernelFamily kernel_family_from_string(std::string_view name) {
  if (name == "gaussian") return KernelFamily::gaussian;
  if (name == "linear") return KernelFamily::linear;
  if (name == "triangle") return KernelFamily::triangle;
  throw ParameterError("unknown kernel family '" + std::string(name) + "'");
}

KernelSpec::KernelSpec(KernelFamily family, Params params) : family_(family), params_(std::move(params)) {
  if (family_ == KernelFamily::gaussian) {
    const double l = params_.at("lengthscale");
    inv_two_l2_ = 1.0 / (2.0 * l * l);
  }
}

KernelSpec KernelSpec::gaussian(double lengthscale) {
  return make(KernelFamily::gaussian, {{"lengthscale", lengthscale}});
}

KernelSpec KernelSpec::linear() { return make(KernelFamily::linear, {}); }

KernelSpec KernelSpec::triangle() { return make(KernelFamily::triangle, {}); }

KernelSpec KernelSpec::make(KernelFamily family, const Params& params) {
  switch (family) {
    case KernelFamily::gaussian: {
      auto it = params.find("lengthscale");
      if (it == params.end() || params.size() != 1) {
        throw ParameterError("gaussian kernel takes exactly one parameter, 'lengthscale'");
      }
      if (!(it->second > 0.0) || !std::isfinite(it->second)) {
        throw ParameterError("gaussian lengthscale must be finite and > 0");
      }
      break;
    }
    case KernelFamily::linear:
    case KernelFamily::triangle:
      if (!params.empty()) {
        throw ParameterError(std::string(to_string(family)) + " kernel takes no parameters");
      }
      break;
  }
  return KernelSpec(family, params);
}

double KernelSpec::lengthscale() const {
  if (family_ != KernelFamily::gaussian) {
    throw ParameterError(std::string(to_string(family_)) + " kernel has no lengthscale");
  }
  return params_.at("lengthscale");
}

double KernelSpec::sup_diagonal() const noexcept {
  return family_ == KernelFamily::linear ? std::numeric_limits<double>::infinity() : 1.0;
}

double KernelSpec::evaluate_unchecked(const double* x, const double* y, std::size_t dim) const noexcept {
  switch (family_) {
    case KernelFamily::gaussian: {
      double sq = 0.0;
      for (std::size_t i = 0; i < dim; ++i) {
        const double d = x[i] - y[i];
        sq += d * d;
      }
      return std::exp(-sq * inv_two_l2_);
    }
    case KernelFamily::linear: {
      double dot = 0.0;
      for (std::size_t i = 0; i < dim; ++i) dot += x[i] * y[i];
      return dot;
    }
    case KernelFamily::triangle: {
      double prod = 1.0;
      for (std::size_t i = 0; i < dim && prod > 0.0; ++i) {
        prod *= std::max(1.0 - std::abs(x[i] - y[i]), 0.0);
      }
      return prod;
    }
  }
  return 0.0;
}

double KernelSpec::operator()(Point x, Point y) const {
  if (x.size() != y.size()) {
    throw ShapeError("kernel evaluation: dimension mismatch (" + std::to_string(x.size()) + " vs " +
                     std::to_string(y.size()) + ")");
  }
  return evaluate_unchecked(x.data(), y.data(), x.size());
}

double eval_kernel(const KernelSpec& spec, Point x, Point y) { return spec(x, y); }

Matrix gram_matrix(const KernelSpec& spec, const Matrix& points, std::size_t threads) {
  const Eigen::Index n = points.rows();
  const auto d = static_cast<std::size_t>(points.cols());
  Matrix k(n, n);
  // Row i fills k(i, j) for j <= i; mirroring happens after all rows finish.
  parallel_for(static_cast<std::size_t>(n), threads, [&](std::size_t ii) {
    const auto i = static_cast<Eigen::Index>(ii);
    const double* xi = points.data() + i * points.cols();
    for (Eigen::Index j = 0; j <= i; ++j) {
      k(i, j) = spec.evaluate_unchecked(xi, points.data() + j * points.cols(), d);
    }
  });
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) k(i, j) = k(j, i);
  }
  return k;
}

Matrix cross_gram(const KernelSpec& spec, const Matrix& a, const Matrix& b, std::size_t threads) {
  if (a.cols() != b.cols()) throw ShapeError("cross gram: feature dimensions differ");
  const auto d = static_cast<std::size_t>(a.cols());
  Matrix k(a.rows(), b.rows());
  parallel_for(static_cast<std::size_t>(a.rows()), threads, [&](std::size_t ii) {
    const auto i = static_cast<Eigen::Index>(ii);
    const double* ai = a.data() + i * a.cols();
    for (Eigen::Index j = 0; j < b.rows(); ++j) {
      k(i, j) = spec.evaluate_unchecked(ai, b.data() + j * b.cols(), d);
    }
  });
  return k;
}

GramBlocks gram_blocks(const KernelSpec& spec, const SampleSet& samples, std::size_t threads) {
  return GramBlocks{gram_matrix(spec, samples.x(), threads), gram_matrix(spec, samples.y(), threads),
                    cross_gram(spec, samples.x(), samples.y(), threads)};
}

Matrix pooled_gram(const KernelSpec& spec, const SampleSet& samples, std::size_t threads) {
  return gram_matrix(spec, samples.pooled(), threads);
}

}  // namespace kts
