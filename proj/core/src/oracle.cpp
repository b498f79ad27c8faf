#include "kts/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <utility>

#include "kts/error.hpp"
#include "kts/random.hpp"
#include "kts/summation.hpp"

namespace kts {

DiscreteDistribution::DiscreteDistribution(Matrix support, std::vector<double> probs)
    : support_(std::move(support)), probs_(std::move(probs)) {
  if (support_.rows() == 0 || support_.cols() == 0) throw DistributionError("empty support");
  if (static_cast<std::size_t>(support_.rows()) != probs_.size()) {
    throw DistributionError("support has " + std::to_string(support_.rows()) + " points but " +
                            std::to_string(probs_.size()) + " probabilities");
  }
  CompensatedSum total;
  for (double p : probs_) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw DistributionError("probabilities must be finite and >= 0");
    total.add(p);
  }
  if (std::abs(total.value() - 1.0) > 1e-12) throw DistributionError("probabilities must sum to 1");
  for (Eigen::Index i = 0; i < support_.rows(); ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      if (support_.row(i) == support_.row(j)) throw DistributionError("support rows must be distinct");
    }
  }
}

DiscreteDistribution DiscreteDistribution::uniform(Matrix support) {
  const auto m = static_cast<std::size_t>(support.rows());
  if (m == 0) throw DistributionError("empty support");
  return DiscreteDistribution(std::move(support), std::vector<double>(m, 1.0 / static_cast<double>(m)));
}

DiscreteDistribution DiscreteDistribution::point_mass(Point at) {
  Matrix s(1, static_cast<Eigen::Index>(at.size()));
  for (std::size_t i = 0; i < at.size(); ++i) s(0, static_cast<Eigen::Index>(i)) = at[i];
  return DiscreteDistribution(std::move(s), {1.0});
}

Matrix DiscreteDistribution::sample(std::size_t count, std::uint64_t seed, std::uint64_t stream) const {
  Rng rng = make_rng(seed, stream);
  std::discrete_distribution<std::size_t> pick(probs_.begin(), probs_.end());
  Matrix out(static_cast<Eigen::Index>(count), support_.cols());
  for (std::size_t i = 0; i < count; ++i) {
    out.row(static_cast<Eigen::Index>(i)) = support_.row(static_cast<Eigen::Index>(pick(rng)));
  }
  return out;
}

namespace {

using Weights = std::vector<double>;

double weighted_mean(const Vector& f, const Weights& w) {
  CompensatedSum s;
  for (std::size_t i = 0; i < w.size(); ++i) s.add(w[i] * f[static_cast<Eigen::Index>(i)]);
  return s.value();
}

// Two-pass weighted variance; never negative.
double weighted_variance(const Vector& f, const Weights& w) {
  const double m = weighted_mean(f, w);
  CompensatedSum s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double d = f[static_cast<Eigen::Index>(i)] - m;
    s.add(w[i] * d * d);
  }
  return s.value();
}

Vector apply(const Matrix& k, const Weights& w) {
  Vector out(k.rows());
  for (Eigen::Index i = 0; i < k.rows(); ++i) {
    CompensatedSum s;
    for (Eigen::Index j = 0; j < k.cols(); ++j) s.add(k(i, j) * w[static_cast<std::size_t>(j)]);
    out[i] = s.value();
  }
  return out;
}

// E_{a~wa, b~wb} [k(a,b) - ra(a) - cb(b) + c]^2
double centred_square_mean(const Matrix& k, const Weights& wa, const Weights& wb, const Vector& ra,
                           const Vector& cb, double c) {
  CompensatedSum s;
  for (Eigen::Index i = 0; i < k.rows(); ++i) {
    for (Eigen::Index j = 0; j < k.cols(); ++j) {
      const double v = k(i, j) - ra[i] - cb[j] + c;
      s.add(wa[static_cast<std::size_t>(i)] * wb[static_cast<std::size_t>(j)] * v * v);
    }
  }
  return s.value();
}

}  // namespace

PopulationFunctionals population_functionals(const DiscreteDistribution& p, const DiscreteDistribution& q,
                                             const KernelSpec& spec) {
  if (p.dim() != q.dim()) throw ShapeError("population functionals: supports differ in dimension");
  const Matrix kpp = gram_matrix(spec, p.support());
  const Matrix kqq = gram_matrix(spec, q.support());
  const Matrix kpq = cross_gram(spec, p.support(), q.support());
  const Weights& wp = p.probs();
  const Weights& wq = q.probs();

  // Mean embeddings evaluated on each support.
  const Vector mu_p_on_p = apply(kpp, wp);
  const Vector mu_q_on_q = apply(kqq, wq);
  const Vector mu_q_on_p = apply(kpq, wq);
  const Matrix kqp = kpq.transpose();
  const Vector mu_p_on_q = apply(kqp, wp);

  const double e_pp = weighted_mean(mu_p_on_p, wp);
  const double e_qq = weighted_mean(mu_q_on_q, wq);
  const double e_pq = weighted_mean(mu_q_on_p, wp);

  PopulationFunctionals f;
  f.mmd_sq = std::max(0.0, e_pp + e_qq - 2.0 * e_pq);
  f.zeta_x = weighted_variance(mu_p_on_p - mu_q_on_p, wp);
  f.zeta_y = weighted_variance(mu_p_on_q - mu_q_on_q, wq);
  f.hs_pp = centred_square_mean(kpp, wp, wp, mu_p_on_p, mu_p_on_p, e_pp);
  f.hs_qq = centred_square_mean(kqq, wq, wq, mu_q_on_q, mu_q_on_q, e_qq);
  f.hs_pq = centred_square_mean(kpq, wp, wq, mu_q_on_p, mu_p_on_q, e_pq);
  f.mu_cp_mu = weighted_variance(mu_p_on_p, wp);
  f.mu_cq_mu = weighted_variance(mu_q_on_q, wq);
  return f;
}

double covariance_quadratic_form(const DiscreteDistribution& p, const KernelSpec& spec, Point point) {
  if (point.size() != p.dim()) throw ShapeError("quadratic form: point dimension mismatch");
  Vector values(static_cast<Eigen::Index>(p.size()));
  for (std::size_t i = 0; i < p.size(); ++i) {
    values[static_cast<Eigen::Index>(i)] = spec(point, row_of(p.support(), static_cast<Eigen::Index>(i)));
  }
  return weighted_variance(values, p.probs());
}

std::string_view to_string(Degeneracy d) {
  switch (d) {
    case Degeneracy::non_degenerate: return "non_degenerate";
    case Degeneracy::first_order: return "first_order";
    case Degeneracy::infinitely_degenerate: return "infinitely_degenerate";
  }
  return "unknown";
}

Degeneracy classify_degeneracy(const PopulationFunctionals& f, double tol) {
  if (!(tol > 0.0)) throw ParameterError("degeneracy tolerance must be > 0");
  const bool all_zero = f.hs_pp <= tol && f.hs_qq <= tol && f.zeta_x <= tol && f.zeta_y <= tol &&
                        f.mu_cp_mu <= tol && f.mu_cq_mu <= tol;
  if (all_zero) return Degeneracy::infinitely_degenerate;
  if (f.zeta_x <= tol && f.zeta_y <= tol) return Degeneracy::first_order;
  return Degeneracy::non_degenerate;
}

namespace {

double checked_tuple_count(std::size_t mp, std::size_t nx, std::size_t mq, std::size_t ny, std::uint64_t cap) {
  const double count = std::pow(static_cast<double>(mp), static_cast<double>(nx)) *
                       std::pow(static_cast<double>(mq), static_cast<double>(ny));
  if (count > static_cast<double>(cap)) {
    throw EnumerationTooLargeError("enumeration of " + std::to_string(count) + " tuples exceeds cap " +
                                   std::to_string(cap));
  }
  return count;
}

// Estimator value for one tuple; g is the Gram matrix of the stacked supports
// [supp P; supp Q], xi/yi index into it.
double tuple_statistic(const Matrix& g, const std::vector<Eigen::Index>& xi, const std::vector<Eigen::Index>& yi,
                       EstimatorKind kind) {
  const std::size_t nx = xi.size();
  const std::size_t ny = yi.size();
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = i + 1; j < nx; ++j) sxx += g(xi[i], xi[j]);
  }
  for (std::size_t i = 0; i < ny; ++i) {
    for (std::size_t j = i + 1; j < ny; ++j) syy += g(yi[i], yi[j]);
  }
  for (std::size_t i = 0; i < nx; ++i) {
    for (std::size_t j = 0; j < ny; ++j) {
      if (kind == EstimatorKind::ustat && i == j) continue;
      sxy += g(xi[i], yi[j]);
    }
  }
  const double fx = static_cast<double>(nx);
  const double fy = static_cast<double>(ny);
  if (kind == EstimatorKind::ustat) return 2.0 * (sxx + syy - sxy) / (fx * (fx - 1.0));
  return 2.0 * sxx / (fx * (fx - 1.0)) + 2.0 * syy / (fy * (fy - 1.0)) - 2.0 * sxy / (fx * fy);
}

// Visits every (x-tuple, y-tuple) in mixed-radix order with its probability.
template <typename Visit>
void enumerate_tuples(const DiscreteDistribution& p, const DiscreteDistribution& q, std::size_t nx,
                      std::size_t ny, Visit&& visit) {
  const auto mp = static_cast<Eigen::Index>(p.size());
  const auto mq = static_cast<Eigen::Index>(q.size());
  std::vector<std::size_t> digits(nx + ny, 0);
  std::vector<Eigen::Index> xi(nx, 0), yi(ny, mp);
  for (;;) {
    double w = 1.0;
    for (std::size_t i = 0; i < nx; ++i) w *= p.probs()[digits[i]];
    for (std::size_t j = 0; j < ny; ++j) w *= q.probs()[digits[nx + j]];
    visit(w, xi, yi);
    std::size_t pos = 0;
    for (; pos < nx + ny; ++pos) {
      const std::size_t radix = pos < nx ? static_cast<std::size_t>(mp) : static_cast<std::size_t>(mq);
      if (++digits[pos] < radix) break;
      digits[pos] = 0;
    }
    if (pos == nx + ny) return;
    for (std::size_t i = 0; i <= pos && i < nx; ++i) xi[i] = static_cast<Eigen::Index>(digits[i]);
    for (std::size_t j = nx; j <= pos && j < nx + ny; ++j) {
      yi[j - nx] = mp + static_cast<Eigen::Index>(digits[j]);
    }
  }
}

}  // namespace

Moments brute_force_moments(const DiscreteDistribution& p, const DiscreteDistribution& q,
                            const KernelSpec& spec, std::size_t nx, std::size_t ny, EstimatorKind kind,
                            std::uint64_t cap) {
  if (p.dim() != q.dim()) throw ShapeError("brute force: supports differ in dimension");
  if (kind == EstimatorKind::ustat && nx != ny) throw PairingError("brute force: ustat needs nX == nY");
  require_estimable(nx, ny);
  checked_tuple_count(p.size(), nx, q.size(), ny, cap);

  Matrix stacked(static_cast<Eigen::Index>(p.size() + q.size()), static_cast<Eigen::Index>(p.dim()));
  stacked.topRows(static_cast<Eigen::Index>(p.size())) = p.support();
  stacked.bottomRows(static_cast<Eigen::Index>(q.size())) = q.support();
  const Matrix g = gram_matrix(spec, stacked);

  CompensatedSum first;
  enumerate_tuples(p, q, nx, ny, [&](double w, const auto& xi, const auto& yi) {
    first.add(w * tuple_statistic(g, xi, yi, kind));
  });
  const double mean = first.value();
  CompensatedSum second;
  enumerate_tuples(p, q, nx, ny, [&](double w, const auto& xi, const auto& yi) {
    const double d = tuple_statistic(g, xi, yi, kind) - mean;
    second.add(w * d * d);
  });
  return {mean, second.value()};
}

}  // namespace kts
