#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "kts/estimators.hpp"
#include "kts/kernels.hpp"
#include "kts/types.hpp"

namespace kts {

// A distribution with finite support: rows of `support` carry the masses in
// `probs`. Probabilities are nonnegative and sum to 1 within 1e-12; support
// rows are distinct.
class DiscreteDistribution {
 public:
  DiscreteDistribution(Matrix support, std::vector<double> probs);

  static DiscreteDistribution uniform(Matrix support);
  static DiscreteDistribution point_mass(Point at);

  const Matrix& support() const noexcept { return support_; }
  const std::vector<double>& probs() const noexcept { return probs_; }
  std::size_t size() const noexcept { return probs_.size(); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(support_.cols()); }

  // Row-major stack of `count` draws.
  Matrix sample(std::size_t count, std::uint64_t seed, std::uint64_t stream = 0) const;

 private:
  Matrix support_;
  std::vector<double> probs_;
};

// Exact population quantities for a pair (P, Q) under a kernel, with
// Delta = mu_P - mu_Q:
//
//   mmd_sq    |mu_P - mu_Q|^2
//   zeta_x    <Delta, C_P Delta> = Var_{X~P} Delta(X)
//   zeta_y    <Delta, C_Q Delta> = Var_{Y~Q} Delta(Y)
//   hs_pp     |C_P|_HS^2
//   hs_qq     |C_Q|_HS^2
//   hs_pq     <C_P, C_Q>_HS
//   mu_cp_mu  <mu_P, C_P mu_P> = Var_{X~P} mu_P(X)
//   mu_cq_mu  <mu_Q, C_Q mu_Q> = Var_{Y~Q} mu_Q(Y)
struct PopulationFunctionals {
  double mmd_sq = 0.0;
  double zeta_x = 0.0;
  double zeta_y = 0.0;
  double hs_pp = 0.0;
  double hs_qq = 0.0;
  double hs_pq = 0.0;
  double mu_cp_mu = 0.0;
  double mu_cq_mu = 0.0;
};

// Every functional is a finite sum of kernel evaluations on support points.
// The HS terms use doubly-centred kernels:
//   |C_P|^2   = E_{X,X'~P} [k(X,X') - mu_P(X) - mu_P(X') + E k(X,X')]^2
//   <C_P,C_Q> = E_{X~P,Y~Q} [k(X,Y) - mu_Q(X) - mu_P(Y) + <mu_P,mu_Q>]^2
PopulationFunctionals population_functionals(const DiscreteDistribution& p, const DiscreteDistribution& q,
                                             const KernelSpec& spec);

// <k(point, .), C_P k(point, .)> = Var_{X~P} k(point, X).
double covariance_quadratic_form(const DiscreteDistribution& p, const KernelSpec& spec, Point point);

enum class Degeneracy { non_degenerate, first_order, infinitely_degenerate };

std::string_view to_string(Degeneracy d);

inline constexpr double kDefaultDegeneracyTolerance = 1e-10;

// infinitely_degenerate: every covariance functional <= tol (C_P = C_Q = 0).
// first_order: zeta_x, zeta_y <= tol but some covariance functional > tol.
Degeneracy classify_degeneracy(const PopulationFunctionals& f, double tol = kDefaultDegeneracyTolerance);

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

inline constexpr std::uint64_t kDefaultEnumerationCap = 10'000'000;

// Exact mean and variance of an estimator over P^nX x Q^nY by enumerating
// every sample tuple (mixed-radix order) with its product probability.
// Throws EnumerationTooLargeError when |supp P|^nX |supp Q|^nY > cap and
// PairingError for kind == ustat with nX != nY.
Moments brute_force_moments(const DiscreteDistribution& p, const DiscreteDistribution& q,
                            const KernelSpec& spec, std::size_t nx, std::size_t ny, EstimatorKind kind,
                            std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace kts
