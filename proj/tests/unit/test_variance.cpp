#include <cmath>

#include <gtest/gtest.h>

#include "kts/corpus.hpp"
#include "kts/error.hpp"
#include "kts/estimators.hpp"
#include "kts/random.hpp"
#include "kts/variance.hpp"
#include "support.hpp"

namespace kts {
namespace {

using testing::column;
using testing::random_matrix;

TEST(UstatVariance, Examples) {
  EXPECT_DOUBLE_EQ(ustat_variance(0.0, 3.0, 7), 2.0 * 3.0 / 42.0);
  EXPECT_DOUBLE_EQ(ustat_variance(5.0, 3.0, 2), 3.0);
  EXPECT_THROW(ustat_variance(1.0, 1.0, 1), ParameterError);
  EXPECT_THROW(ustat_variance(-1.0, 1.0, 4), ParameterError);
}

// Triangle example: h = k(x,x') + k(y,y') - k(x,y') - k(x',y) equals
// 1{x = x'} + 1{y = y'} for supports {1,2}, {3,4}, so Var h = 1/2 and the
// conditional mean is constant.
TEST(UstatVariance, TriangleExampleFromKernelMoments) {
  for (std::size_t n = 2; n <= 6; ++n) {
    EXPECT_NEAR(ustat_variance(0.0, 0.5, n), 1.0 / (n * (n - 1.0)), 1e-15);
  }
}

TEST(MmdUstatVariance, Examples) {
  const auto pm = DiscreteDistribution::point_mass(std::vector<double>{1.0});
  EXPECT_EQ(mmd_ustat_variance(population_functionals(pm, pm, KernelSpec::gaussian(1.0)), 5), 0.0);
  const auto t = testing::triangle_fixture();
  const PopulationFunctionals f = population_functionals(t.p, t.q, t.kernel);
  EXPECT_NEAR(mmd_ustat_variance(f, 3), 1.0 / 6.0, 1e-15);
  EXPECT_THROW(mmd_ustat_variance(f, 1), ParameterError);
}

TEST(MmdUnbiasedVariance, FrozenEnumerationValues) {
  const auto g = testing::gaussian_fixture();
  const PopulationFunctionals f = population_functionals(g.p, g.q, g.kernel);
  EXPECT_NEAR(*mmd_unbiased_variance(f, 3, 4).total, 0.10797892993333168405, 1e-15);
  EXPECT_NEAR(*mmd_unbiased_variance(f, 3, 2).total, 0.2725125425464764562, 1e-15);
  const auto l = testing::linear_fixture();
  EXPECT_NEAR(*mmd_unbiased_variance(population_functionals(l.p, l.q, l.kernel), 3, 2).total, 16.0 / 3.0, 1e-14);
  EXPECT_NEAR(*mmd_unbiased_variance(population_functionals(l.p, l.q, l.kernel), 3, 4).total, 19.0 / 6.0, 1e-14);
}

TEST(MmdUnbiasedVariance, ZeroFunctionals) {
  const VarianceReport r = mmd_unbiased_variance(PopulationFunctionals{}, 4, 9);
  EXPECT_EQ(*r.total, 0.0);
  EXPECT_EQ(r.leading, 0.0);
  EXPECT_THROW(mmd_unbiased_variance(PopulationFunctionals{}, 1, 9), ParameterError);
}

TEST(MmdUnbiasedVariance, MatchesPairedFormWithoutCrossCovariance) {
  PopulationFunctionals f;
  f.zeta_x = 0.3;
  f.zeta_y = 0.2;
  f.hs_pp = 0.5;
  f.hs_qq = 0.7;
  for (std::size_t n : {2u, 5u, 50u, 5000u}) {
    EXPECT_NEAR(*mmd_unbiased_variance(f, n, n).total / mmd_ustat_variance(f, n), 1.0, 1e-14);
  }
}

TEST(MmdUnbiasedVariance, CorpusAgreesWithEnumeration) {
  for (std::size_t i = 0; i < 200; ++i) {
    const CorpusInstance c = make_corpus_instance(21, i);
    const PopulationFunctionals f = population_functionals(c.p, c.q, c.kernel);
    const double brute = brute_force_moments(c.p, c.q, c.kernel, c.nx, c.ny, EstimatorKind::unbiased).variance;
    const VarianceReport r = mmd_unbiased_variance(f, c.nx, c.ny);
    EXPECT_LE(relative_error(*r.total, brute), 1e-10) << i;
    EXPECT_LE(r.leading, *r.total + 1e-12);
    if (c.nx == c.ny) {
      const double paired = brute_force_moments(c.p, c.q, c.kernel, c.nx, c.nx, EstimatorKind::ustat).variance;
      EXPECT_LE(relative_error(mmd_ustat_variance(f, c.nx), paired), 1e-10) << i;
    }
  }
}

TEST(MmdUnbiasedVariance, DominatesPairedEstimatorAtEqualSizes) {
  std::size_t checked = 0;
  for (std::size_t i = 0; i < 300; ++i) {
    const CorpusInstance c = make_corpus_instance(5, i);
    const PopulationFunctionals f = population_functionals(c.p, c.q, c.kernel);
    if (f.hs_pq <= 1e-8) continue;
    for (std::size_t n = 2; n <= 6; ++n) {
      EXPECT_LT(*mmd_unbiased_variance(f, n, n).total, mmd_ustat_variance(f, n));
    }
    ++checked;
  }
  EXPECT_GT(checked, 100u);
}

TEST(MmdUnbiasedVariance, FirstOrderDegenerateRate) {
  const auto t = testing::triangle_fixture();
  const PopulationFunctionals f = population_functionals(t.p, t.q, t.kernel);
  ASSERT_EQ(classify_degeneracy(f), Degeneracy::first_order);
  const double base = 2.0 * mmd_ustat_variance(f, 2);
  for (std::size_t n = 2; n <= 64; n *= 2) {
    // n (n - 1) Var is exactly constant; n^2 Var differs by n / (n - 1).
    EXPECT_NEAR(n * (n - 1.0) * mmd_ustat_variance(f, n), base, 1e-14);
    EXPECT_EQ(mmd_unbiased_variance(f, n, n + 3).leading, 0.0);
  }
}

TEST(PluginZetas, ConstantKernelAndSinglePoint) {
  const SampleSet same(column({0.5, 0.5, 0.5}), column({0.5, 0.5}));
  const PluginZetas z = plugin_zetas(gram_blocks(KernelSpec::triangle(), same));
  EXPECT_EQ(z.x, 0.0);
  EXPECT_EQ(z.y, 0.0);
  const SampleSet one(column({0.1}), column({0.5, 2.0, 3.0}));
  EXPECT_EQ(plugin_zetas(gram_blocks(KernelSpec::gaussian(1.0), one)).x, 0.0);
}

// Direct transcription: a_i = mean_j Kxx(i, j), b_i = mean_j Kxy(i, j),
// zeta_x = mean (a - b)^2 - (mean (a - b))^2.
TEST(PluginZetas, MatchesDirectFormula) {
  const SampleSet s(random_matrix(13, 2, 1), random_matrix(9, 2, 2, 0.7));
  const GramBlocks b = gram_blocks(KernelSpec::gaussian(1.0), s);
  auto centred_var = [](const Eigen::VectorXd& v) { return (v.array() - v.mean()).square().mean(); };
  const Eigen::VectorXd dx = b.xx.rowwise().mean() - b.xy.rowwise().mean();
  const Eigen::VectorXd dy = b.yy.rowwise().mean() - b.xy.colwise().mean().transpose();
  const PluginZetas z = plugin_zetas(b);
  EXPECT_NEAR(z.x, centred_var(dx), 1e-15);
  EXPECT_NEAR(z.y, centred_var(dy), 1e-15);
  const PluginZetas streamed = plugin_zetas_streaming(KernelSpec::gaussian(1.0), s);
  EXPECT_NEAR(streamed.x, z.x, 1e-15);
  EXPECT_NEAR(streamed.y, z.y, 1e-15);
}

TEST(PluginZetas, InvariantUnderWithinGroupPermutation) {
  const Matrix x = random_matrix(15, 1, 3), y = random_matrix(11, 1, 4, 1.0);
  const PluginZetas a = plugin_zetas(gram_blocks(KernelSpec::gaussian(1.0), SampleSet(x, y)));
  Matrix xr = x.colwise().reverse(), yr = y.colwise().reverse();
  const PluginZetas b = plugin_zetas(gram_blocks(KernelSpec::gaussian(1.0), SampleSet(xr, yr)));
  EXPECT_NEAR(a.x, b.x, 1e-15);
  EXPECT_NEAR(a.y, b.y, 1e-15);
}

TEST(SigmaHat, Examples) {
  EXPECT_DOUBLE_EQ(sigma_hat(0.3, 0.2, 10, 10), std::sqrt(4 * 0.5));
  EXPECT_DOUBLE_EQ(sigma_hat(1.0, 0.0, 100, 25), 1.0);
  EXPECT_EQ(sigma_hat(0.0, 0.0, 3, 7), 0.0);
  EXPECT_EQ(sigma_hat(-1e-18, 0.0, 3, 7), 0.0);
  const ScalingRatios r = scaling_ratios(40, 10);
  EXPECT_DOUBLE_EQ(r.x, 0.25);
  EXPECT_DOUBLE_EQ(r.y, 1.0);
}

TEST(PluginVarianceReport, LeavesTotalEmpty) {
  const SampleSet s(random_matrix(20, 1, 5), random_matrix(30, 1, 6, 1.0));
  const VarianceReport r = plugin_variance_report(gram_blocks(KernelSpec::gaussian(1.0), s));
  EXPECT_FALSE(r.total.has_value());
  EXPECT_NEAR(r.leading, 4 * r.zeta_x / 20 + 4 * r.zeta_y / 30, 1e-15);
  EXPECT_NEAR(r.sigma, sigma_hat(r.zeta_x, r.zeta_y, 20, 30), 1e-15);
}

}  // namespace
}  // namespace kts
