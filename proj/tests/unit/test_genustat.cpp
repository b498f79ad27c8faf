#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "kts/corpus.hpp"
#include "kts/error.hpp"
#include "kts/genustat.hpp"
#include "kts/variance.hpp"
#include "support.hpp"

namespace kts {
namespace {

using testing::column;

GenUSpec one_sample(GenUKernel h) { return GenUSpec{{2}, std::move(h)}; }

TEST(GenU, OneSampleExamples) {
  const Matrix ones = column({1, 1, 1});
  const Matrix groups1[] = {ones};
  EXPECT_EQ(gen_u_evaluate(one_sample([](std::span<const Point> a) { return a[0][0] * a[1][0] - 1; }), groups1), 0.0);
  const Matrix groups2[] = {column({0, 1, 2})};
  const auto sq = [](std::span<const Point> a) { return (a[0][0] - a[1][0]) * (a[0][0] - a[1][0]); };
  EXPECT_DOUBLE_EQ(gen_u_evaluate(one_sample(sq), groups2), 2.0);
}

TEST(GenU, Errors) {
  const Matrix groups[] = {column({1.0})};
  EXPECT_THROW(gen_u_evaluate(one_sample([](std::span<const Point>) { return 0.0; }), groups),
               InsufficientSamplesError);
  const Matrix big[] = {Matrix::Zero(5000, 1)};
  EXPECT_THROW(gen_u_evaluate(one_sample([](std::span<const Point>) { return 0.0; }), big, 1000),
               EnumerationTooLargeError);
}

TEST(GenU, MmdKernelIsBlockSymmetric) {
  const GenUSpec spec = mmd_genu_spec(KernelSpec::gaussian(0.8));
  std::mt19937_64 rng(2);
  std::normal_distribution<double> z;
  for (int t = 0; t < 50; ++t) {
    double v[4] = {z(rng), z(rng), z(rng), z(rng)};
    const Point a[] = {Point(&v[0], 1), Point(&v[1], 1), Point(&v[2], 1), Point(&v[3], 1)};
    const Point b[] = {a[1], a[0], a[2], a[3]};
    const Point c[] = {a[0], a[1], a[3], a[2]};
    EXPECT_NEAR(spec.h(a), spec.h(b), 1e-15);
    EXPECT_NEAR(spec.h(a), spec.h(c), 1e-15);
  }
}

TEST(SenCoefficient, RecoversOrderTwoFirstTerm) {
  const std::size_t m[] = {2};
  for (std::size_t n = 2; n <= 10; ++n) {
    const std::size_t d1[] = {1}, d2[] = {2}, sizes[] = {n};
    EXPECT_NEAR(sen_coefficient(m, d1, sizes), 4.0 * (n - 2.0) / (n * (n - 1.0)), 1e-15);
    EXPECT_NEAR(sen_coefficient(m, d2, sizes), 2.0 / (n * (n - 1.0)), 1e-15);
  }
}

TEST(SenVariance, AllZeroAndIncomplete) {
  const GenUSpec spec = mmd_genu_spec(KernelSpec::linear());
  ZetaTable t({2, 2});
  for (const auto& d : t.all_depths()) t.set(d, 0.0);
  const std::size_t sizes[] = {3, 5};
  EXPECT_EQ(sen_variance(spec, t, sizes), 0.0);
  ZetaTable partial({2, 2});
  partial.set({1, 0}, 0.1);
  EXPECT_THROW(sen_variance(spec, partial, sizes), IncompleteTableError);
}

TEST(MmdZetaTable, IdentityAndCrossModuleAgreement) {
  for (std::size_t i = 0; i < 100; ++i) {
    const CorpusInstance c = make_corpus_instance(8, i);
    const PopulationFunctionals f = population_functionals(c.p, c.q, c.kernel);
    const ZetaTable t = mmd_zeta_table(f);
    EXPECT_NEAR(t.at({2, 2}), f.hs_pp + f.hs_qq + f.hs_pq + 2 * (f.zeta_x + f.zeta_y), 1e-14);
    const std::size_t sizes[] = {c.nx, c.ny};
    const double sen = sen_variance(mmd_genu_spec(c.kernel), t, sizes);
    EXPECT_LE(relative_error(sen, *mmd_unbiased_variance(f, c.nx, c.ny).total), 1e-10);
    for (const auto& [depth, value] : t.values()) EXPECT_GE(value, 0.0);
  }
}

TEST(MmdZetaTable, Examples) {
  const auto pm = DiscreteDistribution::point_mass(std::vector<double>{0.0});
  const ZetaTable zero = mmd_zeta_table(population_functionals(pm, pm, KernelSpec::gaussian(1.0)));
  for (const auto& [depth, value] : zero.values()) EXPECT_EQ(value, 0.0);
  EXPECT_EQ(degeneracy_order(zero), std::nullopt);

  const auto t = testing::triangle_fixture();
  const ZetaTable tri = mmd_zeta_table(population_functionals(t.p, t.q, t.kernel));
  EXPECT_EQ(tri.at({1, 0}), 0.0);
  EXPECT_EQ(tri.at({0, 1}), 0.0);
  EXPECT_GT(tri.at({2, 0}), 0.0);
  EXPECT_GT(tri.at({0, 2}), 0.0);
  EXPECT_EQ(degeneracy_order(tri), 1u);
}

TEST(DegeneracyOrder, Cases) {
  const auto p = testing::discrete({0.0, 0.7, 1.9}, {0.2, 0.3, 0.5});
  EXPECT_EQ(degeneracy_order(mmd_zeta_table(population_functionals(p, p, KernelSpec::gaussian(1.0)))), 1u);
  const auto g = testing::gaussian_fixture();
  EXPECT_EQ(degeneracy_order(mmd_zeta_table(population_functionals(g.p, g.q, g.kernel))), 0u);
  ZetaTable incomplete({2, 2});
  EXPECT_THROW(degeneracy_order(incomplete), IncompleteTableError);
}

// Enumerated zeta table through the Sen formula against the enumerated
// variance of the naive generalized U-statistic.
TEST(SenVariance, ExactTableMatchesEnumeratedVariance) {
  for (std::size_t i = 0; i < 30; ++i) {
    const CorpusInstance c = make_corpus_instance(17, i);
    const GenUSpec spec = mmd_genu_spec(c.kernel);
    const DiscreteDistribution dists[] = {c.p, c.q};
    const ZetaTable exact = exact_zeta_table(spec, dists);
    EXPECT_NEAR(exact.at({0, 0}), 0.0, 1e-15);
    const std::size_t sizes[] = {c.nx, c.ny};
    const double brute = brute_force_moments(c.p, c.q, c.kernel, c.nx, c.ny, EstimatorKind::unbiased).variance;
    EXPECT_LE(relative_error(sen_variance(spec, exact, sizes), brute), 1e-10);
  }
}

// One-sample mean preservation: averaging the naive statistic over every
// sample tuple reproduces E h.
TEST(GenU, MeanPreservationByEnumeration) {
  const auto sq = [](std::span<const Point> a) { return (a[0][0] - a[1][0]) * (a[0][0] - a[1][0]); };
  const double support[] = {0.0, 1.0, 3.0};
  const double probs[] = {0.2, 0.5, 0.3};
  double eh = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) eh += probs[i] * probs[j] * (support[i] - support[j]) * (support[i] - support[j]);
  double mean = 0.0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c) {
        const Matrix groups[] = {column({support[a], support[b], support[c]})};
        mean += probs[a] * probs[b] * probs[c] * gen_u_evaluate(one_sample(sq), groups);
      }
  EXPECT_NEAR(mean, eh, 1e-14);
}

// First-order degenerate: n^2 Var converges to its limit at proportional
// sizes nY = 2 nX, with the error shrinking at every doubling.
TEST(SenVariance, FirstOrderRate) {
  const auto t = testing::triangle_fixture();
  const PopulationFunctionals f = population_functionals(t.p, t.q, t.kernel);
  const ZetaTable table = mmd_zeta_table(f);
  const GenUSpec spec = mmd_genu_spec(t.kernel);
  const double limit = 2 * f.hs_pp + f.hs_qq / 2 + 2 * f.hs_pq;
  double previous = std::numeric_limits<double>::infinity();
  for (std::size_t n : {4u, 8u, 16u, 32u}) {
    const std::size_t sizes[] = {n, 2 * n};
    const double err = std::abs(n * n * sen_variance(spec, table, sizes) - limit);
    EXPECT_LT(err, previous);
    EXPECT_LT(err, limit * 2.0 / n);
    previous = err;
  }
}

}  // namespace
}  // namespace kts
