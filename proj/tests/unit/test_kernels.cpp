#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "kts/error.hpp"
#include "kts/kernels.hpp"
#include "kts/samples.hpp"
#include "support.hpp"

namespace kts {
namespace {

using testing::column;
using testing::random_matrix;

double eval1(const KernelSpec& k, double a, double b) {
  const double x[] = {a};
  const double y[] = {b};
  return k(Point(x), Point(y));
}

TEST(Kernels, PointValues) {
  EXPECT_EQ(eval1(KernelSpec::gaussian(1.0), 0.0, 0.0), 1.0);
  EXPECT_EQ(eval1(KernelSpec::triangle(), 1.0, 3.0), 0.0);
  EXPECT_EQ(eval1(KernelSpec::linear(), 2.0, 3.0), 6.0);
  EXPECT_DOUBLE_EQ(eval1(KernelSpec::gaussian(2.0), 0.0, 2.0), std::exp(-0.5));
  EXPECT_DOUBLE_EQ(eval1(KernelSpec::triangle(), 0.25, 1.0), 0.25);
}

TEST(Kernels, TriangleIsProductAcrossCoordinates) {
  const double x[] = {0.0, 0.0};
  const double y[] = {0.5, 0.25};
  EXPECT_DOUBLE_EQ(KernelSpec::triangle()(Point(x), Point(y)), 0.5 * 0.75);
}

TEST(Kernels, ParameterValidation) {
  EXPECT_THROW(KernelSpec::gaussian(0.0), ParameterError);
  EXPECT_THROW(KernelSpec::gaussian(-1.0), ParameterError);
  EXPECT_THROW(KernelSpec::gaussian(std::numeric_limits<double>::quiet_NaN()), ParameterError);
  EXPECT_THROW(KernelSpec::make(KernelFamily::linear, {{"lengthscale", 1.0}}), ParameterError);
  EXPECT_THROW(KernelSpec::make(KernelFamily::triangle, {{"width", 1.0}}), ParameterError);
  EXPECT_THROW(KernelSpec::make(KernelFamily::gaussian, {}), ParameterError);
  EXPECT_THROW(KernelSpec::make(KernelFamily::gaussian, {{"lengthscale", 1.0}, {"extra", 2.0}}), ParameterError);
  EXPECT_THROW(KernelSpec::linear().lengthscale(), ParameterError);
  EXPECT_THROW(kernel_family_from_string("rbf"), ParameterError);
}

TEST(Kernels, DimensionMismatch) {
  const double x[] = {0.0, 1.0};
  const double y[] = {0.0};
  EXPECT_THROW(KernelSpec::gaussian(1.0)(Point(x), Point(y)), ShapeError);
}

TEST(Kernels, FamilyNamesRoundTrip) {
  for (auto f : {KernelFamily::gaussian, KernelFamily::linear, KernelFamily::triangle}) {
    EXPECT_EQ(kernel_family_from_string(to_string(f)), f);
  }
}

TEST(Kernels, SupDiagonal) {
  EXPECT_EQ(KernelSpec::gaussian(3.0).sup_diagonal(), 1.0);
  EXPECT_EQ(KernelSpec::triangle().sup_diagonal(), 1.0);
  EXPECT_TRUE(std::isinf(KernelSpec::linear().sup_diagonal()));
}

TEST(GramBlocks, LinearHandValues) {
  const SampleSet s(column({1, 2}), column({3, 5}));
  const GramBlocks b = gram_blocks(KernelSpec::linear(), s);
  Matrix xx(2, 2), xy(2, 2), yy(2, 2);
  xx << 1, 2, 2, 4;
  xy << 3, 5, 6, 10;
  yy << 9, 15, 15, 25;
  EXPECT_EQ(b.xx, xx);
  EXPECT_EQ(b.xy, xy);
  EXPECT_EQ(b.yy, yy);
}

TEST(GramBlocks, ConstantDistanceGivesEqualEntries) {
  const SampleSet s(column({0, 1}), column({2, 3}));
  const GramBlocks b = gram_blocks(KernelSpec::gaussian(1.0), s);
  // Pairs at distance 1 within each block.
  EXPECT_EQ(b.xx(0, 1), b.yy(0, 1));
  EXPECT_EQ(b.xx(0, 1), b.xy(1, 0));
}

TEST(GramBlocks, SwapTransposesCross) {
  const SampleSet s(random_matrix(7, 3, 1), random_matrix(5, 3, 2));
  for (const auto& k : {KernelSpec::gaussian(0.7), KernelSpec::linear(), KernelSpec::triangle()}) {
    const GramBlocks a = gram_blocks(k, s);
    const GramBlocks b = gram_blocks(k, s.swapped());
    EXPECT_EQ(a.xx, b.yy);
    EXPECT_EQ(a.yy, b.xx);
    EXPECT_EQ(Matrix(a.xy.transpose()), b.xy);
  }
}

TEST(GramBlocks, ExactlySymmetricAndThreadIndependent) {
  const SampleSet s(random_matrix(40, 2, 3), random_matrix(33, 2, 4));
  const KernelSpec k = KernelSpec::gaussian(1.3);
  const GramBlocks one = gram_blocks(k, s, 1);
  const GramBlocks four = gram_blocks(k, s, 4);
  EXPECT_EQ(one.xx, Matrix(one.xx.transpose()));
  EXPECT_EQ(one.yy, Matrix(one.yy.transpose()));
  EXPECT_EQ(one.xx, four.xx);
  EXPECT_EQ(one.xy, four.xy);
  EXPECT_EQ(one.yy, four.yy);
}

TEST(GramBlocks, EmptySampleRejected) {
  EXPECT_THROW(SampleSet(Matrix(0, 1), column({1.0})), ShapeError);
  EXPECT_THROW(SampleSet(random_matrix(3, 2, 1), random_matrix(3, 1, 1)), ShapeError);
}

class PooledGramPsd : public ::testing::TestWithParam<int> {};

TEST_P(PooledGramPsd, EigenvaluesAboveTolerance) {
  const int seed = GetParam();
  const SampleSet s(random_matrix(20, 2, seed), random_matrix(15, 2, seed + 100, 0.5));
  for (const auto& k : {KernelSpec::gaussian(0.5), KernelSpec::linear(), KernelSpec::triangle()}) {
    const Matrix g = pooled_gram(k, s);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Eigen::MatrixXd(g), Eigen::EigenvaluesOnly);
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-8 * g.trace()) << to_string(k.family());
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, PooledGramPsd, ::testing::Range(0, 10));

TEST(Kernels, GaussianTranslationInvariant) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-5, 5);
  const KernelSpec k = KernelSpec::gaussian(1.7);
  for (int t = 0; t < 200; ++t) {
    const double x[] = {u(rng), u(rng)};
    const double y[] = {u(rng), u(rng)};
    const double c = u(rng);
    const double xc[] = {x[0] + c, x[1] + c};
    const double yc[] = {y[0] + c, y[1] + c};
    EXPECT_NEAR(k(Point(x), Point(y)), k(Point(xc), Point(yc)), 1e-14);
  }
}

TEST(Kernels, SymmetricAndBounded) {
  std::mt19937_64 rng(10);
  std::normal_distribution<double> z;
  for (const auto& k : {KernelSpec::gaussian(0.3), KernelSpec::triangle()}) {
    for (int t = 0; t < 200; ++t) {
      const double x[] = {z(rng)};
      const double y[] = {z(rng)};
      const double v = k(Point(x), Point(y));
      EXPECT_EQ(v, k(Point(y), Point(x)));
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
}

}  // namespace
}  // namespace kts
