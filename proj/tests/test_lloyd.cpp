#include <gtest/gtest.h>

#include <random>

#include "localkmeans/lloyd.hpp"
#include "oracles.hpp"

using namespace localkmeans;

namespace {

Matrix column(std::initializer_list<double> values) {
  Matrix m(values.size(), 1);
  std::size_t i = 0;
  for (double v : values) m(i++, 0) = v;
  return m;
}

}  // namespace

TEST(Assign, NearestCenter) {
  EXPECT_EQ(assign(column({0, 1, 5}), column({0, 4})).labels, (std::vector<std::size_t>{0, 0, 1}));
  EXPECT_EQ(assign(column({7}), column({0, 4, 7})).labels, (std::vector<std::size_t>{2}));
}

TEST(Assign, TiesGoToLowestIndex) {
  EXPECT_EQ(assign(column({2}), column({0, 4})).labels, (std::vector<std::size_t>{0}));
  EXPECT_EQ(assign(column({2}), column({4, 0})).labels, (std::vector<std::size_t>{0}));
}

TEST(Assign, DimensionMismatch) {
  EXPECT_THROW(assign(Matrix(2, 3), Matrix(2, 2)), std::invalid_argument);
  EXPECT_THROW(assign(Matrix(2, 3), Matrix()), std::invalid_argument);
}

TEST(Assign, TranslationInvariant) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto pts = oracle::random_matrix(30, 3, rng);
    const auto ctr = oracle::random_matrix(4, 3, rng);
    Matrix p2 = pts, c2 = ctr;
    const double shift[3] = {0.5, -2.0, 1.0};  // exact binary fractions
    for (std::size_t j = 0; j < p2.rows(); ++j)
      for (std::size_t q = 0; q < 3; ++q) p2(j, q) += shift[q];
    for (std::size_t k = 0; k < c2.rows(); ++k)
      for (std::size_t q = 0; q < 3; ++q) c2(k, q) += shift[q];
    EXPECT_EQ(assign(pts, ctr), assign(p2, c2));
  }
}

TEST(UpdateCenters, MeansAndSizes) {
  const auto prev = ClusterModel::from_centers(column({0, 0}));
  const auto out = update_centers(column({0, 2, 5}), Assignment{{0, 0, 1}}, 2, prev);
  EXPECT_EQ(out.centers, column({1, 5}));
  EXPECT_EQ(out.sizes, (std::vector<std::size_t>{2, 1}));
}

TEST(UpdateCenters, EmptyClusterKeepsPreviousCenter) {
  const auto prev = ClusterModel::from_centers(column({0, 9}));
  const auto out = update_centers(column({1, 3}), Assignment{{0, 0}}, 2, prev);
  EXPECT_EQ(out.centers(1, 0), 9.0);
  EXPECT_EQ(out.sizes[1], 0u);
  EXPECT_EQ(out.centers(0, 0), 2.0);
}

TEST(UpdateCenters, SingletonsReproducePoints) {
  std::mt19937_64 rng(1);
  const auto pts = oracle::random_matrix(4, 3, rng);
  const auto out = update_centers(pts, Assignment{{0, 1, 2, 3}}, 4, ClusterModel::from_centers(Matrix(4, 3)));
  EXPECT_EQ(out.centers, pts);
}

TEST(UpdateCenters, Errors) {
  const auto prev = ClusterModel::from_centers(column({0, 0}));
  EXPECT_THROW(update_centers(column({1}), Assignment{{0}}, 3, prev), std::invalid_argument);
  EXPECT_THROW(update_centers(column({1, 2}), Assignment{{0}}, 2, prev), std::invalid_argument);
}

TEST(LocalObjective, Values) {
  EXPECT_EQ(local_objective(column({0, 4}), column({0, 4})), 0.0);
  EXPECT_EQ(local_objective(column({0, 2}), column({1})), 2.0);
  const double base = local_objective(column({0, 2, 7}), column({1, 6}));
  EXPECT_EQ(local_objective(column({0, 2, 7, 7}), column({1, 6})), base + 1.0);
}

TEST(LloydProperties, StepNeverIncreasesObjectiveAndSizesCoverPoints) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 5 + rng() % 40, k = 1 + rng() % 5, d = 1 + rng() % 4;
    const auto pts = oracle::random_matrix(n, d, rng, 3.0);
    auto model = ClusterModel::from_centers(oracle::random_matrix(k, d, rng, 3.0));
    for (int s = 0; s < 5; ++s) {
      const double before = local_objective(pts, model.centers);
      const auto a = assign(pts, model.centers);
      model = update_centers(pts, a, k, model);
      std::size_t total = 0;
      for (auto c : model.sizes) total += c;
      EXPECT_EQ(total, n);
      EXPECT_LE(local_objective(pts, model.centers), before + 1e-9 * (1.0 + before));
    }
  }
}

TEST(LloydProperties, FixedPointIsStable) {
  // Two well separated groups; after convergence another step changes nothing.
  const auto pts = column({0, 1, 2, 10, 11, 12});
  auto model = ClusterModel::from_centers(column({1, 11}));
  const auto a = assign(pts, model.centers);
  model = update_centers(pts, a, 2, model);
  const auto again = update_centers(pts, assign(pts, model.centers), 2, model);
  EXPECT_EQ(again, model);
  EXPECT_EQ(assign(pts, again.centers), a);
}
