#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "localkmeans/mixture_data.hpp"

using namespace localkmeans;

TEST(GenerateSymmetric2, ZeroNoisePointsAreSignedTheta) {
  const Vector theta{1.0, 0.0};
  const auto data = generate_symmetric2(theta, 0.0, 1, 4, 7);
  ASSERT_EQ(data.num_machines(), 1u);
  ASSERT_EQ(data.points_per_machine(), 4u);
  EXPECT_TRUE(data.symmetric2);
  for (std::size_t j = 0; j < 4; ++j) {
    const int z = data.labels[0][j];
    ASSERT_TRUE(z == 1 || z == -1);
    EXPECT_EQ(data.machines[0](j, 0), z * 1.0);
    EXPECT_EQ(data.machines[0](j, 1), 0.0);
  }
}

TEST(GenerateSymmetric2, SameSeedIsBitIdentical) {
  const Vector theta{0.5, -1.0, 2.0};
  EXPECT_EQ(generate_symmetric2(theta, 0.7, 3, 10, 42), generate_symmetric2(theta, 0.7, 3, 10, 42));
  EXPECT_NE(generate_symmetric2(theta, 0.7, 3, 10, 42), generate_symmetric2(theta, 0.7, 3, 10, 43));
}

TEST(GenerateSymmetric2, NoiseVarianceMatchesSigma) {
  Vector theta(100, 0.0);
  theta[0] = 1.0;
  const auto data = generate_symmetric2(theta, 1.0, 20, 200, 11);
  // Sample variance of the recovered noise w = x - z*theta over all 4000 x 100 coordinates.
  double sum = 0.0, sq = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < 20; ++i)
    for (std::size_t j = 0; j < 200; ++j)
      for (std::size_t q = 0; q < 100; ++q) {
        const double w = data.machines[i](j, q) - data.labels[i][j] * theta[q];
        sum += w;
        sq += w * w;
        ++count;
      }
  const double mean = sum / static_cast<double>(count);
  const double var = sq / static_cast<double>(count) - mean * mean;
  EXPECT_NEAR(var, 1.0, 0.05);
}

TEST(GenerateSymmetric2, RejectsZeroTheta) {
  EXPECT_THROW(generate_symmetric2(Vector{0.0, 0.0}, 1.0, 1, 1, 0), std::invalid_argument);
}

namespace {

MixtureSpec orthonormal_spec(std::size_t k, std::size_t d, double sigma, std::size_t m, std::size_t n) {
  MixtureSpec s;
  s.dimension = d;
  s.centers = orthonormal_centers(k, d);
  s.noise_std = sigma;
  s.num_machines = m;
  s.points_per_machine = n;
  return s;
}

}  // namespace

TEST(GenerateKMixture, ZeroNoiseOrthonormalCenters) {
  const auto spec = orthonormal_spec(3, 3, 0.0, 2, 10);
  const auto data = generate_kmixture(spec, 5);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 10; ++j) {
      const auto z = static_cast<std::size_t>(data.labels[i][j]);
      for (std::size_t q = 0; q < 3; ++q) EXPECT_EQ(data.machines[i](j, q), spec.centers(z, q));
    }
  // Points from different clusters sit sqrt(2) apart.
  for (std::size_t a = 0; a < 10; ++a)
    for (std::size_t b = 0; b < 10; ++b)
      if (data.labels[0][a] != data.labels[1][b]) {
        EXPECT_DOUBLE_EQ(std::sqrt(squared_distance(data.machines[0].row(a), data.machines[1].row(b))),
                         std::sqrt(2.0));
      }
}

TEST(GenerateKMixture, FullScaleShape) {
  const auto spec = orthonormal_spec(10, 100, 0.15, 20, 200);
  const auto data = generate_kmixture(spec, 1);
  EXPECT_EQ(data.num_machines(), 20u);
  EXPECT_EQ(data.total_points(), 4000u);
  EXPECT_EQ(data.dim(), 100u);
  EXPECT_NO_THROW(data.validate(10));
}

TEST(GenerateKMixture, UniformWeightsGiveBalancedClusters) {
  // mn = 10000, K = 4: each fraction within 0.25 +- 4 binomial standard deviations (0.0173).
  const auto data = generate_kmixture(orthonormal_spec(4, 4, 0.1, 10, 1000), 99);
  std::vector<double> counts(4, 0.0);
  for (const auto& block : data.labels)
    for (int z : block) counts[static_cast<std::size_t>(z)] += 1.0;
  for (double c : counts) {
    EXPECT_GE(c / 10000.0, 0.22);
    EXPECT_LE(c / 10000.0, 0.28);
  }
}

TEST(GenerateKMixture, MachineStreamsAreIndependentOfLayout) {
  // Machine 1's block depends only on (seed, 1), not on how many machines follow it.
  const auto a = generate_kmixture(orthonormal_spec(3, 5, 0.3, 2, 8), 17);
  const auto b = generate_kmixture(orthonormal_spec(3, 5, 0.3, 4, 8), 17);
  EXPECT_EQ(a.machines[1], b.machines[1]);
  EXPECT_EQ(a.labels[1], b.labels[1]);
}

TEST(GenerateKMixture, RejectsBadWeights) {
  auto spec = orthonormal_spec(2, 2, 0.1, 1, 5);
  spec.cluster_weights = {0.5, 0.6};
  EXPECT_THROW(generate_kmixture(spec, 0), std::invalid_argument);
  spec.cluster_weights = {0.25, 0.75};
  EXPECT_NO_THROW(generate_kmixture(spec, 0));
}

TEST(SigmaForSnr, InvertsTheTwoClusterSnr) {
  EXPECT_NEAR(sigma_for_snr(3.01, 1.0, 100, 20, 200), 0.300168738506728, 1e-12);
  EXPECT_NEAR(sigma_for_snr(6.02, 1.0, 100, 20, 200), 0.150084369253364, 1e-12);
  EXPECT_NEAR(sigma_for_snr(2.5, 2.5 * std::sqrt(1.0 + 9.0 * 100 / 4000.0), 100, 20, 200), 1.0, 1e-15);
}

TEST(SigmaForSnr, RoundTripsThroughSnr) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.1, 20.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double r = u(rng), norm_theta = u(rng);
    const std::size_t d = 1 + rng() % 300, m = 1 + rng() % 50, n = 1 + rng() % 500;
    const double sigma = sigma_for_snr(r, norm_theta, d, m, n);
    EXPECT_NEAR(snr_2cluster(norm_theta, sigma, d, m, n), r, 1e-12 * r);
  }
}

TEST(SeparationReport, OrthonormalCenters) {
  auto spec = orthonormal_spec(4, 6, 0.2, 3, 50);
  spec.centers = orthonormal_centers(4, 6, 3.0);
  const auto rep = separation_report(generate_kmixture(spec, 2), spec);
  EXPECT_DOUBLE_EQ(rep.Gamma, 3.0 * std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(rep.lambda, 1.0);
  EXPECT_FALSE(rep.r.has_value());
}

TEST(SeparationReport, TwoClusterSnrFormula) {
  // K=2, d=100, m=10, n=100, Gamma=2, sigma=1, exactly balanced labels.
  MixtureSpec spec;
  spec.dimension = 100;
  spec.centers = Matrix(2, 100);
  spec.centers(0, 0) = 1.0;
  spec.centers(1, 0) = -1.0;
  spec.noise_std = 1.0;
  spec.num_machines = 10;
  spec.points_per_machine = 100;
  DistributedDataset data;
  for (std::size_t i = 0; i < 10; ++i) {
    data.machines.emplace_back(100, 100);
    std::vector<int> z(100);
    for (std::size_t j = 0; j < 100; ++j) z[j] = static_cast<int>(j % 2);
    data.labels.push_back(z);
  }
  const auto rep = separation_report(data, spec);
  EXPECT_DOUBLE_EQ(rep.alpha, 0.5);
  EXPECT_DOUBLE_EQ(rep.beta, 0.1);
  EXPECT_NEAR(rep.r_K, 1.2909944487358056, 1e-12);
  ASSERT_TRUE(rep.r.has_value());
  EXPECT_NEAR(*rep.r, 1.0 / std::sqrt(1.9), 1e-12);
}

TEST(SeparationReport, ClusterOnOneMachineGivesZeroBeta) {
  MixtureSpec spec = orthonormal_spec(2, 2, 0.1, 2, 2);
  DistributedDataset data;
  data.machines = {Matrix(2, 2), Matrix(2, 2)};
  data.labels = {{0, 1}, {0, 0}};
  EXPECT_DOUBLE_EQ(separation_report(data, spec).beta, 0.0);

  data.labels = {{0, 0}, {0, 0}};
  EXPECT_THROW(separation_report(data, spec), std::domain_error);
}

TEST(SeparationReport, BalanceBoundsHoldOnRandomLabelings) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t k = 2 + rng() % 4, m = 1 + rng() % 5, n = 5 + rng() % 20;
    auto spec = orthonormal_spec(k, k, 0.5, m, n);
    auto data = generate_kmixture(spec, rng());
    SeparationReport rep;
    try {
      rep = separation_report(data, spec);
    } catch (const std::domain_error&) {
      continue;
    }
    EXPECT_LE(rep.alpha * static_cast<double>(k), 1.0 + 1e-12);
    EXPECT_LE(rep.beta * static_cast<double>(m), 1.0 + 1e-12);
    EXPECT_GE(rep.lambda, 1.0);
  }
}

TEST(LoadCsv, ParsesLabelsToContiguousIndices) {
  std::istringstream in("0,0,a\n1,1,b\n2,2,a\n");
  const auto out = load_csv_dataset(in, CsvOptions{2, false});
  EXPECT_EQ(out.points.rows(), 3u);
  EXPECT_EQ(out.points.cols(), 2u);
  EXPECT_EQ(out.num_classes, 2u);
  EXPECT_EQ(out.labels, (std::vector<int>{0, 1, 0}));
  EXPECT_EQ(out.points(2, 1), 2.0);
}

TEST(LoadCsv, NumericLabelsSortNumerically) {
  std::istringstream in("h1,h2,class\n1.5,2,10\n3,4,9\n5,6,10\n");
  const auto out = load_csv_dataset(in, CsvOptions{2, true});
  EXPECT_EQ(out.labels, (std::vector<int>{1, 0, 1}));
}

TEST(LoadCsv, ErrorsCarryRowNumbers) {
  std::istringstream ragged("1,2\n3\n");
  try {
    load_csv_dataset(ragged);
    FAIL() << "ragged rows accepted";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.row(), 2u);
  }
  std::istringstream text("1,2\n3,x\n");
  EXPECT_THROW(load_csv_dataset(text), ParseError);
  std::istringstream empty("");
  EXPECT_THROW(load_csv_dataset(empty), ParseError);
  std::istringstream bad_col("1,2\n");
  EXPECT_THROW(load_csv_dataset(bad_col, CsvOptions{5, false}), ParseError);
}

TEST(LoadCsv, MissingFileIsIoError) {
  EXPECT_THROW(load_csv_dataset(std::string("/nonexistent/points.csv")), IoError);
}

TEST(Partition, FloorsAndDropsRemainder) {
  Matrix pts(10, 1);
  std::vector<int> labels(10);
  for (std::size_t j = 0; j < 10; ++j) {
    pts(j, 0) = static_cast<double>(j);
    labels[j] = static_cast<int>(j % 2);
  }
  const auto data = partition(pts, labels, 3, 4);
  EXPECT_EQ(data.num_machines(), 3u);
  EXPECT_EQ(data.points_per_machine(), 3u);
  std::multiset<double> seen;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) {
      const double v = data.machines[i](j, 0);
      seen.insert(v);
      EXPECT_EQ(data.labels[i][j], static_cast<int>(v) % 2);
    }
  EXPECT_EQ(seen.size(), 9u);
  EXPECT_EQ(std::set<double>(seen.begin(), seen.end()).size(), 9u);
  EXPECT_EQ(partition(pts, labels, 3, 4), data);
}

TEST(Partition, PostureLayout) {
  // 78095 points over 100 machines keeps floor(78095/100) = 780 per machine.
  Matrix pts(78095, 38);
  const auto data = partition(pts, {}, 100, 1);
  EXPECT_EQ(data.points_per_machine(), 780u);
  EXPECT_EQ(data.total_points(), 78000u);
  EXPECT_FALSE(data.has_labels());
}

TEST(Partition, SingleMachineKeepsEverything) {
  Matrix pts(5, 1);
  for (std::size_t j = 0; j < 5; ++j) pts(j, 0) = static_cast<double>(j);
  const auto data = partition(pts, {}, 1, 9);
  std::multiset<double> seen;
  for (std::size_t j = 0; j < 5; ++j) seen.insert(data.machines[0](j, 0));
  EXPECT_EQ(seen, (std::multiset<double>{0, 1, 2, 3, 4}));
  EXPECT_THROW(partition(pts, {}, 6, 0), std::invalid_argument);
}
