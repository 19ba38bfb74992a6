#pragma once

// Initial models: distributed k-means++ (machine first, then point within the
// machine) and the perturbed-truth initializer.

#include <optional>

#include "localkmeans/lloyd.hpp"
#include "localkmeans/mixture_data.hpp"

namespace localkmeans {

// How a point's distance to the chosen set becomes its sampling score.
enum class SeedScore { squared, plain };

// Score of every point: 1 while nothing is chosen, otherwise its distance
// (squared by default) to the nearest chosen center.
inline std::vector<std::vector<double>> seeding_scores(const DistributedDataset& data, const Matrix& chosen,
                                                       SeedScore kind = SeedScore::squared) {
  std::vector<std::vector<double>> scores(data.num_machines());
  for (std::size_t i = 0; i < data.num_machines(); ++i) {
    const Matrix& block = data.machines[i];
    scores[i].assign(block.rows(), 1.0);
    if (chosen.empty()) continue;
    for (std::size_t j = 0; j < block.rows(); ++j) {
      const double d2 = detail::nearest(block.row(j), chosen).second;
      scores[i][j] = kind == SeedScore::squared ? d2 : std::sqrt(d2);
    }
  }
  return scores;
}

// P(machine i) * P(point j | machine i) under the two-stage rule. Generic over
// the number type so it can be evaluated exactly.
template <class Real>
Real two_stage_probability(const std::vector<std::vector<Real>>& scores, std::size_t i, std::size_t j) {
  Real total{0};
  std::vector<Real> machine_totals;
  for (const auto& block : scores) {
    Real e{0};
    for (const auto& s : block) e = e + s;
    machine_totals.push_back(e);
    total = total + e;
  }
  if (total == Real{0} || machine_totals[i] == Real{0}) return Real{0};
  return (machine_totals[i] / total) * (scores[i][j] / machine_totals[i]);
}

namespace detail {

// Index drawn with probability weight[idx] / sum(weights); zero weights are never drawn.
inline std::size_t sample_index(const std::vector<double>& weights, double total, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, total);
  const double target = u(rng);
  double acc = 0.0;
  std::size_t last_positive = weights.size();
  for (std::size_t idx = 0; idx < weights.size(); ++idx) {
    if (weights[idx] <= 0.0) continue;
    acc += weights[idx];
    last_positive = idx;
    if (target < acc) return idx;
  }
  return last_positive;
}

}  // namespace detail

inline ClusterModel local_kmeans_pp(const DistributedDataset& data, std::size_t k, std::uint64_t seed,
                                    SeedScore kind = SeedScore::squared) {
  data.validate();
  if (k == 0) throw std::invalid_argument("local_kmeans_pp: K must be positive");
  if (k > data.total_points()) throw std::invalid_argument("local_kmeans_pp: K exceeds the number of points");

  Rng rng(derive_seed(seed, Stream::init));
  Matrix chosen;
  std::vector<std::vector<char>> taken(data.num_machines(),
                                       std::vector<char>(data.points_per_machine(), 0));
  while (chosen.rows() < k) {
    auto scores = seeding_scores(data, chosen, kind);
    std::vector<double> machine_totals;
    double total = 0.0;
    for (const auto& block : scores) {
      double e = 0.0;
      for (double s : block) e += s;
      machine_totals.push_back(e);
      total += e;
    }
    if (total <= 0.0) {
      // Fewer distinct points than K: uniform over points not yet chosen.
      for (std::size_t i = 0; i < scores.size(); ++i) {
        for (std::size_t j = 0; j < scores[i].size(); ++j) scores[i][j] = taken[i][j] ? 0.0 : 1.0;
        machine_totals[i] = std::accumulate(scores[i].begin(), scores[i].end(), 0.0);
      }
      total = std::accumulate(machine_totals.begin(), machine_totals.end(), 0.0);
    }
    const std::size_t i = detail::sample_index(machine_totals, total, rng);
    const std::size_t j = detail::sample_index(scores[i], machine_totals[i], rng);
    taken[i][j] = 1;
    chosen.push_row(data.machines[i].row(j));
  }
  return ClusterModel::from_centers(std::move(chosen));
}

// center_k + rho * Gamma * g_k with g_k ~ N(0, I/d), so the expected
// perturbation norm is about rho * Gamma.
inline ClusterModel perturbed_init(const Matrix& true_centers, double rho, std::uint64_t seed,
                                   std::optional<double> gamma = std::nullopt) {
  if (!(rho >= 0.0)) throw std::invalid_argument("perturbed_init: rho must be >= 0");
  if (true_centers.empty()) throw std::invalid_argument("perturbed_init: no centers");
  double scale = gamma.value_or(0.0);
  if (!gamma) {
    if (true_centers.rows() < 2) throw std::invalid_argument("perturbed_init: Gamma needed for a single center");
    scale = center_separation(true_centers).first;
  }
  Rng rng(derive_seed(seed, Stream::init));
  const double d = static_cast<double>(true_centers.cols());
  std::normal_distribution<double> g(0.0, 1.0 / std::sqrt(d));
  Matrix out = true_centers;
  for (std::size_t k = 0; k < out.rows(); ++k)
    for (double& v : out.row(k)) v += rho * scale * g(rng);
  return ClusterModel::from_centers(std::move(out));
}

}  // namespace localkmeans
