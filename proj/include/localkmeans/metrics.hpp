#pragma once

// Clustering quality measures tracked along a run: misclustering (raw and
// permutation-aligned), cluster-wise misclustering G, center error Lambda,
// local-vs-virtual deviation Delta, and the k-means objective.

#include <numeric>

#include "localkmeans/hungarian.hpp"
#include "localkmeans/lloyd.hpp"
#include "localkmeans/mixture_data.hpp"

namespace localkmeans {

// One label vector per machine.
using LabelBlocks = std::vector<std::vector<std::size_t>>;

// perm[h] is the true cluster matched to estimated cluster h.
using Permutation = std::vector<std::size_t>;

inline Permutation identity_permutation(std::size_t k) {
  Permutation p(k);
  std::iota(p.begin(), p.end(), std::size_t{0});
  return p;
}

// counts(k, h): points with true label k and estimated label h.
struct ConfusionTable {
  std::size_t K = 0;
  std::vector<std::size_t> global;
  std::vector<std::vector<std::size_t>> machines;

  std::size_t count(std::size_t k, std::size_t h) const { return global[k * K + h]; }
  std::size_t count(std::size_t i, std::size_t k, std::size_t h) const { return machines[i][k * K + h]; }

  // Same table with estimated labels renamed through perm.
  ConfusionTable relabeled(const Permutation& perm) const {
    ConfusionTable out{K, std::vector<std::size_t>(K * K, 0), {}};
    auto move = [&](const std::vector<std::size_t>& src, std::vector<std::size_t>& dst) {
      for (std::size_t k = 0; k < K; ++k)
        for (std::size_t h = 0; h < K; ++h) dst[k * K + perm[h]] += src[k * K + h];
    };
    move(global, out.global);
    for (const auto& m : machines) {
      out.machines.emplace_back(K * K, 0);
      move(m, out.machines.back());
    }
    return out;
  }
};

inline ConfusionTable confusion_table(const LabelBlocks& truth, const LabelBlocks& estimate, std::size_t k) {
  if (truth.size() != estimate.size()) throw std::invalid_argument("confusion_table: machine count mismatch");
  ConfusionTable t{k, std::vector<std::size_t>(k * k, 0), {}};
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i].size() != estimate[i].size())
      throw std::invalid_argument("confusion_table: label length mismatch on machine " + std::to_string(i));
    t.machines.emplace_back(k * k, 0);
    for (std::size_t j = 0; j < truth[i].size(); ++j) {
      const std::size_t a = truth[i][j], b = estimate[i][j];
      if (a >= k || b >= k) throw std::invalid_argument("confusion_table: label out of range");
      ++t.machines[i][a * k + b];
      ++t.global[a * k + b];
    }
  }
  return t;
}

inline std::size_t matched_points(const ConfusionTable& t, const Permutation& perm) {
  std::size_t s = 0;
  for (std::size_t h = 0; h < t.K; ++h) s += t.count(perm[h], h);
  return s;
}

// Exact search over all K! relabelings; first optimum in lexicographic order.
inline Permutation best_permutation_exhaustive(const ConfusionTable& t) {
  Permutation p = identity_permutation(t.K), best = p;
  std::size_t best_score = matched_points(t, p);
  while (std::next_permutation(p.begin(), p.end())) {
    const std::size_t score = matched_points(t, p);
    if (score > best_score) {
      best_score = score;
      best = p;
    }
  }
  return best;
}

// Minimum-cost assignment on the negated confusion table.
inline Permutation best_permutation_assignment(const ConfusionTable& t) {
  std::vector<std::vector<double>> cost(t.K, std::vector<double>(t.K));
  for (std::size_t h = 0; h < t.K; ++h)
    for (std::size_t k = 0; k < t.K; ++k) cost[h][k] = -static_cast<double>(t.count(k, h));
  return min_cost_assignment(cost);
}

inline constexpr std::size_t kExhaustiveAlignmentLimit = 8;

inline Permutation best_permutation(const ConfusionTable& t) {
  return t.K <= kExhaustiveAlignmentLimit ? best_permutation_exhaustive(t) : best_permutation_assignment(t);
}

struct Misclustering {
  double A_raw = 0.0;
  double A_aligned = 0.0;
  std::vector<double> A_local_raw;
  std::vector<double> A_local_aligned;  // under the single global permutation
  Permutation permutation;
};

inline Misclustering misclustering(const ConfusionTable& t) {
  Misclustering out;
  out.permutation = best_permutation(t);
  const Permutation id = identity_permutation(t.K);
  double sum_raw = 0.0, sum_aligned = 0.0;
  for (const auto& block : t.machines) {
    const std::size_t n = std::accumulate(block.begin(), block.end(), std::size_t{0});
    std::size_t raw_hits = 0, aligned_hits = 0;
    for (std::size_t h = 0; h < t.K; ++h) {
      raw_hits += block[id[h] * t.K + h];
      aligned_hits += block[out.permutation[h] * t.K + h];
    }
    const double denom = n == 0 ? 1.0 : static_cast<double>(n);
    out.A_local_raw.push_back(1.0 - static_cast<double>(raw_hits) / denom);
    out.A_local_aligned.push_back(1.0 - static_cast<double>(aligned_hits) / denom);
    sum_raw += out.A_local_raw.back();
    sum_aligned += out.A_local_aligned.back();
  }
  const double m = static_cast<double>(t.machines.size());
  out.A_raw = sum_raw / m;
  out.A_aligned = sum_aligned / m;
  return out;
}

inline Misclustering misclustering(const LabelBlocks& truth, const LabelBlocks& estimate, std::size_t k) {
  return misclustering(confusion_table(truth, estimate, k));
}

struct ClusterwiseG {
  double G = 0.0;
  std::vector<double> G_local;
  // Some estimated or true cluster was empty; G is then the max over the
  // terms that are defined.
  bool degenerate = false;
};

namespace detail {

struct GTerm {
  double value = 0.0;
  bool degenerate = false;
};

inline GTerm g_from_counts(const std::vector<std::size_t>& c, std::size_t k_total,
                           const std::vector<std::size_t>& current) {
  GTerm out;
  for (std::size_t k = 0; k < k_total; ++k) {
    std::size_t false_pos = 0, missed = 0, truth_size = 0;
    for (std::size_t h = 0; h < k_total; ++h) {
      truth_size += c[k * k_total + h];
      if (h == k) continue;
      false_pos += c[h * k_total + k];
      missed += c[k * k_total + h];
    }
    if (current[k] == 0) out.degenerate = true;
    else out.value = std::max(out.value, static_cast<double>(false_pos) / static_cast<double>(current[k]));
    if (truth_size == 0) out.degenerate = true;
    else out.value = std::max(out.value, static_cast<double>(missed) / static_cast<double>(truth_size));
  }
  return out;
}

inline std::vector<std::size_t> column_sums(const std::vector<std::size_t>& c, std::size_t k_total) {
  std::vector<std::size_t> s(k_total, 0);
  for (std::size_t k = 0; k < k_total; ++k)
    for (std::size_t h = 0; h < k_total; ++h) s[h] += c[k * k_total + h];
  return s;
}

}  // namespace detail

// current_sizes[k] must equal the number of points estimated in cluster k.
inline ClusterwiseG clusterwise_G(const ConfusionTable& t, const std::vector<std::size_t>& current_sizes) {
  if (current_sizes.size() != t.K || current_sizes != detail::column_sums(t.global, t.K))
    throw std::invalid_argument("clusterwise_G: current cluster sizes inconsistent with confusion table");
  ClusterwiseG out;
  const auto global = detail::g_from_counts(t.global, t.K, current_sizes);
  out.G = global.value;
  out.degenerate = global.degenerate;
  for (const auto& block : t.machines) {
    const auto local = detail::g_from_counts(block, t.K, detail::column_sums(block, t.K));
    out.G_local.push_back(local.value);
    out.degenerate = out.degenerate || local.degenerate;
  }
  return out;
}

inline ClusterwiseG clusterwise_G(const ConfusionTable& t) {
  return clusterwise_G(t, detail::column_sums(t.global, t.K));
}

// max_k ||est_{perm^-1(k)} - truth_k|| / Gamma.
inline double center_error_Lambda(const Matrix& estimate, const Matrix& truth, double gamma,
                                  const Permutation& perm = {}) {
  if (!(gamma > 0.0)) throw std::invalid_argument("center_error_Lambda: Gamma must be positive");
  if (estimate.rows() != truth.rows() || estimate.cols() != truth.cols())
    throw std::invalid_argument("center_error_Lambda: shape mismatch");
  const Permutation p = perm.empty() ? identity_permutation(truth.rows()) : perm;
  double worst = 0.0;
  for (std::size_t h = 0; h < estimate.rows(); ++h)
    worst = std::max(worst, std::sqrt(squared_distance(estimate.row(h), truth.row(p[h]))));
  return worst / gamma;
}

// max_k (1/m) sum_i ||local_i[k] - global[k]||^2 / normalizer. With a single
// center per model this is the two-cluster deviation (normalizer ||theta*||^2);
// for K clusters the normalizer is Gamma^2.
inline double deviation_Delta(const std::vector<Matrix>& local, const Matrix& global, double normalizer) {
  if (!(normalizer > 0.0)) throw std::invalid_argument("deviation_Delta: normalizer must be positive");
  if (local.empty()) throw std::invalid_argument("deviation_Delta: no local models");
  double worst = 0.0;
  for (std::size_t k = 0; k < global.rows(); ++k) {
    double sum = 0.0;
    for (const auto& model : local) {
      if (model.rows() != global.rows() || model.cols() != global.cols())
        throw std::invalid_argument("deviation_Delta: shape mismatch");
      sum += squared_distance(model.row(k), global.row(k));
    }
    worst = std::max(worst, sum / static_cast<double>(local.size()));
  }
  return worst / normalizer;
}

inline double global_objective(const DistributedDataset& data, const Matrix& centers) {
  double total = 0.0;
  for (const auto& block : data.machines) total += local_objective(block, centers);
  return total;
}

struct IterationRecord {
  std::size_t t = 0;
  bool has_truth = false;
  double A_raw = 0.0;
  double A_aligned = 0.0;
  std::vector<double> A_local;  // aligned under the global permutation
  double G = 0.0;               // on the aligned labeling
  double G_raw = 0.0;
  bool G_degenerate = false;
  double Lambda = 0.0;
  std::vector<double> Lambda_local;
  double Delta = 0.0;
  double objective = 0.0;
  std::size_t rounds = 0;
  std::size_t scalars_up = 0;
  std::size_t scalars_down = 0;
  bool is_sync = false;
  bool observational = true;  // computed by an omniscient observer, costs no communication

  friend bool operator==(const IterationRecord&, const IterationRecord&) = default;
};

// Ground truth available to the observer.
struct GroundTruth {
  Matrix centers;
  double Gamma = 0.0;

  static GroundTruth from_centers(Matrix centers) {
    const double gamma = centers.rows() > 1 ? center_separation(centers).first : 1.0;
    return {std::move(centers), gamma};
  }
};

}  // namespace localkmeans
