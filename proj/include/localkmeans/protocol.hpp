#pragma once

// Server/machine protocol: every machine runs Lloyd steps on its own block and,
// when L divides t, the server averages the local models (weighted by local
// cluster sizes) and broadcasts the result, which replaces every local model.
//
// State convention: a RunState at time t is the post-communication state. If a
// sync falls on t, the local models already hold the broadcast centers. A step
// runs the local phase and then performs the communication due at t + 1.

#include <optional>
#include <string>

#include "localkmeans/lloyd.hpp"
#include "localkmeans/metrics.hpp"
#include "localkmeans/mixture_data.hpp"

namespace localkmeans {

enum class RunMode { local_kmeans, centralized, no_aggregation, symmetric2 };

inline std::string to_string(RunMode mode) {
  switch (mode) {
    case RunMode::local_kmeans: return "local";
    case RunMode::centralized: return "central";
    case RunMode::no_aggregation: return "noagg";
    case RunMode::symmetric2: return "sym2";
  }
  return "?";
}

inline RunMode parse_run_mode(const std::string& s) {
  if (s == "local" || s == "local_kmeans") return RunMode::local_kmeans;
  if (s == "central" || s == "centralized") return RunMode::centralized;
  if (s == "noagg" || s == "no_aggregation") return RunMode::no_aggregation;
  if (s == "sym2" || s == "symmetric2") return RunMode::symmetric2;
  throw std::invalid_argument("unknown mode '" + s + "'");
}

struct ProtocolConfig {
  std::size_t L = 1;
  std::size_t T = 30;
  RunMode mode = RunMode::local_kmeans;
  std::uint64_t seed = 0;
  std::size_t record_every = 1;

  // Centralized Lloyd is LocalKMeans with one local step per round.
  std::size_t local_steps() const noexcept { return mode == RunMode::centralized ? 1 : L; }
  bool aggregates() const noexcept { return mode != RunMode::no_aggregation; }
  bool sync_due(std::size_t t) const noexcept { return aggregates() && t < T && t % local_steps() == 0; }
  bool records(std::size_t t) const noexcept { return t >= 1 && t <= T && (T - t) % record_every == 0; }

  void validate() const {
    if (L == 0) throw std::invalid_argument("ProtocolConfig: L must be positive");
    if (T == 0) throw std::invalid_argument("ProtocolConfig: T must be positive");
    if (record_every == 0) throw std::invalid_argument("ProtocolConfig: record_every must be positive");
  }
};

// Scalars are counted per machine.
struct CommCounters {
  std::size_t rounds = 0;
  std::size_t scalars_up = 0;
  std::size_t scalars_down = 0;

  friend bool operator==(const CommCounters&, const CommCounters&) = default;
};

struct RunState {
  std::size_t t = 0;
  std::vector<ClusterModel> local_models;
  // Virtual iterate: the broadcast model at sync times, otherwise the plain
  // average of the local models. Tracked every iteration for observation only.
  ClusterModel global_model;
  // Last model the server actually broadcast.
  ClusterModel served_model;
  std::vector<Assignment> assignments;
  CommCounters comm;
  bool synced = false;  // a sync happened at time t
  CommCounters pending;  // cost of that sync, charged to iteration t

  friend bool operator==(const RunState&, const RunState&) = default;
};

// Size-weighted average per cluster, reduced in machine order. A cluster that
// is empty everywhere keeps prev's center.
inline ClusterModel aggregate(const std::vector<ClusterModel>& local, const ClusterModel& prev) {
  if (local.empty()) throw std::invalid_argument("aggregate: no local models");
  const std::size_t k = prev.num_clusters(), d = prev.dim();
  for (const auto& model : local)
    if (model.num_clusters() != k || model.dim() != d || model.sizes.size() != k)
      throw std::invalid_argument("aggregate: local model shape mismatch");

  ClusterModel out{Matrix(k, d), std::vector<std::size_t>(k, 0)};
  for (std::size_t c = 0; c < k; ++c) {
    for (const auto& model : local) out.sizes[c] += model.sizes[c];
    auto center = out.centers.row(c);
    if (out.sizes[c] == 0) {
      auto old = prev.centers.row(c);
      std::copy(old.begin(), old.end(), center.begin());
      continue;
    }
    const double total = static_cast<double>(out.sizes[c]);
    for (const auto& model : local) {
      if (model.sizes[c] == 0) continue;
      const double w = static_cast<double>(model.sizes[c]) / total;
      auto src = model.centers.row(c);
      for (std::size_t q = 0; q < d; ++q) center[q] += w * src[q];
    }
  }
  return out;
}

// Unweighted average of the local models, in machine order.
inline ClusterModel average_models(const std::vector<ClusterModel>& local) {
  const std::size_t k = local.front().num_clusters(), d = local.front().dim();
  ClusterModel out{Matrix(k, d), std::vector<std::size_t>(k, 0)};
  for (const auto& model : local) {
    for (std::size_t c = 0; c < k; ++c) {
      out.sizes[c] += model.sizes[c];
      auto dst = out.centers.row(c);
      auto src = model.centers.row(c);
      for (std::size_t q = 0; q < d; ++q) dst[q] += src[q];
    }
  }
  const double m = static_cast<double>(local.size());
  for (std::size_t c = 0; c < k; ++c)
    for (double& v : out.centers.row(c)) v /= m;
  return out;
}

namespace detail {

inline void check_layout(const RunState& state, const DistributedDataset& data) {
  if (state.local_models.size() != data.num_machines() || state.assignments.size() != data.num_machines())
    throw std::invalid_argument("RunState does not match the dataset layout");
}

inline void broadcast(RunState& state, ClusterModel served, std::size_t up_per_machine,
                      std::size_t down_per_machine) {
  for (auto& model : state.local_models) model.centers = served.centers;
  state.served_model = served;
  state.global_model = std::move(served);
  state.synced = true;
  ++state.comm.rounds;
  state.comm.scalars_up += up_per_machine;
  state.comm.scalars_down += down_per_machine;
  state.pending = {1, up_per_machine, down_per_machine};
}

// Communication due at state.t, then the virtual iterate.
inline void communicate(RunState& state, const ProtocolConfig& config) {
  state.synced = false;
  state.pending = {};
  if (config.sync_due(state.t)) {
    const std::size_t k = state.served_model.num_clusters(), d = state.served_model.dim();
    if (config.mode == RunMode::symmetric2)
      broadcast(state, average_models(state.local_models), d, d);
    else
      broadcast(state, aggregate(state.local_models, state.served_model), k * (d + 1), k * d);
    return;
  }
  state.global_model = average_models(state.local_models);
}

// Sign rule for the symmetric two-cluster model: label 0 is +1, label 1 is -1.
inline Assignment sign_assign(const Matrix& points, std::span<const double> theta) {
  Assignment a;
  a.labels.resize(points.rows());
  for (std::size_t j = 0; j < points.rows(); ++j) a.labels[j] = dot(points.row(j), theta) >= 0.0 ? 0 : 1;
  return a;
}

// theta_i = (1/n) sum_j zhat_j x_j
inline ClusterModel sign_update(const Matrix& points, const Assignment& a) {
  ClusterModel out{Matrix(1, points.cols()), {points.rows()}};
  auto theta = out.centers.row(0);
  for (std::size_t j = 0; j < points.rows(); ++j) {
    const double z = a.labels[j] == 0 ? 1.0 : -1.0;
    auto x = points.row(j);
    for (std::size_t q = 0; q < theta.size(); ++q) theta[q] += z * x[q];
  }
  for (double& v : theta) v /= static_cast<double>(points.rows());
  return out;
}

}  // namespace detail

// State at t = 0: every machine holds init, with sizes from one assignment
// pass against it; the t = 0 sync (if any) has been applied.
inline RunState initial_state(const DistributedDataset& data, const ProtocolConfig& config,
                              const ClusterModel& init) {
  config.validate();
  data.validate();
  if (init.dim() != data.dim()) throw std::invalid_argument("initial_state: init dimension mismatch");
  RunState state;
  const bool sym2 = config.mode == RunMode::symmetric2;
  if (sym2 && init.num_clusters() != 1)
    throw std::invalid_argument("initial_state: symmetric two-cluster runs take a single vector");
  for (const auto& block : data.machines) {
    Assignment a = sym2 ? detail::sign_assign(block, init.centers.row(0)) : assign(block, init.centers);
    ClusterModel local{init.centers, std::vector<std::size_t>(init.num_clusters(), 0)};
    if (sym2) local.sizes[0] = block.rows();
    else
      for (std::size_t z : a.labels) ++local.sizes[z];
    state.local_models.push_back(std::move(local));
    state.assignments.push_back(std::move(a));
  }
  state.served_model = ClusterModel{init.centers, std::vector<std::size_t>(init.num_clusters(), 0)};
  detail::communicate(state, config);
  return state;
}

inline RunState step(RunState state, const DistributedDataset& data, const ProtocolConfig& config) {
  detail::check_layout(state, data);
  const bool sym2 = config.mode == RunMode::symmetric2;
  for (std::size_t i = 0; i < data.num_machines(); ++i) {
    const Matrix& block = data.machines[i];
    ClusterModel& local = state.local_models[i];
    if (sym2) {
      state.assignments[i] = detail::sign_assign(block, local.centers.row(0));
      local = detail::sign_update(block, state.assignments[i]);
    } else {
      state.assignments[i] = assign(block, local.centers);
      local = update_centers(block, state.assignments[i], local.num_clusters(), local);
    }
  }
  ++state.t;
  detail::communicate(state, config);
  return state;
}

struct RunResult {
  RunState final_state;
  IterationRecord initial;  // t = 0, not part of the recorded stream
  std::vector<IterationRecord> records;
};

// Observer context for metric evaluation.
struct Observer {
  std::optional<GroundTruth> truth;  // K-cluster truth; two centers {theta*, -theta*} in sym2 mode
  double deviation_normalizer = 1.0;
  std::size_t num_clusters = 0;
  bool symmetric2 = false;
};

inline IterationRecord observe(const RunState& state, const DistributedDataset& data, const Observer& obs) {
  IterationRecord rec;
  rec.t = state.t;
  // Counters cover iterations 0..t-1.
  rec.rounds = state.comm.rounds - state.pending.rounds;
  rec.scalars_up = state.comm.scalars_up - state.pending.scalars_up;
  rec.scalars_down = state.comm.scalars_down - state.pending.scalars_down;
  rec.is_sync = state.synced;

  // Centers used for labeling: theta and -theta in sym2 mode.
  auto expand = [&obs](const Matrix& c) {
    if (!obs.symmetric2) return c;
    Matrix two(2, c.cols());
    for (std::size_t q = 0; q < c.cols(); ++q) {
      two(0, q) = c(0, q);
      two(1, q) = -c(0, q);
    }
    return two;
  };

  std::vector<Matrix> local_centers;
  for (std::size_t i = 0; i < data.num_machines(); ++i) {
    local_centers.push_back(state.local_models[i].centers);
    rec.objective += local_objective(data.machines[i], expand(state.local_models[i].centers));
  }
  rec.Delta = deviation_Delta(local_centers, state.global_model.centers, obs.deviation_normalizer);

  if (!obs.truth || !data.has_labels()) return rec;
  rec.has_truth = true;
  LabelBlocks truth_labels, est_labels;
  for (std::size_t i = 0; i < data.num_machines(); ++i) {
    truth_labels.push_back(data.cluster_labels(i));
    est_labels.push_back(state.assignments[i].labels);
  }
  const auto table = confusion_table(truth_labels, est_labels, obs.num_clusters);
  const auto mis = misclustering(table);
  rec.A_raw = mis.A_raw;
  rec.A_aligned = mis.A_aligned;
  rec.A_local = mis.A_local_aligned;
  const auto g = clusterwise_G(table.relabeled(mis.permutation));
  rec.G = g.G;
  rec.G_degenerate = g.degenerate;
  rec.G_raw = clusterwise_G(table).G;
  rec.Lambda = center_error_Lambda(expand(state.global_model.centers), obs.truth->centers, obs.truth->Gamma,
                                   mis.permutation);
  for (const auto& c : local_centers)
    rec.Lambda_local.push_back(
        center_error_Lambda(expand(c), obs.truth->centers, obs.truth->Gamma, mis.permutation));
  return rec;
}

namespace detail {

inline RunResult drive(const DistributedDataset& data, const ProtocolConfig& config, const ClusterModel& init,
                       const Observer& obs) {
  RunResult result;
  RunState state = initial_state(data, config, init);
  result.initial = observe(state, data, obs);
  result.records.reserve(config.T / config.record_every + 1);
  while (state.t < config.T) {
    state = step(std::move(state), data, config);
    if (config.records(state.t)) result.records.push_back(observe(state, data, obs));
  }
  result.final_state = std::move(state);
  return result;
}

}  // namespace detail

// General-K LocalKMeans and its baselines. Without explicit truth, labeled
// data is scored against its class means.
inline RunResult run(const DistributedDataset& data, const ProtocolConfig& config, const ClusterModel& init,
                     std::optional<GroundTruth> truth = std::nullopt) {
  if (config.mode == RunMode::symmetric2)
    throw std::invalid_argument("run: use run_symmetric2 for the symmetric two-cluster mode");
  if (init.num_clusters() == 0 || init.dim() != data.dim())
    throw std::invalid_argument("run: init does not match the data");
  Observer obs;
  obs.num_clusters = init.num_clusters();
  if (!truth && data.has_labels()) truth = GroundTruth::from_centers(class_means(data, init.num_clusters()));
  if (truth && (truth->centers.rows() != init.num_clusters() || truth->centers.cols() != data.dim()))
    throw std::invalid_argument("run: ground truth does not match init");
  obs.truth = truth;
  // Without truth, Delta is normalized by the separation of the initial centers.
  const double gamma = truth ? truth->Gamma
                             : (init.num_clusters() > 1 ? center_separation(init.centers).first : 1.0);
  obs.deviation_normalizer = gamma > 0.0 ? gamma * gamma : 1.0;
  return detail::drive(data, config, init, obs);
}

// Symmetric two-cluster LocalKMeans: one vector per machine, sign labels,
// unweighted server average. theta_star defaults to the label-signed data mean.
inline RunResult run_symmetric2(const DistributedDataset& data, const ProtocolConfig& config,
                                const Vector& init_theta, std::optional<Vector> theta_star = std::nullopt) {
  if (!data.symmetric2) throw std::invalid_argument("run_symmetric2: data is not symmetric two-cluster data");
  if (init_theta.size() != data.dim()) throw std::invalid_argument("run_symmetric2: init dimension mismatch");
  ProtocolConfig cfg = config;
  cfg.mode = RunMode::symmetric2;

  if (!theta_star) {
    Vector mean(data.dim(), 0.0);
    for (std::size_t i = 0; i < data.num_machines(); ++i)
      for (std::size_t j = 0; j < data.points_per_machine(); ++j) {
        auto x = data.machines[i].row(j);
        for (std::size_t q = 0; q < mean.size(); ++q) mean[q] += data.labels[i][j] * x[q];
      }
    for (double& v : mean) v /= static_cast<double>(data.total_points());
    theta_star = mean;
  }
  const double star_norm = norm(*theta_star);
  if (!(star_norm > 0.0)) throw std::invalid_argument("run_symmetric2: theta_star has zero norm");

  Observer obs;
  obs.symmetric2 = true;
  obs.num_clusters = 2;
  Matrix truth(2, data.dim());
  for (std::size_t q = 0; q < data.dim(); ++q) {
    truth(0, q) = (*theta_star)[q];
    truth(1, q) = -(*theta_star)[q];
  }
  obs.truth = GroundTruth{std::move(truth), 2.0 * star_norm};
  obs.deviation_normalizer = star_norm * star_norm;

  Matrix init(1, data.dim());
  std::copy(init_theta.begin(), init_theta.end(), init.row(0).begin());
  return detail::drive(data, cfg, ClusterModel{std::move(init), {0}}, obs);
}

}  // namespace localkmeans
