#pragma once

// Synthetic mixture generation, separation statistics, and real-data ingestion.

#include <limits>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>

#include "localkmeans/common.hpp"

namespace localkmeans {

enum class NoiseKind { gaussian };

struct MixtureSpec {
  std::size_t dimension = 0;
  Matrix centers;  // K x d
  double noise_std = 0.0;
  std::size_t num_machines = 1;
  std::size_t points_per_machine = 1;
  std::vector<double> cluster_weights;  // empty means uniform
  NoiseKind noise = NoiseKind::gaussian;

  std::size_t num_clusters() const noexcept { return centers.rows(); }

  std::vector<double> weights() const {
    if (!cluster_weights.empty()) return cluster_weights;
    return std::vector<double>(num_clusters(), 1.0 / static_cast<double>(num_clusters()));
  }

  void validate() const {
    const std::size_t k = num_clusters();
    if (k == 0) throw std::invalid_argument("MixtureSpec: no centers");
    if (dimension == 0 || centers.cols() != dimension)
      throw std::invalid_argument("MixtureSpec: center dimension does not match d");
    if (!(noise_std >= 0.0)) throw std::invalid_argument("MixtureSpec: noise_std must be >= 0");
    if (num_machines == 0 || points_per_machine == 0)
      throw std::invalid_argument("MixtureSpec: m and n must be positive");
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = a + 1; b < k; ++b)
        if (squared_distance(centers.row(a), centers.row(b)) == 0.0)
          throw std::invalid_argument("MixtureSpec: centers must be pairwise distinct");
    if (!cluster_weights.empty()) {
      if (cluster_weights.size() != k)
        throw std::invalid_argument("MixtureSpec: need one weight per cluster");
      double total = 0.0;
      for (double w : cluster_weights) {
        if (!(w >= 0.0)) throw std::invalid_argument("MixtureSpec: negative cluster weight");
        total += w;
      }
      if (std::abs(total - 1.0) > 1e-9)
        throw std::invalid_argument("MixtureSpec: cluster weights must sum to 1");
    }
  }
};

// m blocks of n points. Labels are cluster indices, or {-1,+1} for symmetric
// two-cluster data (sign +1 is cluster 0, sign -1 is cluster 1).
struct DistributedDataset {
  std::vector<Matrix> machines;
  std::vector<std::vector<int>> labels;
  bool symmetric2 = false;

  std::size_t num_machines() const noexcept { return machines.size(); }
  std::size_t points_per_machine() const noexcept {
    return machines.empty() ? 0 : machines.front().rows();
  }
  std::size_t dim() const noexcept { return machines.empty() ? 0 : machines.front().cols(); }
  std::size_t total_points() const noexcept { return num_machines() * points_per_machine(); }
  bool has_labels() const noexcept { return !labels.empty(); }

  static std::size_t sign_to_index(int z) noexcept { return z > 0 ? 0 : 1; }

  // Labels of machine i as cluster indices in [K].
  std::vector<std::size_t> cluster_labels(std::size_t i) const {
    std::vector<std::size_t> out(labels.at(i).size());
    for (std::size_t j = 0; j < out.size(); ++j)
      out[j] = symmetric2 ? sign_to_index(labels[i][j]) : static_cast<std::size_t>(labels[i][j]);
    return out;
  }

  void validate(std::optional<std::size_t> num_clusters = std::nullopt) const {
    if (machines.empty()) throw std::invalid_argument("DistributedDataset: no machines");
    const std::size_t n = points_per_machine(), d = dim();
    for (const auto& block : machines)
      if (block.rows() != n || block.cols() != d)
        throw std::invalid_argument("DistributedDataset: machine blocks differ in shape");
    if (!has_labels()) return;
    if (labels.size() != machines.size())
      throw std::invalid_argument("DistributedDataset: label blocks do not match machines");
    for (const auto& block : labels) {
      if (block.size() != n) throw std::invalid_argument("DistributedDataset: label count mismatch");
      for (int z : block) {
        if (symmetric2 ? (z != 1 && z != -1)
                       : (z < 0 || (num_clusters && static_cast<std::size_t>(z) >= *num_clusters)))
          throw std::invalid_argument("DistributedDataset: invalid label " + std::to_string(z));
      }
    }
  }

  // FNV-1a over point bytes and labels; identifies identical datasets across runs.
  std::uint64_t checksum() const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ull;
    auto feed = [&h](const void* p, std::size_t len) {
      const auto* bytes = static_cast<const unsigned char*>(p);
      for (std::size_t i = 0; i < len; ++i) {
        h ^= bytes[i];
        h *= 0x100000001b3ull;
      }
    };
    for (const auto& block : machines) feed(block.data().data(), block.data().size() * sizeof(double));
    for (const auto& block : labels) feed(block.data(), block.size() * sizeof(int));
    return h;
  }

  friend bool operator==(const DistributedDataset&, const DistributedDataset&) = default;
};

// K scaled standard basis vectors in R^d.
inline Matrix orthonormal_centers(std::size_t k, std::size_t d, double scale = 1.0) {
  if (k > d) throw std::invalid_argument("orthonormal_centers: need K <= d");
  Matrix c(k, d);
  for (std::size_t i = 0; i < k; ++i) c(i, i) = scale;
  return c;
}

inline DistributedDataset generate_symmetric2(const Vector& theta_star, double sigma, std::size_t m,
                                              std::size_t n, std::uint64_t seed) {
  if (norm(theta_star) <= 0.0)
    throw std::invalid_argument("generate_symmetric2: theta_star must have positive norm");
  if (!(sigma >= 0.0)) throw std::invalid_argument("generate_symmetric2: sigma must be >= 0");
  if (m == 0 || n == 0) throw std::invalid_argument("generate_symmetric2: m and n must be positive");

  const std::size_t d = theta_star.size();
  DistributedDataset out;
  out.symmetric2 = true;
  out.machines.reserve(m);
  out.labels.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    Rng rng(derive_seed(seed, Stream::data, i));
    std::bernoulli_distribution coin(0.5);
    std::normal_distribution<double> noise(0.0, 1.0);
    Matrix block(n, d);
    std::vector<int> z(n);
    for (std::size_t j = 0; j < n; ++j) {
      z[j] = coin(rng) ? 1 : -1;
      auto x = block.row(j);
      for (std::size_t c = 0; c < d; ++c) x[c] = z[j] * theta_star[c] + sigma * noise(rng);
    }
    out.machines.push_back(std::move(block));
    out.labels.push_back(std::move(z));
  }
  return out;
}

// Each machine draws from its own (seed, machine) sub-stream.
inline DistributedDataset generate_kmixture(const MixtureSpec& spec, std::uint64_t seed) {
  spec.validate();
  const auto weights = spec.weights();
  const std::size_t d = spec.dimension;
  DistributedDataset out;
  out.machines.reserve(spec.num_machines);
  out.labels.reserve(spec.num_machines);
  for (std::size_t i = 0; i < spec.num_machines; ++i) {
    Rng rng(derive_seed(seed, Stream::data, i));
    std::discrete_distribution<int> pick(weights.begin(), weights.end());
    std::normal_distribution<double> noise(0.0, 1.0);
    Matrix block(spec.points_per_machine, d);
    std::vector<int> z(spec.points_per_machine);
    for (std::size_t j = 0; j < spec.points_per_machine; ++j) {
      z[j] = pick(rng);
      auto x = block.row(j);
      auto center = spec.centers.row(static_cast<std::size_t>(z[j]));
      for (std::size_t c = 0; c < d; ++c) x[c] = center[c] + spec.noise_std * noise(rng);
    }
    out.machines.push_back(std::move(block));
    out.labels.push_back(std::move(z));
  }
  return out;
}

// Two-cluster SNR: ||theta*|| / (sigma * sqrt(1 + 9d/mn)).
inline double snr_2cluster(double theta_norm, double sigma, std::size_t d, std::size_t m,
                           std::size_t n) {
  const double ratio = 9.0 * static_cast<double>(d) / (static_cast<double>(m) * static_cast<double>(n));
  return theta_norm / (sigma * std::sqrt(1.0 + ratio));
}

inline double sigma_for_snr(double target_r, double theta_norm, std::size_t d, std::size_t m,
                            std::size_t n) {
  if (!(target_r > 0.0) || !(theta_norm > 0.0))
    throw std::invalid_argument("sigma_for_snr: target_r and theta_norm must be positive");
  const double ratio = 9.0 * static_cast<double>(d) / (static_cast<double>(m) * static_cast<double>(n));
  return theta_norm / (target_r * std::sqrt(1.0 + ratio));
}

struct SeparationReport {
  double Gamma = 0.0;
  double lambda = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double r_K = 0.0;
  std::optional<double> r;  // only for symmetric two-cluster geometry
};

inline std::pair<double, double> center_separation(const Matrix& centers) {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (std::size_t a = 0; a < centers.rows(); ++a)
    for (std::size_t b = a + 1; b < centers.rows(); ++b) {
      const double dist = std::sqrt(squared_distance(centers.row(a), centers.row(b)));
      lo = std::min(lo, dist);
      hi = std::max(hi, dist);
    }
  return {lo, hi};
}

inline SeparationReport separation_report(const DistributedDataset& data, const MixtureSpec& spec) {
  if (!data.has_labels()) throw std::invalid_argument("separation_report: dataset has no labels");
  const std::size_t k = spec.num_clusters(), m = data.num_machines();
  if (k < 2) throw std::invalid_argument("separation_report: need at least two clusters");

  std::vector<std::vector<std::size_t>> local(m, std::vector<std::size_t>(k, 0));
  std::vector<std::size_t> global(k, 0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t z : data.cluster_labels(i)) {
      if (z >= k) throw std::invalid_argument("separation_report: label out of range");
      ++local[i][z];
      ++global[z];
    }

  SeparationReport rep;
  const auto [gamma, widest] = center_separation(spec.centers);
  rep.Gamma = gamma;
  rep.lambda = widest / gamma;

  const double total = static_cast<double>(data.total_points());
  rep.alpha = std::numeric_limits<double>::infinity();
  rep.beta = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < k; ++c) {
    if (global[c] == 0)
      throw std::domain_error("separation_report: true cluster " + std::to_string(c) + " is empty");
    rep.alpha = std::min(rep.alpha, static_cast<double>(global[c]) / total);
    for (std::size_t i = 0; i < m; ++i)
      rep.beta = std::min(rep.beta, static_cast<double>(local[i][c]) / static_cast<double>(global[c]));
  }

  const double d = static_cast<double>(data.dim());
  rep.r_K = (rep.Gamma / spec.noise_std) *
            std::sqrt(rep.alpha / (1.0 + static_cast<double>(k) * d / total));

  if (k == 2) {
    bool antipodal = true;
    for (std::size_t c = 0; c < spec.dimension; ++c)
      antipodal = antipodal && spec.centers(0, c) == -spec.centers(1, c);
    if (antipodal)
      rep.r = snr_2cluster(norm(spec.centers.row(0)), spec.noise_std, data.dim(), m,
                           data.points_per_machine());
  }
  return rep;
}

// Flat labeled point list, as read from a CSV file.
struct LabeledPoints {
  Matrix points;
  std::vector<int> labels;  // empty when no label column
  std::size_t num_classes = 0;
};

struct CsvOptions {
  std::optional<std::size_t> label_column;
  bool header = false;
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

inline std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline std::optional<double> parse_double(const std::string& s) {
  if (s.empty()) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size()) return std::nullopt;
  return v;
}

}  // namespace detail

// Label strings are mapped to [K] in ascending order (numeric order when every
// label parses as a number).
inline LabeledPoints load_csv_dataset(std::istream& in, const CsvOptions& opts = {}) {
  LabeledPoints out;
  std::vector<std::string> raw_labels;
  std::string line;
  std::size_t row = 0, width = 0;
  while (std::getline(in, line)) {
    ++row;
    if (opts.header && row == 1) continue;
    line = detail::trim(line);
    if (line.empty()) continue;
    auto cells = detail::split_csv_line(line);
    if (width == 0) {
      width = cells.size();
      if (opts.label_column && *opts.label_column >= width)
        throw ParseError(row, "label column " + std::to_string(*opts.label_column) +
                                  " out of range for width " + std::to_string(width));
      if (width == (opts.label_column ? 1u : 0u)) throw ParseError(row, "no feature columns");
    } else if (cells.size() != width) {
      throw ParseError(row, "expected " + std::to_string(width) + " columns, found " +
                                std::to_string(cells.size()));
    }
    Vector point;
    point.reserve(width);
    for (std::size_t c = 0; c < width; ++c) {
      auto cell = detail::trim(cells[c]);
      if (opts.label_column && c == *opts.label_column) {
        if (cell.empty()) throw ParseError(row, "empty label");
        raw_labels.push_back(std::move(cell));
        continue;
      }
      auto v = detail::parse_double(cell);
      if (!v) throw ParseError(row, "non-numeric cell '" + cell + "' in column " + std::to_string(c));
      point.push_back(*v);
    }
    out.points.push_row(point);
  }
  if (out.points.empty()) throw ParseError(row, "no data rows");

  if (opts.label_column) {
    const bool numeric =
        std::all_of(raw_labels.begin(), raw_labels.end(),
                    [](const std::string& s) { return detail::parse_double(s).has_value(); });
    auto relabel = [&out, &raw_labels](auto key) {
      std::map<decltype(key(raw_labels.front())), int> index;
      for (const auto& s : raw_labels) index.emplace(key(s), 0);
      int next = 0;
      for (auto& [_, v] : index) v = next++;
      for (const auto& s : raw_labels) out.labels.push_back(index.at(key(s)));
      out.num_classes = index.size();
    };
    if (numeric)
      relabel([](const std::string& s) { return *detail::parse_double(s); });
    else
      relabel([](const std::string& s) { return s; });
  }
  return out;
}

inline LabeledPoints load_csv_dataset(const std::string& path, const CsvOptions& opts = {}) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  return load_csv_dataset(in, opts);
}

// Shuffles with the seed and deals floor(N/m) points to each machine; the
// remainder is dropped.
inline DistributedDataset partition(const Matrix& points, const std::vector<int>& labels,
                                    std::size_t m, std::uint64_t seed) {
  const std::size_t total = points.rows();
  if (m == 0) throw std::invalid_argument("partition: m must be positive");
  if (m > total) throw std::invalid_argument("partition: more machines than points");
  if (!labels.empty() && labels.size() != total)
    throw std::invalid_argument("partition: label count mismatch");

  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(derive_seed(seed, Stream::partition));
  std::shuffle(order.begin(), order.end(), rng);

  const std::size_t n = total / m;
  DistributedDataset out;
  for (std::size_t i = 0; i < m; ++i) {
    Matrix block(n, points.cols());
    std::vector<int> z;
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t src = order[i * n + j];
      std::copy_n(points.row(src).begin(), points.cols(), block.row(j).begin());
      if (!labels.empty()) z.push_back(labels[src]);
    }
    out.machines.push_back(std::move(block));
    if (!labels.empty()) out.labels.push_back(std::move(z));
  }
  return out;
}

// Per-class means of a labeled dataset; stands in for the true centers of real data.
inline Matrix class_means(const DistributedDataset& data, std::size_t k) {
  Matrix sums(k, data.dim());
  std::vector<std::size_t> counts(k, 0);
  for (std::size_t i = 0; i < data.num_machines(); ++i) {
    const auto z = data.cluster_labels(i);
    for (std::size_t j = 0; j < z.size(); ++j) {
      auto s = sums.row(z[j]);
      auto x = data.machines[i].row(j);
      for (std::size_t c = 0; c < s.size(); ++c) s[c] += x[c];
      ++counts[z[j]];
    }
  }
  for (std::size_t c = 0; c < k; ++c) {
    if (counts[c] == 0) throw std::domain_error("class_means: class " + std::to_string(c) + " is empty");
    for (double& v : sums.row(c)) v /= static_cast<double>(counts[c]);
  }
  return sums;
}

}  // namespace localkmeans
