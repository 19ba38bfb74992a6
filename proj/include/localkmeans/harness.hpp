#pragma once

// Multi-trial experiment driver and CSV serialization.
//
// Trial i of an experiment uses seed base_seed + i; the data, init, partition
// and protocol sub-streams are derived from it. All compared modes consume the
// same datasets and the same initial model per trial.

#include <array>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "localkmeans/protocol.hpp"
#include "localkmeans/seeding.hpp"

namespace localkmeans {

enum class DataSource { kmixture, symmetric2, csv };
enum class InitKind { kmpp, perturb, file };

struct ExperimentConfig {
  std::size_t d = 100;
  std::size_t K = 10;
  std::size_t m = 20;
  std::size_t n = 200;
  std::optional<double> snr;
  std::optional<double> sigma;
  double center_scale = 1.0;

  InitKind init = InitKind::kmpp;
  double rho = 0.1;
  std::string init_file;
  SeedScore score = SeedScore::squared;

  RunMode mode = RunMode::local_kmeans;
  std::size_t L = 1;
  std::size_t iters = 30;
  std::size_t record_every = 1;

  std::size_t trials = 1;
  std::uint64_t seed = 0;
  std::size_t threads = 1;

  std::string data;  // CSV path; empty for synthetic data
  std::optional<std::size_t> label_col;
  bool csv_header = false;

  std::string out = ".";

  DataSource source() const noexcept {
    if (!data.empty()) return DataSource::csv;
    return mode == RunMode::symmetric2 ? DataSource::symmetric2 : DataSource::kmixture;
  }

  // File-name stem identifying the protocol variant.
  std::string label() const {
    switch (mode) {
      case RunMode::centralized: return "central";
      case RunMode::no_aggregation: return "noagg";
      default: return to_string(mode) + "_L" + std::to_string(L);
    }
  }

  ProtocolConfig protocol(std::uint64_t trial_seed) const {
    return ProtocolConfig{mode == RunMode::centralized ? 1 : L, iters, mode, trial_seed, record_every};
  }

  void validate() const {
    if (d == 0 || K == 0 || m == 0 || n == 0) throw std::invalid_argument("d, K, m and n must be positive");
    if (trials == 0) throw std::invalid_argument("trials must be positive");
    if (threads == 0) throw std::invalid_argument("threads must be positive");
    protocol(0).validate();
    if (source() != DataSource::csv && !snr && !sigma)
      throw std::invalid_argument("synthetic data needs snr or sigma");
    if (snr && !(*snr > 0.0)) throw std::invalid_argument("snr must be positive");
    if (sigma && !(*sigma >= 0.0)) throw std::invalid_argument("sigma must be non-negative");
    if (!(center_scale > 0.0)) throw std::invalid_argument("center-scale must be positive");
    if (!(rho >= 0.0)) throw std::invalid_argument("rho must be non-negative");
    if (source() == DataSource::kmixture && K > d)
      throw std::invalid_argument("orthonormal centers need K <= d");
    if (source() == DataSource::symmetric2 && K != 2) throw std::invalid_argument("sym2 mode needs K = 2");
    if (init == InitKind::file && init_file.empty()) throw std::invalid_argument("init=file needs init-file");
    if (source() == DataSource::csv && init == InitKind::perturb && !label_col)
      throw std::invalid_argument("perturbed init on CSV data needs a label column");
  }

  // Noise level used for synthetic data.
  double noise_std() const {
    if (sigma) return *sigma;
    return sigma_for_snr(*snr, center_scale, d, m, n);
  }

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

using ConfigMap = std::map<std::string, std::string>;

namespace detail {

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string format_metric(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(s);
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline std::size_t parse_count(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  unsigned long long x = 0;
  try {
    x = std::stoull(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != v.size() || v.empty() || v.front() == '-')
    throw std::invalid_argument("invalid value for " + key + ": '" + v + "'");
  return static_cast<std::size_t>(x);
}

inline double parse_real(const std::string& key, const std::string& v) {
  auto x = parse_double(v);
  if (!x) throw std::invalid_argument("invalid value for " + key + ": '" + v + "'");
  return *x;
}

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "no") return false;
  throw std::invalid_argument("invalid value for " + key + ": '" + v + "'");
}

}  // namespace detail

inline const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "mode", "L",     "iters", "trials",   "seed",         "d",         "K",        "m",
      "n",    "snr",   "sigma", "init",     "rho",          "data",      "label-col", "out",
      "record-every", "center-scale", "init-file", "score", "csv-header", "threads"};
  return keys;
}

// Flat key=value text; '#' starts a comment.
inline ConfigMap parse_config_text(std::istream& in) {
  ConfigMap out;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(row, "expected key=value");
    const std::string key = detail::trim(line.substr(0, eq));
    const auto& keys = config_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) throw ParseError(row, "unknown key '" + key + "'");
    out[key] = detail::trim(line.substr(eq + 1));
  }
  return out;
}

inline ConfigMap load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path + "'");
  return parse_config_text(in);
}

// Expands comma lists in "mode" and "L" into one config per protocol variant.
// Local and sym2 modes take every L; "T/2" means iters / 2.
inline std::vector<ExperimentConfig> build_experiments(const ConfigMap& map) {
  ExperimentConfig base;
  auto get = [&map](const std::string& key) -> const std::string* {
    auto it = map.find(key);
    return it == map.end() ? nullptr : &it->second;
  };
  using namespace detail;
  if (auto v = get("d")) base.d = parse_count("d", *v);
  if (auto v = get("K")) base.K = parse_count("K", *v);
  if (auto v = get("m")) base.m = parse_count("m", *v);
  if (auto v = get("n")) base.n = parse_count("n", *v);
  if (auto v = get("snr"); v && !v->empty()) base.snr = parse_real("snr", *v);
  if (auto v = get("sigma"); v && !v->empty()) base.sigma = parse_real("sigma", *v);
  if (auto v = get("center-scale")) base.center_scale = parse_real("center-scale", *v);
  if (auto v = get("init")) {
    if (*v == "kmpp") base.init = InitKind::kmpp;
    else if (*v == "perturb") base.init = InitKind::perturb;
    else if (*v == "file") base.init = InitKind::file;
    else throw std::invalid_argument("unknown init '" + *v + "'");
  }
  if (auto v = get("rho")) base.rho = parse_real("rho", *v);
  if (auto v = get("init-file")) base.init_file = *v;
  if (auto v = get("score")) {
    if (*v == "squared") base.score = SeedScore::squared;
    else if (*v == "plain") base.score = SeedScore::plain;
    else throw std::invalid_argument("unknown score '" + *v + "'");
  }
  if (auto v = get("iters")) base.iters = parse_count("iters", *v);
  if (auto v = get("record-every")) base.record_every = parse_count("record-every", *v);
  if (auto v = get("trials")) base.trials = parse_count("trials", *v);
  if (auto v = get("seed")) base.seed = parse_count("seed", *v);
  if (auto v = get("threads")) base.threads = parse_count("threads", *v);
  if (auto v = get("data")) base.data = *v;
  if (auto v = get("label-col"); v && !v->empty()) base.label_col = parse_count("label-col", *v);
  if (auto v = get("csv-header")) base.csv_header = parse_bool("csv-header", *v);
  if (auto v = get("out")) base.out = *v;

  std::vector<std::size_t> ls;
  for (const auto& tok : split_list(get("L") ? *get("L") : "1")) {
    if (tok == "T/2") {
      if (base.iters < 2) throw std::invalid_argument("L=T/2 needs iters >= 2");
      ls.push_back(base.iters / 2);
    } else {
      ls.push_back(parse_count("L", tok));
    }
  }
  if (ls.empty()) throw std::invalid_argument("empty L list");

  std::vector<ExperimentConfig> out;
  const auto modes = split_list(get("mode") ? *get("mode") : "local");
  if (modes.empty()) throw std::invalid_argument("empty mode list");
  for (const auto& tok : modes) {
    ExperimentConfig c = base;
    c.mode = parse_run_mode(tok);
    if (c.mode == RunMode::local_kmeans || c.mode == RunMode::symmetric2) {
      for (std::size_t l : ls) {
        c.L = l;
        out.push_back(c);
      }
    } else {
      c.L = c.mode == RunMode::centralized ? 1 : ls.front();
      out.push_back(c);
    }
  }
  for (const auto& c : out) c.validate();
  return out;
}

inline ConfigMap to_config_map(const ExperimentConfig& c) {
  using detail::format_double;
  ConfigMap m;
  m["mode"] = to_string(c.mode);
  m["L"] = std::to_string(c.L);
  m["iters"] = std::to_string(c.iters);
  m["trials"] = std::to_string(c.trials);
  m["seed"] = std::to_string(c.seed);
  m["d"] = std::to_string(c.d);
  m["K"] = std::to_string(c.K);
  m["m"] = std::to_string(c.m);
  m["n"] = std::to_string(c.n);
  m["snr"] = c.snr ? format_double(*c.snr) : "";
  m["sigma"] = c.sigma ? format_double(*c.sigma) : "";
  m["center-scale"] = format_double(c.center_scale);
  m["init"] = c.init == InitKind::kmpp ? "kmpp" : c.init == InitKind::perturb ? "perturb" : "file";
  m["rho"] = format_double(c.rho);
  m["init-file"] = c.init_file;
  m["score"] = c.score == SeedScore::squared ? "squared" : "plain";
  m["record-every"] = std::to_string(c.record_every);
  m["threads"] = std::to_string(c.threads);
  m["data"] = c.data;
  m["label-col"] = c.label_col ? std::to_string(*c.label_col) : "";
  m["csv-header"] = c.csv_header ? "true" : "false";
  m["out"] = c.out;
  return m;
}

inline std::string to_config_text(const ExperimentConfig& c) {
  std::string s;
  for (const auto& key : config_keys()) s += key + "=" + to_config_map(c).at(key) + "\n";
  return s;
}

inline ExperimentConfig config_from_text(const std::string& text) {
  std::istringstream in(text);
  auto configs = build_experiments(parse_config_text(in));
  if (configs.size() != 1) throw std::invalid_argument("config text describes more than one experiment");
  return configs.front();
}

// Per-trial inputs shared by every compared mode.
struct TrialInputs {
  DistributedDataset data;
  std::optional<GroundTruth> truth;
  std::optional<Vector> theta_star;  // sym2 only
  ClusterModel init;                 // one center for sym2
  std::uint64_t checksum = 0;
};

// Loaded once per experiment; partitioned per trial.
struct CsvSource {
  LabeledPoints points;
};

inline Matrix load_init_file(const std::string& path, std::size_t rows, std::size_t d) {
  auto parsed = load_csv_dataset(path, CsvOptions{});
  if (parsed.points.rows() != rows || parsed.points.cols() != d)
    throw std::invalid_argument("init file must hold " + std::to_string(rows) + " rows of dimension " +
                                std::to_string(d));
  return std::move(parsed.points);
}

inline TrialInputs make_trial_inputs(const ExperimentConfig& c, std::size_t trial,
                                     const CsvSource* csv = nullptr) {
  const std::uint64_t seed = c.seed + trial;
  TrialInputs in;
  switch (c.source()) {
    case DataSource::kmixture: {
      MixtureSpec spec;
      spec.dimension = c.d;
      spec.centers = orthonormal_centers(c.K, c.d, c.center_scale);
      spec.noise_std = c.noise_std();
      spec.num_machines = c.m;
      spec.points_per_machine = c.n;
      in.data = generate_kmixture(spec, seed);
      in.truth = GroundTruth::from_centers(spec.centers);
      break;
    }
    case DataSource::symmetric2: {
      Vector theta(c.d, 0.0);
      theta[0] = c.center_scale;
      in.data = generate_symmetric2(theta, c.noise_std(), c.m, c.n, seed);
      Matrix two(2, c.d);
      two(0, 0) = c.center_scale;
      two(1, 0) = -c.center_scale;
      in.truth = GroundTruth{std::move(two), 2.0 * c.center_scale};
      in.theta_star = theta;
      break;
    }
    case DataSource::csv: {
      if (!csv) throw std::invalid_argument("CSV source not loaded");
      in.data = partition(csv->points.points, csv->points.labels, c.m, seed);
      if (in.data.has_labels()) in.truth = GroundTruth::from_centers(class_means(in.data, c.K));
      break;
    }
  }

  const bool sym2 = c.source() == DataSource::symmetric2;
  switch (c.init) {
    case InitKind::kmpp: {
      ClusterModel picked = local_kmeans_pp(in.data, sym2 ? 2 : c.K, seed, c.score);
      if (sym2) {
        Matrix theta(1, c.d);
        for (std::size_t q = 0; q < c.d; ++q) theta(0, q) = 0.5 * (picked.centers(0, q) - picked.centers(1, q));
        picked = ClusterModel{std::move(theta), {0}};
      }
      in.init = std::move(picked);
      break;
    }
    case InitKind::perturb: {
      if (sym2) {
        Matrix star(1, c.d);
        star(0, 0) = c.center_scale;
        in.init = perturbed_init(star, c.rho, seed, in.truth->Gamma);
      } else {
        in.init = perturbed_init(in.truth->centers, c.rho, seed, in.truth->Gamma);
      }
      break;
    }
    case InitKind::file:
      in.init = ClusterModel::from_centers(load_init_file(c.init_file, sym2 ? 1 : c.K, in.data.dim()));
      break;
  }
  in.checksum = in.data.checksum();
  return in;
}

inline RunResult run_trial(const ExperimentConfig& c, const TrialInputs& in, std::size_t trial) {
  const auto proto = c.protocol(c.seed + trial);
  if (c.mode == RunMode::symmetric2) {
    Vector theta(in.init.centers.row(0).begin(), in.init.centers.row(0).end());
    return run_symmetric2(in.data, proto, theta, in.theta_star);
  }
  return run(in.data, proto, in.init, in.truth);
}

inline constexpr std::array<const char*, 7> kSummaryFields = {"A_raw", "A_aligned", "G",       "Lambda",
                                                              "Delta", "objective", "rounds"};

inline double record_field(const IterationRecord& r, std::size_t field) {
  switch (field) {
    case 0: return r.A_raw;
    case 1: return r.A_aligned;
    case 2: return r.G;
    case 3: return r.Lambda;
    case 4: return r.Delta;
    case 5: return r.objective;
    case 6: return static_cast<double>(r.rounds);
  }
  return 0.0;
}

inline bool field_needs_truth(std::size_t field) { return field <= 3; }

struct SummaryRow {
  std::size_t t = 0;
  bool has_truth = false;
  std::array<double, kSummaryFields.size()> mean{};
  std::array<double, kSummaryFields.size()> stddev{};  // population standard deviation
};

struct TrialSummary {
  std::vector<SummaryRow> rows;

  const SummaryRow& final_row() const { return rows.back(); }
};

inline TrialSummary summarize(const std::vector<std::vector<IterationRecord>>& trials) {
  TrialSummary s;
  if (trials.empty()) return s;
  const std::size_t rows = trials.front().size();
  for (const auto& t : trials)
    if (t.size() != rows) throw std::invalid_argument("summarize: trials recorded different iterations");
  const double count = static_cast<double>(trials.size());
  for (std::size_t r = 0; r < rows; ++r) {
    SummaryRow row;
    row.t = trials.front()[r].t;
    row.has_truth = trials.front()[r].has_truth;
    for (std::size_t f = 0; f < kSummaryFields.size(); ++f) {
      double sum = 0.0;
      for (const auto& t : trials) sum += record_field(t[r], f);
      const double mean = sum / count;
      double sq = 0.0;
      for (const auto& t : trials) {
        const double dev = record_field(t[r], f) - mean;
        sq += dev * dev;
      }
      row.mean[f] = mean;
      row.stddev[f] = std::sqrt(sq / count);
    }
    s.rows.push_back(row);
  }
  return s;
}

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<std::vector<IterationRecord>> trials;
  std::vector<std::uint64_t> checksums;  // per trial
  TrialSummary summary;
};

namespace detail {

template <class Fn>
void for_each_trial(std::size_t trials, std::size_t threads, Fn&& fn) {
  if (threads <= 1 || trials <= 1) {
    for (std::size_t i = 0; i < trials; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(trials);
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < std::min(threads, trials); ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < trials; i = next++) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  pool.clear();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

inline bool same_data_parameters(const ExperimentConfig& a, const ExperimentConfig& b) {
  return a.source() == b.source() && a.d == b.d && a.K == b.K && a.m == b.m && a.n == b.n && a.snr == b.snr &&
         a.sigma == b.sigma && a.center_scale == b.center_scale && a.init == b.init && a.rho == b.rho &&
         a.init_file == b.init_file && a.score == b.score && a.trials == b.trials && a.seed == b.seed &&
         a.data == b.data && a.label_col == b.label_col && a.csv_header == b.csv_header;
}

}  // namespace detail

inline std::optional<CsvSource> load_source(const ExperimentConfig& c) {
  if (c.source() != DataSource::csv) return std::nullopt;
  CsvSource src{load_csv_dataset(c.data, CsvOptions{c.label_col, c.csv_header})};
  if (c.label_col && src.points.num_classes != c.K)
    throw std::invalid_argument("K=" + std::to_string(c.K) + " but the data has " +
                                std::to_string(src.points.num_classes) + " classes");
  return src;
}

// Runs every config on identical per-trial datasets and initial models.
inline std::vector<ExperimentResult> execute(const std::vector<ExperimentConfig>& configs) {
  if (configs.empty()) throw std::invalid_argument("no experiments to run");
  for (const auto& c : configs) {
    c.validate();
    if (!detail::same_data_parameters(c, configs.front()))
      throw std::invalid_argument("compared configs must share data parameters, init and base seed");
    if ((c.mode == RunMode::symmetric2) != (configs.front().mode == RunMode::symmetric2))
      throw std::invalid_argument("sym2 cannot be compared with K-cluster modes");
  }
  const auto& lead = configs.front();
  const auto csv = load_source(lead);

  std::vector<ExperimentResult> results(configs.size());
  for (std::size_t c = 0; c < configs.size(); ++c) {
    results[c].config = configs[c];
    results[c].trials.resize(lead.trials);
    results[c].checksums.resize(lead.trials);
  }
  detail::for_each_trial(lead.trials, lead.threads, [&](std::size_t trial) {
    const TrialInputs in = make_trial_inputs(lead, trial, csv ? &*csv : nullptr);
    for (std::size_t c = 0; c < configs.size(); ++c) {
      results[c].trials[trial] = run_trial(configs[c], in, trial).records;
      results[c].checksums[trial] = in.checksum;
    }
  });
  for (auto& r : results) r.summary = summarize(r.trials);
  return results;
}

// ---- CSV writers ----

inline void write_raw_csv(std::ostream& out, const ExperimentResult& r) {
  out << "trial,t,A_raw,A_aligned,G,Lambda,Delta,objective,rounds,is_sync,G_degenerate,dataset_checksum\n";
  using detail::format_metric;
  for (std::size_t trial = 0; trial < r.trials.size(); ++trial) {
    for (const auto& rec : r.trials[trial]) {
      out << trial << ',' << rec.t << ',';
      if (rec.has_truth)
        out << format_metric(rec.A_raw) << ',' << format_metric(rec.A_aligned) << ',' << format_metric(rec.G)
            << ',' << format_metric(rec.Lambda) << ',';
      else
        out << ",,,,";
      out << format_metric(rec.Delta) << ',' << format_metric(rec.objective) << ',' << rec.rounds << ','
          << (rec.is_sync ? 1 : 0) << ',' << (rec.G_degenerate ? 1 : 0) << ',' << r.checksums[trial] << '\n';
    }
  }
}

inline void write_summary_csv(std::ostream& out, const TrialSummary& s) {
  out << "t";
  for (const char* f : kSummaryFields) out << ',' << f << "_mean," << f << "_std";
  out << '\n';
  for (const auto& row : s.rows) {
    out << row.t;
    for (std::size_t f = 0; f < kSummaryFields.size(); ++f) {
      if (field_needs_truth(f) && !row.has_truth)
        out << ",,";
      else
        out << ',' << detail::format_metric(row.mean[f]) << ',' << detail::format_metric(row.stddev[f]);
    }
    out << '\n';
  }
}

// One row per recorded t; per variant the mean/std of A_aligned and the rounds.
inline void write_comparison_csv(std::ostream& out, const std::vector<ExperimentResult>& results) {
  std::map<std::size_t, std::vector<const SummaryRow*>> by_t;
  for (std::size_t c = 0; c < results.size(); ++c)
    for (const auto& row : results[c].summary.rows) {
      auto& slot = by_t[row.t];
      slot.resize(results.size(), nullptr);
      slot[c] = &row;
    }
  out << "t";
  for (const auto& r : results) {
    const auto l = r.config.label();
    out << ',' << l << "_A_aligned_mean," << l << "_A_aligned_std," << l << "_rounds";
  }
  out << '\n';
  for (const auto& [t, rows] : by_t) {
    out << t;
    for (std::size_t c = 0; c < results.size(); ++c) {
      const SummaryRow* row = c < rows.size() ? rows[c] : nullptr;
      if (!row) {
        out << ",,,";
        continue;
      }
      if (row->has_truth)
        out << ',' << detail::format_metric(row->mean[1]) << ',' << detail::format_metric(row->stddev[1]);
      else
        out << ",,";
      out << ',' << detail::format_metric(row->mean[6]);
    }
    out << '\n';
  }
}

namespace detail {

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write '" + path.string() + "'");
  f << content;
  if (!f) throw IoError("failed writing '" + path.string() + "'");
}

inline std::filesystem::path prepare_out_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw IoError("cannot create output directory '" + dir + "'");
  return dir;
}

}  // namespace detail

// Writes <label>_raw.csv and <label>_summary.csv for each result.
inline void write_results(const std::vector<ExperimentResult>& results, const std::string& dir) {
  const auto base = detail::prepare_out_dir(dir);
  for (const auto& r : results) {
    std::ostringstream raw, summary;
    write_raw_csv(raw, r);
    write_summary_csv(summary, r.summary);
    detail::write_file(base / (r.config.label() + "_raw.csv"), raw.str());
    detail::write_file(base / (r.config.label() + "_summary.csv"), summary.str());
  }
}

inline ExperimentResult run_experiment(const ExperimentConfig& config) {
  auto results = execute({config});
  write_results(results, config.out);
  return std::move(results.front());
}

// Also writes comparison.csv joining the summaries on t.
inline std::vector<ExperimentResult> compare_modes(const std::vector<ExperimentConfig>& configs) {
  auto results = execute(configs);
  write_results(results, configs.front().out);
  std::ostringstream table;
  write_comparison_csv(table, results);
  detail::write_file(detail::prepare_out_dir(configs.front().out) / "comparison.csv", table.str());
  return results;
}

}  // namespace localkmeans
