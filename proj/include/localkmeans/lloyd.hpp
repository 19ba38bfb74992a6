#pragma once

// One local Lloyd step on a single machine: nearest-center assignment followed
// by the per-cluster mean.

#include <limits>

#include "localkmeans/common.hpp"

namespace localkmeans {

struct ClusterModel {
  Matrix centers;                  // K x d
  std::vector<std::size_t> sizes;  // points currently assigned to each center

  std::size_t num_clusters() const noexcept { return centers.rows(); }
  std::size_t dim() const noexcept { return centers.cols(); }

  static ClusterModel from_centers(Matrix centers) {
    const std::size_t k = centers.rows();
    return {std::move(centers), std::vector<std::size_t>(k, 0)};
  }

  friend bool operator==(const ClusterModel&, const ClusterModel&) = default;
};

struct Assignment {
  std::vector<std::size_t> labels;

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

namespace detail {

inline void check_dims(const Matrix& points, const Matrix& centers, const char* where) {
  if (centers.rows() == 0) throw std::invalid_argument(std::string(where) + ": no centers");
  if (!points.empty() && points.cols() != centers.cols())
    throw std::invalid_argument(std::string(where) + ": dimension mismatch");
}

// Nearest center and its squared distance; ties go to the lowest index.
inline std::pair<std::size_t, double> nearest(std::span<const double> x, const Matrix& centers) {
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < centers.rows(); ++k) {
    const double dist = squared_distance(x, centers.row(k));
    if (dist < best_d) {
      best_d = dist;
      best = k;
    }
  }
  return {best, best_d};
}

}  // namespace detail

inline Assignment assign(const Matrix& points, const Matrix& centers) {
  detail::check_dims(points, centers, "assign");
  Assignment out;
  out.labels.resize(points.rows());
  for (std::size_t j = 0; j < points.rows(); ++j) out.labels[j] = detail::nearest(points.row(j), centers).first;
  return out;
}

// Clusters that receive no points keep the previous center with size 0.
inline ClusterModel update_centers(const Matrix& points, const Assignment& assignment, std::size_t k,
                                   const ClusterModel& prev) {
  if (prev.num_clusters() != k) throw std::invalid_argument("update_centers: K mismatch with previous model");
  if (assignment.labels.size() != points.rows())
    throw std::invalid_argument("update_centers: assignment does not cover all points");
  if (!points.empty() && points.cols() != prev.dim())
    throw std::invalid_argument("update_centers: dimension mismatch");

  ClusterModel out{Matrix(k, prev.dim()), std::vector<std::size_t>(k, 0)};
  for (std::size_t j = 0; j < points.rows(); ++j) {
    const std::size_t c = assignment.labels[j];
    if (c >= k) throw std::invalid_argument("update_centers: label out of range");
    auto sum = out.centers.row(c);
    auto x = points.row(j);
    for (std::size_t q = 0; q < sum.size(); ++q) sum[q] += x[q];
    ++out.sizes[c];
  }
  for (std::size_t c = 0; c < k; ++c) {
    auto center = out.centers.row(c);
    if (out.sizes[c] == 0) {
      auto old = prev.centers.row(c);
      std::copy(old.begin(), old.end(), center.begin());
    } else {
      const double count = static_cast<double>(out.sizes[c]);
      for (double& v : center) v /= count;
    }
  }
  return out;
}

// Sum over points of the squared distance to the nearest center.
inline double local_objective(const Matrix& points, const Matrix& centers) {
  detail::check_dims(points, centers, "local_objective");
  double total = 0.0;
  for (std::size_t j = 0; j < points.rows(); ++j) total += detail::nearest(points.row(j), centers).second;
  return total;
}

}  // namespace localkmeans
