#pragma once

#include <limits>
#include <stdexcept>
#include <vector>

namespace localkmeans {

// Minimum-cost perfect matching on a square cost matrix (Kuhn-Munkres with
// potentials, O(n^3)). Returns the column assigned to each row.
inline std::vector<std::size_t> min_cost_assignment(const std::vector<std::vector<double>>& cost) {
  const std::size_t n = cost.size();
  for (const auto& row : cost)
    if (row.size() != n) throw std::invalid_argument("min_cost_assignment: matrix must be square");
  if (n == 0) return {};

  constexpr double inf = std::numeric_limits<double>::infinity();
  // 1-based internally; index 0 is the virtual root column.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> owner(n + 1, 0), way(n + 1, 0);

  for (std::size_t i = 1; i <= n; ++i) {
    owner[0] = i;
    std::size_t col = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[col] = 1;
      const std::size_t row = owner[col];
      double delta = inf;
      std::size_t next = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double reduced = cost[row - 1][j - 1] - u[row] - v[j];
        if (reduced < minv[j]) {
          minv[j] = reduced;
          way[j] = col;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          next = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[owner[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      col = next;
    } while (owner[col] != 0);
    do {
      const std::size_t prev = way[col];
      owner[col] = owner[prev];
      col = prev;
    } while (col != 0);
  }

  std::vector<std::size_t> row_to_col(n, 0);
  for (std::size_t j = 1; j <= n; ++j) row_to_col[owner[j] - 1] = j - 1;
  return row_to_col;
}

}  // namespace localkmeans
