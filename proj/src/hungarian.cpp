#include "dsc/hungarian.hpp"

#include <limits>
#include <stdexcept>

namespace dsc {

// Shortest augmenting path with row/column potentials, O(rows^2 cols).
std::vector<Index> solve_assignment(const Matrix& cost) {
  const Index n = cost.rows();
  const Index m = cost.cols();
  if (n > m) throw std::invalid_argument("solve_assignment: more rows than columns");
  require_finite(cost, "solve_assignment");
  const double inf = std::numeric_limits<double>::infinity();

  // 1-based with a virtual column 0.
  std::vector<double> u(static_cast<std::size_t>(n + 1), 0.0), v(static_cast<std::size_t>(m + 1), 0.0);
  std::vector<Index> owner(static_cast<std::size_t>(m + 1), 0), way(static_cast<std::size_t>(m + 1), 0);
  for (Index row = 1; row <= n; ++row) {
    owner[0] = row;
    Index col0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(m + 1), inf);
    std::vector<bool> used(static_cast<std::size_t>(m + 1), false);
    do {
      used[static_cast<std::size_t>(col0)] = true;
      const Index row0 = owner[static_cast<std::size_t>(col0)];
      double delta = inf;
      Index col1 = 0;
      for (Index j = 1; j <= m; ++j) {
        const auto ju = static_cast<std::size_t>(j);
        if (used[ju]) continue;
        const double reduced = cost(row0 - 1, j - 1) - u[static_cast<std::size_t>(row0)] - v[ju];
        if (reduced < minv[ju]) {
          minv[ju] = reduced;
          way[ju] = col0;
        }
        if (minv[ju] < delta) {
          delta = minv[ju];
          col1 = j;
        }
      }
      for (Index j = 0; j <= m; ++j) {
        const auto ju = static_cast<std::size_t>(j);
        if (used[ju]) {
          u[static_cast<std::size_t>(owner[ju])] += delta;
          v[ju] -= delta;
        } else {
          minv[ju] -= delta;
        }
      }
      col0 = col1;
    } while (owner[static_cast<std::size_t>(col0)] != 0);
    do {
      const Index col1 = way[static_cast<std::size_t>(col0)];
      owner[static_cast<std::size_t>(col0)] = owner[static_cast<std::size_t>(col1)];
      col0 = col1;
    } while (col0 != 0);
  }

  std::vector<Index> assignment(static_cast<std::size_t>(n), -1);
  for (Index j = 1; j <= m; ++j) {
    const Index row = owner[static_cast<std::size_t>(j)];
    if (row > 0) assignment[static_cast<std::size_t>(row - 1)] = j - 1;
  }
  return assignment;
}

}  // namespace dsc
