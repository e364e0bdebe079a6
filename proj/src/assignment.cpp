#include "berezin/assignment.hpp"

#include <algorithm>
#include <stdexcept>

namespace berezin {

namespace {

// Kuhn-style augmenting search on the bipartite graph of edges with
// cost <= threshold.
bool try_augment(const Eigen::MatrixXd& cost, double threshold, int row,
                 std::vector<char>& visited, std::vector<int>& col_to_row) {
  const int n = static_cast<int>(cost.cols());
  for (int j = 0; j < n; ++j) {
    if (visited[j] || cost(row, j) > threshold) continue;
    visited[j] = 1;
    if (col_to_row[j] < 0 ||
        try_augment(cost, threshold, col_to_row[j], visited, col_to_row)) {
      col_to_row[j] = row;
      return true;
    }
  }
  return false;
}

bool feasible(const Eigen::MatrixXd& cost, double threshold,
              std::vector<int>& col_to_row) {
  const int n = static_cast<int>(cost.rows());
  col_to_row.assign(n, -1);
  for (int i = 0; i < n; ++i) {
    std::vector<char> visited(n, 0);
    if (!try_augment(cost, threshold, i, visited, col_to_row)) return false;
  }
  return true;
}

}  // namespace

BottleneckResult bottleneck_assignment(const Eigen::MatrixXd& cost) {
  if (cost.rows() != cost.cols() || cost.rows() == 0)
    throw std::invalid_argument("bottleneck_assignment: square nonempty cost required");
  const int n = static_cast<int>(cost.rows());

  std::vector<double> values(cost.data(), cost.data() + n * n);
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());

  std::vector<int> col_to_row;
  int lo = 0, hi = static_cast<int>(values.size()) - 1;
  while (lo < hi) {
    const int mid = (lo + hi) / 2;
    if (feasible(cost, values[mid], col_to_row))
      hi = mid;
    else
      lo = mid + 1;
  }
  BottleneckResult result;
  result.value = values[lo];
  feasible(cost, result.value, col_to_row);
  result.row_to_col.assign(n, -1);
  for (int j = 0; j < n; ++j)
    if (col_to_row[j] >= 0) result.row_to_col[col_to_row[j]] = j;
  return result;
}

}  // namespace berezin
