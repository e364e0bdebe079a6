// assignment.hpp - bottleneck assignment: minimize over perfect matchings
// the maximum matched cost. Threshold search over the sorted cost values
// with an augmenting-path feasibility check.

#pragma once

#include <Eigen/Dense>
#include <vector>

namespace berezin {

struct BottleneckResult {
  double value = 0.0;
  std::vector<int> row_to_col;  // row i matched to column row_to_col[i]
};

BottleneckResult bottleneck_assignment(const Eigen::MatrixXd& cost);

}  // namespace berezin
