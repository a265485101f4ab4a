#pragma once

#include <Eigen/Dense>

namespace bapfactor {

struct LpResult {
  Eigen::VectorXd x;
  double value = 0.0;
  bool bounded = true;
};

/// Maximize c.x subject to A x <= b, x >= 0, with b >= 0 entrywise (the slack
/// basis is the starting point). Dense tableau simplex with Bland's rule:
/// entering variable = lowest index with positive reduced cost, leaving
/// variable ties broken by lowest basis index. Deterministic and cycle-free.
LpResult simplex_maximize(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                          const Eigen::VectorXd& c);

}  // namespace bapfactor
