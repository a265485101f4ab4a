#include "bapfactor/simplex.hpp"

#include <cmath>
#include <vector>

#include "bapfactor/errors.hpp"

namespace bapfactor {

LpResult simplex_maximize(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                          const Eigen::VectorXd& c) {
  const int m = static_cast<int>(A.rows());
  const int n = static_cast<int>(A.cols());
  if (b.size() != m || c.size() != n) throw InputError("simplex: shape mismatch");
  if ((b.array() < 0.0).any()) throw InputError("simplex: b must be nonnegative");

  const double tol = 1e-11;

  // Tableau: columns [structural | slack | rhs], last row = objective.
  Eigen::MatrixXd T(m + 1, n + m + 1);
  T.setZero();
  T.block(0, 0, m, n) = A;
  T.block(0, n, m, m) = Eigen::MatrixXd::Identity(m, m);
  T.block(0, n + m, m, 1) = b;
  T.block(m, 0, 1, n) = -c.transpose();

  std::vector<int> basis(m);
  for (int i = 0; i < m; ++i) basis[i] = n + i;

  const long max_iter = 200000;
  for (long iter = 0; iter < max_iter; ++iter) {
    // Bland: entering = lowest-index column with negative objective entry.
    int enter = -1;
    for (int j = 0; j < n + m; ++j) {
      if (T(m, j) < -tol) {
        enter = j;
        break;
      }
    }
    if (enter < 0) break;  // optimal

    // Ratio test; ties broken by lowest basis variable index.
    int leave = -1;
    double best_ratio = 0.0;
    for (int i = 0; i < m; ++i) {
      if (T(i, enter) > tol) {
        double ratio = T(i, n + m) / T(i, enter);
        if (leave < 0 || ratio < best_ratio - tol ||
            (ratio < best_ratio + tol && basis[i] < basis[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
    }
    if (leave < 0) {
      LpResult r;
      r.bounded = false;
      return r;
    }

    T.row(leave) /= T(leave, enter);
    for (int i = 0; i <= m; ++i) {
      if (i == leave) continue;
      double factor = T(i, enter);
      if (factor != 0.0) T.row(i) -= factor * T.row(leave);
    }
    basis[leave] = enter;
  }

  LpResult r;
  r.x = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < m; ++i) {
    if (basis[i] < n) r.x[basis[i]] = T(i, n + m);
  }
  r.value = T(m, n + m);
  return r;
}

}  // namespace bapfactor
