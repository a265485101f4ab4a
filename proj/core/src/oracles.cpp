#include "bapfactor/oracles.hpp"

#include <cmath>

#include "bapfactor/errors.hpp"

namespace bapfactor {

namespace {

// Scan the cube [center - radius, center + radius]^d with the given step,
// normalize each point onto the domain sphere, and track the best direction.
void scan_box(const Eigen::MatrixXd& m, const NormedSpace& dom, const NormedSpace& cod,
              const Eigen::VectorXd& center, double radius, double step, double& best,
              Eigen::VectorXd& best_dir) {
  const int d = dom.dim;
  const int steps = static_cast<int>(std::floor(2.0 * radius / step)) + 1;
  Eigen::VectorXi idx = Eigen::VectorXi::Zero(d);
  Eigen::VectorXd v(d);
  while (true) {
    for (int i = 0; i < d; ++i) v[i] = center[i] - radius + idx[i] * step;
    double nv = norm(dom, v);
    if (nv > 1e-9) {
      Eigen::VectorXd u = v / nv;
      double val = norm(cod, Eigen::VectorXd(m * u));
      if (val > best) {
        best = val;
        best_dir = u;
      }
    }
    int i = 0;
    while (i < d && ++idx[i] >= steps) idx[i++] = 0;
    if (i == d) break;
  }
}

}  // namespace

double grid_operator_norm(const Eigen::MatrixXd& m, const NormedSpace& domain,
                          const NormedSpace& codomain, double step) {
  if (domain.dim > 3) throw CapacityError("grid_operator_norm: dims <= 3 only");
  if (m.rows() != codomain.dim || m.cols() != domain.dim)
    throw InputError("grid_operator_norm: shape mismatch");

  double best = 0.0;
  Eigen::VectorXd best_dir = Eigen::VectorXd::Zero(domain.dim);
  scan_box(m, domain, codomain, Eigen::VectorXd::Zero(domain.dim), 1.0, step, best, best_dir);
  // Two zoom passes around the best direction pin the maximizer well below
  // the coarse step.
  double radius = 1.5 * step;
  for (int pass = 0; pass < 2; ++pass) {
    scan_box(m, domain, codomain, best_dir, radius, radius / 15.0, best, best_dir);
    radius /= 15.0;
  }
  return best;
}

}  // namespace bapfactor
