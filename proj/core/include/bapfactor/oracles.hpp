#pragma once

#include <Eigen/Dense>

#include "bapfactor/space.hpp"

namespace bapfactor {

/// Independent grid-search estimate of the induced operator norm: dense grid
/// of step `step` over the cube, each point normalized onto the domain unit
/// sphere, followed by two local refinement passes around the best direction.
/// Supports dims <= 3; used as a cross-check of the exact engine.
double grid_operator_norm(const Eigen::MatrixXd& m, const NormedSpace& domain,
                          const NormedSpace& codomain, double step = 1e-2);

}  // namespace bapfactor
