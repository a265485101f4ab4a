#pragma once

#include <vector>

#include "bapfactor/operator.hpp"
#include "bapfactor/space.hpp"

namespace bapfactor {

inline constexpr double kTolAuerbach = 1e-7;

/// Unit vectors e_j of a subspace together with biorthogonal functionals of
/// norm one, found by coordinate-ascent determinant maximization over the
/// induced unit ball.
struct AuerbachSystem {
  SubspaceBasis subspace;
  std::vector<Vec> points;               // ambient unit vectors e_j
  Eigen::MatrixXd point_coords;          // k x m, coordinates of e_j in the basis
  std::vector<Functional> cofunctionals; // ambient e_j*, supported on the subspace
  Eigen::MatrixXd cofunctional_coords;   // k x m, e_j* in subspace coordinates
  double det_value = 0.0;                // |det| of point_coords
  int cycles = 0;
};

AuerbachSystem auerbach_system(const SubspaceBasis& sub);

/// The rank-one operators B_j = e_j (x) e_j*, as ambient matrices that act as
/// the Auerbach decomposition of the identity on the subspace and annihilate a
/// complement.
std::vector<FiniteRankOperator> auerbach_projections(const AuerbachSystem& sys);

struct AuerbachReport {
  double max_unit_residual = 0.0;    // | ||e_j|| - 1 |
  double max_biorth_residual = 0.0;  // | e_i*(e_j) - delta_ij |
  double max_dual_residual = 0.0;    // | induced dual norm of e_j* - 1 |
  std::vector<bool> item_pass;       // per residual, same order as above
  bool pass = false;
};

AuerbachReport verify_auerbach(const AuerbachSystem& sys, double tol);

}  // namespace bapfactor
