#include "bapfactor/auerbach.hpp"

#include <cmath>

namespace bapfactor {

namespace {

// Assemble the output record from point coordinates P (k x m), with
// biorthogonal functionals F = P^{-T} and ambient lifts through the basis.
AuerbachSystem finalize(const SubspaceBasis& sub, const Eigen::MatrixXd& P, int cycles) {
  const Eigen::MatrixXd& B = sub.columns();
  const int k = sub.dim();

  AuerbachSystem sys{sub, {}, P, {}, {}, 0.0, cycles};
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(P);
  sys.det_value = std::abs(lu.determinant());
  sys.cofunctional_coords = lu.solve(Eigen::MatrixXd::Identity(k, k)).transpose();  // P^{-T}

  // Ambient representative of a coordinate functional f: the unique phi in
  // span(B) with B' phi = f; it annihilates the orthogonal complement.
  Eigen::LLT<Eigen::MatrixXd> gram((B.transpose() * B).eval());
  for (int j = 0; j < k; ++j) {
    sys.points.emplace_back(B * P.col(j), sub.ambient());
    Eigen::VectorXd phi = B * gram.solve(sys.cofunctional_coords.col(j));
    sys.cofunctionals.emplace_back(phi, sub.ambient());
  }
  return sys;
}

// Coordinate ascent on |det| of the point coordinates. Returns true when a
// full cycle improves |det| by less than the relative threshold (stationary).
bool ascend(const SubspaceBasis& sub, Eigen::MatrixXd& P, int& cycles_used) {
  const int k = sub.dim();
  const double cycle_tol = 1e-10;
  const int max_cycles = 500;

  double det = P.determinant();
  if (std::abs(det) <= 0.0) throw InputError("auerbach_system: singular starting configuration");

  for (int cycle = 1; cycle <= max_cycles; ++cycle) {
    const double cycle_start = std::abs(det);
    for (int j = 0; j < k; ++j) {
      // Cofactor functional of column j: f(c) = det(P with col j <- c),
      // i.e. f = det * P^{-T} e_j; orient it so f(current) = |det|.
      Eigen::VectorXd f =
          P.transpose().partialPivLu().solve(Eigen::VectorXd::Unit(k, j)) * det;
      if (det < 0.0) f = -f;
      SupportResult res = support_maximize_coords(f, sub);
      if (res.degenerate) continue;
      if (res.value > std::abs(det) * (1.0 + 1e-12)) {
        P.col(j) = res.sub_coords;
        det = (det < 0.0 ? -res.value : res.value);
      }
    }
    cycles_used = cycle;
    if (std::abs(det) - cycle_start <= cycle_tol * cycle_start) return true;
  }
  return false;
}

Eigen::MatrixXd normalized_start(const SubspaceBasis& sub) {
  const int k = sub.dim();
  Eigen::MatrixXd P = Eigen::MatrixXd::Identity(k, k);
  for (int j = 0; j < k; ++j) {
    double nj = norm(sub.ambient(), Eigen::VectorXd(sub.columns().col(j)));
    P(j, j) = 1.0 / nj;
  }
  return P;
}

// Deterministic restart: Gram-Schmidt rotation of the basis coordinates,
// renormalized to the induced unit sphere.
Eigen::MatrixXd rotated_start(const SubspaceBasis& sub) {
  const int k = sub.dim();
  Eigen::MatrixXd Q = sub.columns();
  for (int j = 0; j < k; ++j) {
    for (int t = 0; t < j; ++t) Q.col(j) -= Q.col(t).dot(Q.col(j)) * Q.col(t);
    Q.col(j) /= Q.col(j).norm();
  }
  // Coordinates of the orthonormalized columns, scaled to induced norm 1.
  Eigen::MatrixXd P = (sub.columns().transpose() * sub.columns())
                          .llt()
                          .solve(sub.columns().transpose() * Q);
  for (int j = 0; j < k; ++j) {
    double nj = norm(sub.ambient(), Eigen::VectorXd(sub.columns() * P.col(j)));
    P.col(j) /= nj;
  }
  return P;
}

}  // namespace

AuerbachSystem auerbach_system(const SubspaceBasis& sub) {
  const int k = sub.dim();
  const NormedSpace& amb = sub.ambient();

  // Euclidean ambient: an orthonormal basis is already Auerbach.
  if (amb.tag == NormTag::L2) {
    Eigen::MatrixXd Q = sub.columns();
    for (int j = 0; j < k; ++j) {
      for (int t = 0; t < j; ++t) Q.col(j) -= Q.col(t).dot(Q.col(j)) * Q.col(t);
      Q.col(j) /= Q.col(j).norm();
    }
    Eigen::MatrixXd P = (sub.columns().transpose() * sub.columns())
                            .llt()
                            .solve(sub.columns().transpose() * Q);
    return finalize(sub, P, 0);
  }

  Eigen::MatrixXd P = normalized_start(sub);
  int cycles = 0;
  if (!ascend(sub, P, cycles)) {
    AuerbachSystem probe = finalize(sub, P, cycles);
    AuerbachReport rep = verify_auerbach(probe, kTolAuerbach);
    if (rep.pass) return probe;  // stalled but already Auerbach
    P = rotated_start(sub);
    if (!ascend(sub, P, cycles)) {
      AuerbachSystem last = finalize(sub, P, cycles);
      AuerbachReport r = verify_auerbach(last, kTolAuerbach);
      throw ConvergenceError(
          "auerbach_system: no stationary configuration within the cycle cap (residuals: unit " +
          std::to_string(r.max_unit_residual) + ", biorth " + std::to_string(r.max_biorth_residual) +
          ", dual " + std::to_string(r.max_dual_residual) + ")");
    }
  }
  return finalize(sub, P, cycles);
}

std::vector<FiniteRankOperator> auerbach_projections(const AuerbachSystem& sys) {
  std::vector<FiniteRankOperator> ops;
  const int k = sys.subspace.dim();
  ops.reserve(k);
  for (int j = 0; j < k; ++j) ops.push_back(rank_one(sys.cofunctionals[j], sys.points[j]));
  return ops;
}

AuerbachReport verify_auerbach(const AuerbachSystem& sys, double tol) {
  AuerbachReport rep;
  const int k = sys.subspace.dim();
  for (int j = 0; j < k; ++j)
    rep.max_unit_residual = std::max(rep.max_unit_residual, std::abs(norm(sys.points[j]) - 1.0));
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      double pairing = sys.cofunctional_coords.col(i).dot(sys.point_coords.col(j));
      rep.max_biorth_residual =
          std::max(rep.max_biorth_residual, std::abs(pairing - (i == j ? 1.0 : 0.0)));
    }
  }
  for (int j = 0; j < k; ++j) {
    double dn = support_maximize_coords(sys.cofunctional_coords.col(j), sys.subspace).value;
    rep.max_dual_residual = std::max(rep.max_dual_residual, std::abs(dn - 1.0));
  }
  rep.item_pass = {rep.max_unit_residual < tol, rep.max_biorth_residual < tol,
                   rep.max_dual_residual < tol};
  rep.pass = rep.item_pass[0] && rep.item_pass[1] && rep.item_pass[2];
  return rep;
}

}  // namespace bapfactor
