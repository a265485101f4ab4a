#include "bapfactor/space.hpp"

#include <cmath>

#include "bapfactor/simplex.hpp"

namespace bapfactor {

std::string to_string(NormTag tag) {
  switch (tag) {
    case NormTag::L1: return "l1";
    case NormTag::L2: return "l2";
    case NormTag::Linf: return "linf";
  }
  return "?";
}

NormTag tag_from_string(const std::string& s) {
  if (s == "l1") return NormTag::L1;
  if (s == "l2") return NormTag::L2;
  if (s == "linf") return NormTag::Linf;
  throw InputError("unknown norm tag: '" + s + "' (expected l1, l2 or linf)");
}

double norm(const NormedSpace& space, const Eigen::VectorXd& coords) {
  if (coords.size() != space.dim) throw InputError("norm: dimension mismatch");
  switch (space.tag) {
    case NormTag::L1: return coords.lpNorm<1>();
    case NormTag::L2: return coords.norm();
    case NormTag::Linf: return coords.size() ? coords.lpNorm<Eigen::Infinity>() : 0.0;
  }
  return 0.0;
}

double norm(const NormedSpace& space, const Vec& v) {
  if (v.space != space) throw InputError("norm: vector belongs to a different space");
  return norm(space, v.coords);
}

double norm(const Vec& v) { return norm(v.space, v.coords); }

double dual_norm(const NormedSpace& space, const Functional& f) {
  if (f.space != space) throw InputError("dual_norm: functional over a different space");
  switch (space.tag) {
    case NormTag::L1: return f.coords.lpNorm<Eigen::Infinity>();
    case NormTag::L2: return f.coords.norm();
    case NormTag::Linf: return f.coords.lpNorm<1>();
  }
  return 0.0;
}

double dual_norm(const Functional& f) { return dual_norm(f.space, f); }

SubspaceBasis::SubspaceBasis(NormedSpace ambient, Eigen::MatrixXd columns)
    : ambient_(ambient), cols_(std::move(columns)) {
  if (cols_.rows() != ambient_.dim) throw InputError("SubspaceBasis: column size != ambient dim");
  const int k = static_cast<int>(cols_.cols());
  if (k < 1 || k > ambient_.dim) throw InputError("SubspaceBasis: need 1 <= k <= ambient dim");
  if (!cols_.allFinite()) throw InputError("SubspaceBasis: non-finite entry");

  // Independence check with the scale-invariant rank tolerance (modified
  // Gram-Schmidt residuals).
  double scale = 0.0;
  for (int j = 0; j < k; ++j) scale = std::max(scale, cols_.col(j).norm());
  const double tau = kRankTolFactor * scale;
  Eigen::MatrixXd r = cols_;
  for (int j = 0; j < k; ++j) {
    double nj = r.col(j).norm();
    if (nj <= tau) throw InputError("SubspaceBasis: columns are rank-deficient");
    Eigen::VectorXd q = r.col(j) / nj;
    for (int t = j + 1; t < k; ++t) r.col(t) -= q.dot(r.col(t)) * q;
  }
}

Vec SubspaceBasis::embed(const Eigen::VectorXd& c) const {
  if (c.size() != dim()) throw InputError("SubspaceBasis::embed: coordinate size mismatch");
  return Vec(cols_ * c, ambient_);
}

namespace {

SupportResult degenerate_result(const NormedSpace& space, int sub_dim) {
  SupportResult r;
  r.maximizer = Vec(Eigen::VectorXd::Zero(space.dim), space);
  r.value = 0.0;
  r.degenerate = true;
  if (sub_dim > 0) r.sub_coords = Eigen::VectorXd::Zero(sub_dim);
  return r;
}

// Unrestricted support point: a vertex of the unit ball (or the normalized
// gradient for L2).
SupportResult support_full(const NormedSpace& space, const Eigen::VectorXd& f) {
  const int d = space.dim;
  if (f.lpNorm<Eigen::Infinity>() == 0.0) return degenerate_result(space, 0);

  Eigen::VectorXd v = Eigen::VectorXd::Zero(d);
  switch (space.tag) {
    case NormTag::L1: {
      int best = 0;
      for (int i = 1; i < d; ++i)
        if (std::abs(f[i]) > std::abs(f[best])) best = i;
      v[best] = f[best] >= 0.0 ? 1.0 : -1.0;
      break;
    }
    case NormTag::Linf:
      for (int i = 0; i < d; ++i) v[i] = f[i] >= 0.0 ? 1.0 : -1.0;
      break;
    case NormTag::L2:
      v = f / f.norm();
      break;
  }
  SupportResult r;
  r.maximizer = Vec(v, space);
  r.value = f.dot(v);
  return r;
}

}  // namespace

static SupportResult support_maximize_coords_unscaled(const Eigen::VectorXd& g,
                                                      const SubspaceBasis& sub);

SupportResult support_maximize_coords(const Eigen::VectorXd& g, const SubspaceBasis& sub) {
  const NormedSpace& space = sub.ambient();
  const Eigen::MatrixXd& B = sub.columns();
  const int k = sub.dim();
  const int d = space.dim;
  if (g.size() != k) throw InputError("support_maximize_coords: functional size != subspace dim");

  double col_scale = 0.0;
  for (int j = 0; j < k; ++j) col_scale = std::max(col_scale, B.col(j).norm());
  if (g.lpNorm<Eigen::Infinity>() <= 1e-14 * std::max(1.0, col_scale))
    return degenerate_result(space, k);

  // Rescale to unit column norms and a unit-size objective; the LP tolerances
  // are absolute, so mixed scales (huge cofactor functionals against tiny
  // basis columns) would otherwise break the pivoting.
  Eigen::VectorXd col_inv(k);
  for (int j = 0; j < k; ++j) col_inv[j] = 1.0 / B.col(j).norm();
  if (space.tag != NormTag::L2) {
    Eigen::MatrixXd bs = B * col_inv.asDiagonal();
    Eigen::VectorXd gs = col_inv.asDiagonal() * g;
    const double g_scale = gs.lpNorm<Eigen::Infinity>();
    SubspaceBasis scaled(space, bs);
    SupportResult r = support_maximize_coords_unscaled(gs / g_scale, scaled);
    r.value *= g_scale;
    if (r.sub_coords.size() == k) r.sub_coords = col_inv.asDiagonal() * r.sub_coords;
    return r;
  }
  return support_maximize_coords_unscaled(g, sub);
}

static SupportResult support_maximize_coords_unscaled(const Eigen::VectorXd& g,
                                                      const SubspaceBasis& sub) {
  const NormedSpace& space = sub.ambient();
  const Eigen::MatrixXd& B = sub.columns();
  const int k = sub.dim();
  const int d = space.dim;

  SupportResult r;
  switch (space.tag) {
    case NormTag::L2: {
      // maximize g.c subject to c'Gc <= 1, G = B'B.
      Eigen::MatrixXd G = B.transpose() * B;
      Eigen::VectorXd y = G.llt().solve(g);
      double val = std::sqrt(g.dot(y));
      if (!(val > 0.0) || !std::isfinite(val)) return degenerate_result(space, k);
      Eigen::VectorXd c = y / val;
      r.sub_coords = c;
      r.maximizer = sub.embed(c);
      r.value = val;
      break;
    }
    case NormTag::Linf: {
      // c = u - w, u,w >= 0; constraints +-B(u-w) <= 1.
      Eigen::MatrixXd A(2 * d, 2 * k);
      A.block(0, 0, d, k) = B;
      A.block(0, k, d, k) = -B;
      A.block(d, 0, d, k) = -B;
      A.block(d, k, d, k) = B;
      Eigen::VectorXd b = Eigen::VectorXd::Ones(2 * d);
      Eigen::VectorXd obj(2 * k);
      obj << g, -g;
      LpResult lp = simplex_maximize(A, b, obj);
      if (!lp.bounded) throw ConvergenceError("support_maximize: LP unbounded (basis not full rank?)");
      Eigen::VectorXd c = lp.x.head(k) - lp.x.tail(k);
      r.sub_coords = c;
      r.maximizer = sub.embed(c);
      r.value = lp.value;
      break;
    }
    case NormTag::L1: {
      // c = u - w, auxiliary t >= |B c| componentwise, sum t <= 1.
      const int nv = 2 * k + d;
      Eigen::MatrixXd A(2 * d + 1, nv);
      A.setZero();
      A.block(0, 0, d, k) = B;
      A.block(0, k, d, k) = -B;
      A.block(0, 2 * k, d, d) = -Eigen::MatrixXd::Identity(d, d);
      A.block(d, 0, d, k) = -B;
      A.block(d, k, d, k) = B;
      A.block(d, 2 * k, d, d) = -Eigen::MatrixXd::Identity(d, d);
      A.block(2 * d, 2 * k, 1, d) = Eigen::MatrixXd::Ones(1, d);
      Eigen::VectorXd b = Eigen::VectorXd::Zero(2 * d + 1);
      b[2 * d] = 1.0;
      Eigen::VectorXd obj = Eigen::VectorXd::Zero(nv);
      obj.head(k) = g;
      obj.segment(k, k) = -g;
      LpResult lp = simplex_maximize(A, b, obj);
      if (!lp.bounded) throw ConvergenceError("support_maximize: LP unbounded (basis not full rank?)");
      Eigen::VectorXd c = lp.x.head(k) - lp.x.segment(k, k);
      r.sub_coords = c;
      r.maximizer = sub.embed(c);
      r.value = lp.value;
      break;
    }
  }
  return r;
}

SupportResult support_maximize(const NormedSpace& space, const Functional& f,
                               const SubspaceBasis* sub) {
  if (f.space != space) throw InputError("support_maximize: functional over a different space");
  if (!sub) return support_full(space, f.coords);
  if (sub->ambient() != space) throw InputError("support_maximize: subspace ambient mismatch");
  Eigen::VectorXd g = sub->columns().transpose() * f.coords;
  return support_maximize_coords(g, *sub);
}

}  // namespace bapfactor
