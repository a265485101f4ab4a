#include "bapfactor/operator.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

namespace bapfactor {

int max_enum_dim() {
  if (const char* s = std::getenv("BAPFACTOR_MAX_ENUM_DIM")) {
    int v = std::atoi(s);
    if (v >= 1) return v;
  }
  return 20;
}

FiniteRankOperator::FiniteRankOperator(Eigen::MatrixXd matrix, NormedSpace domain,
                                       NormedSpace codomain)
    : mat_(std::move(matrix)), dom_(domain), cod_(codomain) {
  if (mat_.rows() != cod_.dim || mat_.cols() != dom_.dim)
    throw InputError("FiniteRankOperator: matrix shape does not match the spaces");
  if (!mat_.allFinite()) throw InputError("FiniteRankOperator: non-finite entry");
}

FiniteRankOperator FiniteRankOperator::zero(NormedSpace domain, NormedSpace codomain) {
  return FiniteRankOperator(Eigen::MatrixXd::Zero(codomain.dim, domain.dim), domain, codomain);
}

FiniteRankOperator FiniteRankOperator::identity(NormedSpace space) {
  return FiniteRankOperator(Eigen::MatrixXd::Identity(space.dim, space.dim), space, space);
}

Vec FiniteRankOperator::apply(const Vec& x) const {
  if (x.space != dom_) throw InputError("apply: vector not in the operator domain");
  return Vec(mat_ * x.coords, cod_);
}

FiniteRankOperator add(const FiniteRankOperator& a, const FiniteRankOperator& b) {
  if (a.domain() != b.domain() || a.codomain() != b.codomain())
    throw InputError("add: space mismatch");
  return FiniteRankOperator(a.matrix() + b.matrix(), a.domain(), a.codomain());
}

FiniteRankOperator subtract(const FiniteRankOperator& a, const FiniteRankOperator& b) {
  if (a.domain() != b.domain() || a.codomain() != b.codomain())
    throw InputError("subtract: space mismatch");
  return FiniteRankOperator(a.matrix() - b.matrix(), a.domain(), a.codomain());
}

FiniteRankOperator scale(double alpha, const FiniteRankOperator& a) {
  return FiniteRankOperator(alpha * a.matrix(), a.domain(), a.codomain());
}

FiniteRankOperator compose(const FiniteRankOperator& a, const FiniteRankOperator& b) {
  if (b.codomain() != a.domain()) throw InputError("compose: inner spaces mismatch");
  return FiniteRankOperator(a.matrix() * b.matrix(), b.domain(), a.codomain());
}

double spectral_norm(const Eigen::MatrixXd& m) {
  Eigen::MatrixXd a = m;  // one-sided Jacobi operates on columns
  const int n = static_cast<int>(a.cols());
  if (n == 0 || a.rows() == 0) return 0.0;
  const double off_tol = 1e-12;
  for (int sweep = 0; sweep < 100; ++sweep) {
    bool rotated = false;
    for (int i = 0; i < n - 1; ++i) {
      for (int j = i + 1; j < n; ++j) {
        double aii = a.col(i).squaredNorm();
        double ajj = a.col(j).squaredNorm();
        double aij = a.col(i).dot(a.col(j));
        if (std::abs(aij) <= off_tol * std::sqrt(aii * ajj)) continue;
        double zeta = (ajj - aii) / (2.0 * aij);
        double t = (zeta >= 0.0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        double cs = 1.0 / std::sqrt(1.0 + t * t);
        double sn = cs * t;
        Eigen::VectorXd ci = a.col(i);
        a.col(i) = cs * ci - sn * a.col(j);
        a.col(j) = sn * ci + cs * a.col(j);
        rotated = true;
      }
    }
    if (!rotated) break;
  }
  double best = 0.0;
  for (int j = 0; j < n; ++j) best = std::max(best, a.col(j).norm());
  return best;
}

namespace {

void check_enum_cap(int dim, const char* what) {
  const int cap = max_enum_dim();
  if (dim > cap)
    throw CapacityError(std::string("operator_norm: ") + what + " enumeration dimension " +
                        std::to_string(dim) + " exceeds cap " + std::to_string(cap));
}

// Max of `eval` over sign vectors sigma in {-1,+1}^dim; the first coordinate
// is pinned to +1 (the objective is sign-symmetric).
template <class F>
double max_over_signs(int dim, F&& eval) {
  Eigen::VectorXd sigma = Eigen::VectorXd::Ones(dim);
  double best = eval(sigma);
  const long count = dim >= 2 ? (1L << (dim - 1)) : 1L;
  for (long mask = 1; mask < count; ++mask) {
    for (int b = 0; b < dim - 1; ++b) sigma[b + 1] = (mask >> b) & 1 ? -1.0 : 1.0;
    best = std::max(best, eval(sigma));
  }
  return best;
}

}  // namespace

double operator_norm(const FiniteRankOperator& op) {
  const Eigen::MatrixXd& m = op.matrix();
  const NormedSpace& dom = op.domain();
  const NormedSpace& cod = op.codomain();

  // Domain L1: unit-ball vertices are +-e_j, so the norm is the largest
  // codomain norm of a column.
  if (dom.tag == NormTag::L1) {
    double best = 0.0;
    for (int j = 0; j < dom.dim; ++j) best = std::max(best, norm(cod, Eigen::VectorXd(m.col(j))));
    return best;
  }
  // Codomain Linf: ||Mx||_inf = max_i |row_i . x|; per-row domain dual norm.
  if (cod.tag == NormTag::Linf) {
    double best = 0.0;
    for (int i = 0; i < cod.dim; ++i)
      best = std::max(best, dual_norm(dom, Functional(m.row(i).transpose(), dom)));
    return best;
  }
  if (dom.tag == NormTag::L2 && cod.tag == NormTag::L2) return spectral_norm(m);

  // Domain Linf (codomain L1 or L2): maximize over cube vertices.
  if (dom.tag == NormTag::Linf) {
    check_enum_cap(dom.dim, "domain Linf");
    return max_over_signs(dom.dim,
                          [&](const Eigen::VectorXd& s) { return norm(cod, Eigen::VectorXd(m * s)); });
  }
  // L2 -> L1: ||Mx||_1 = max_sigma sigma.Mx; per-pattern l2 dual norm.
  check_enum_cap(cod.dim, "codomain L1");
  return max_over_signs(cod.dim,
                        [&](const Eigen::VectorXd& s) { return (m.transpose() * s).norm(); });
}

RangeBasisResult range_basis(const FiniteRankOperator& op) {
  if (auto cached = op.range_cache_) return *cached;

  const Eigen::MatrixXd& m = op.matrix();
  const int ncols = static_cast<int>(m.cols());
  double scale = 0.0;
  for (int j = 0; j < ncols; ++j) scale = std::max(scale, m.col(j).norm());
  const double tau = kRankTolFactor * scale;

  RangeBasisResult res;
  Eigen::MatrixXd resid = m;
  std::vector<bool> used(ncols, false);
  while (true) {
    int pivot = -1;
    double best = tau;
    for (int j = 0; j < ncols; ++j) {
      if (used[j]) continue;
      double nj = resid.col(j).norm();
      if (nj > best) {  // strict: ties keep the lowest index
        best = nj;
        pivot = j;
      }
    }
    if (pivot < 0) break;
    used[pivot] = true;
    res.pivot_columns.push_back(pivot);
    Eigen::VectorXd q = resid.col(pivot) / resid.col(pivot).norm();
    for (int j = 0; j < ncols; ++j)
      if (!used[j]) resid.col(j) -= q.dot(resid.col(j)) * q;
  }

  res.rank = static_cast<int>(res.pivot_columns.size());
  if (res.rank > 0) {
    Eigen::MatrixXd cols(m.rows(), res.rank);
    for (int t = 0; t < res.rank; ++t) cols.col(t) = m.col(res.pivot_columns[t]);
    res.basis.emplace(op.codomain(), std::move(cols));
  }
  op.range_cache_ = std::make_shared<const RangeBasisResult>(res);
  return res;
}

FiniteRankOperator rank_one(const Functional& f, const Vec& w) {
  return FiniteRankOperator(w.coords * f.coords.transpose(), f.space, w.space);
}

double subspace_operator_norm(const Eigen::MatrixXd& m, const SubspaceBasis& sub) {
  const NormedSpace& space = sub.ambient();
  const int d = space.dim;
  if (m.rows() != d || m.cols() != d) throw InputError("subspace_operator_norm: shape mismatch");
  const Eigen::MatrixXd& B = sub.columns();
  const int k = sub.dim();

  switch (space.tag) {
    case NormTag::L2: {
      // Orthonormalize and read off the spectral norm of the coordinate map.
      Eigen::MatrixXd q = B;
      for (int j = 0; j < k; ++j) {
        for (int t = 0; t < j; ++t) q.col(j) -= q.col(t).dot(q.col(j)) * q.col(t);
        q.col(j) /= q.col(j).norm();
      }
      return spectral_norm(q.transpose() * m * q);
    }
    case NormTag::Linf: {
      // ||Me||_inf over the section ball = max over output coordinates of an
      // LP over the section.
      Eigen::MatrixXd g = B.transpose() * m.transpose();  // column i = B' M' e_i
      double best = 0.0;
      for (int i = 0; i < d; ++i)
        best = std::max(best, support_maximize_coords(g.col(i), sub).value);
      return best;
    }
    case NormTag::L1: {
      check_enum_cap(d, "subspace codomain L1");
      Eigen::MatrixXd bmt = B.transpose() * m.transpose();
      return max_over_signs(d, [&](const Eigen::VectorXd& s) {
        return support_maximize_coords(bmt * s, sub).value;
      });
    }
  }
  return 0.0;
}

}  // namespace bapfactor
