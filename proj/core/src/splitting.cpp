#include "bapfactor/splitting.hpp"

#include <cmath>
#include <string>

namespace bapfactor {

FiniteRankOperator SplittingPlan::total() const {
  FiniteRankOperator sum = FiniteRankOperator::zero(X, W);
  for (const SplitBlock& b : blocks) sum = add(sum, b.A);
  return sum;
}

std::vector<FiniteRankOperator> split_block(const FiniteRankOperator& A,
                                            const AuerbachSystem& sys) {
  const int m = sys.subspace.dim();
  std::vector<FiniteRankOperator> b_ops = auerbach_projections(sys);
  std::vector<FiniteRankOperator> out;
  out.reserve(static_cast<size_t>(m) * m);
  for (int r = 0; r < m; ++r)
    for (int j = 0; j < m; ++j)
      out.push_back(compose(scale(1.0 / m, b_ops[j]), A));
  return out;
}

int atom_index(const std::vector<int>& m_list, int p, int i) {
  if (p < 1 || p > static_cast<int>(m_list.size())) throw InputError("atom_index: p out of range");
  const int mp = m_list[p - 1];
  if (i < 1 || i > mp * mp) throw InputError("atom_index: i out of range for block " + std::to_string(p));
  int s = i;
  for (int t = 0; t < p - 1; ++t) s += m_list[t] * m_list[t];
  return s;
}

std::pair<int, int> atom_index_inverse(const std::vector<int>& m_list, int s) {
  if (s < 1) throw InputError("atom_index_inverse: s must be >= 1");
  int offset = 0;
  for (size_t t = 0; t < m_list.size(); ++t) {
    const int sq = m_list[t] * m_list[t];
    if (s <= offset + sq) return {static_cast<int>(t) + 1, s - offset};
    offset += sq;
  }
  throw InputError("atom_index_inverse: s exceeds the atom count");
}

SplittingPlan build_splitting(const std::vector<FiniteRankOperator>& q_list, double K) {
  if (q_list.empty()) throw InputError("build_splitting: empty block list");
  if (K < 1.0) throw InputError("build_splitting: K must be >= 1");

  SplittingPlan plan;
  plan.X = q_list.front().domain();
  plan.W = q_list.front().codomain();
  plan.K = K;

  FiniteRankOperator sum = FiniteRankOperator::zero(plan.X, plan.W);
  for (const FiniteRankOperator& q : q_list) sum = add(sum, q);
  plan.norm_T = operator_norm(sum);

  // Property (*): every prefix must stay within K ||T||.
  const double bound = K * plan.norm_T * (1.0 + 1e-9) + 1e-12;
  FiniteRankOperator prefix = FiniteRankOperator::zero(plan.X, plan.W);
  for (size_t n = 0; n < q_list.size(); ++n) {
    prefix = add(prefix, q_list[n]);
    double pn = operator_norm(prefix);
    if (pn > bound)
      throw InputError("build_splitting: partial sum " + std::to_string(n + 1) + " has norm " +
                       std::to_string(pn) + " > K||T|| = " + std::to_string(K * plan.norm_T));
  }

  for (size_t p = 0; p < q_list.size(); ++p) {
    SplitBlock block{q_list[p], 0, std::nullopt, std::nullopt, {}};
    RangeBasisResult range = range_basis(q_list[p]);
    if (range.rank > 0) {
      block.m = range.rank;
      block.range = range.basis;
      block.auerbach = auerbach_system(*range.basis);
      std::vector<FiniteRankOperator> b_ops = auerbach_projections(*block.auerbach);
      const int m = block.m;
      for (int r = 0; r < m; ++r)
        for (int j = 0; j < m; ++j)
          block.c_ops.push_back(scale(1.0 / m, b_ops[j]));

      // Atoms: C_i o A_p = e_j (x) ((1/m) A_p' phi_j), kept in rank-one form.
      for (int r = 0; r < m; ++r) {
        for (int j = 0; j < m; ++j) {
          RankOneAtom atom;
          atom.f = Functional(q_list[p].matrix().transpose() *
                                  block.auerbach->cofunctionals[j].coords / m,
                              plan.X);
          atom.w = block.auerbach->points[j];
          atom.p = static_cast<int>(p) + 1;
          atom.i = r * m + j + 1;
          plan.atoms.push_back(std::move(atom));
        }
      }
    }
    plan.m_list.push_back(block.m);
    plan.blocks.push_back(std::move(block));
  }
  for (size_t s = 0; s < plan.atoms.size(); ++s) plan.atoms[s].s = static_cast<int>(s) + 1;
  return plan;
}

SplittingReport verify_partial_sums(const SplittingPlan& plan) {
  SplittingReport rep;
  rep.within_block_pass = true;
  rep.global_pass = true;
  rep.block_norm_pass = true;

  const double slack = 1e-7;
  const double block_bound = 2.0 + slack;

  for (const SplitBlock& block : plan.blocks) {
    std::vector<CurvePoint> curve;
    if (block.m > 0) {
      Eigen::MatrixXd running = Eigen::MatrixXd::Zero(plan.W.dim, plan.W.dim);
      for (size_t q = 0; q < block.c_ops.size(); ++q) {
        running += block.c_ops[q].matrix();
        double nq = subspace_operator_norm(running, *block.range);
        curve.push_back({static_cast<int>(q) + 1, nq, block_bound, block_bound - nq});
        if (nq > block_bound) rep.within_block_pass = false;
      }
    }
    rep.block_curves.push_back(std::move(curve));

    double an = operator_norm(block.A);
    double abound = 2.0 * plan.K * plan.norm_T + slack;
    rep.block_norms.push_back(
        {static_cast<int>(rep.block_norms.size()) + 1, an, abound, abound - an});
    if (an > abound) rep.block_norm_pass = false;
  }

  const double global_bound = 5.0 * plan.K * plan.norm_T + slack;
  Eigen::MatrixXd running = Eigen::MatrixXd::Zero(plan.W.dim, plan.X.dim);
  for (size_t s = 0; s < plan.atoms.size(); ++s) {
    running += plan.atoms[s].as_operator().matrix();
    double ns = operator_norm(FiniteRankOperator(running, plan.X, plan.W));
    rep.global_curve.push_back({static_cast<int>(s) + 1, ns, global_bound, global_bound - ns});
    rep.observed_global_max = std::max(rep.observed_global_max, ns);
    if (ns > global_bound) rep.global_pass = false;
  }
  if (plan.K * plan.norm_T > 0.0)
    rep.observed_ratio_over_K_normT = rep.observed_global_max / (plan.K * plan.norm_T);

  Eigen::MatrixXd total = plan.total().matrix();
  rep.reconstruction_residual =
      operator_norm(FiniteRankOperator(running - total, plan.X, plan.W));

  rep.pass = rep.within_block_pass && rep.global_pass && rep.block_norm_pass &&
             rep.reconstruction_residual <= 1e-9 * std::max(1.0, plan.norm_T);
  return rep;
}

}  // namespace bapfactor
