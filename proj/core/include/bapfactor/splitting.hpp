#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "bapfactor/auerbach.hpp"
#include "bapfactor/operator.hpp"

namespace bapfactor {

/// A rank-one atom x -> f(x) w, stored as the (functional, vector) pair with
/// an on-demand dense view. p is the owning block (1-based), i the within-
/// block index, s the global index.
struct RankOneAtom {
  Functional f;  // over X
  Vec w;         // in W
  int p = 0;
  int i = 0;
  int s = 0;

  FiniteRankOperator as_operator() const { return rank_one(f, w); }
};

/// Per-block data of the splitting: the block operator, its range, the
/// Auerbach system on the range, and the m^2 scaled copies C_i = (1/m) B_j.
struct SplitBlock {
  FiniteRankOperator A;
  int m = 0;                                // dim of the range; 0 for a zero block
  std::optional<SubspaceBasis> range;       // E_p (absent iff m == 0)
  std::optional<AuerbachSystem> auerbach;
  std::vector<FiniteRankOperator> c_ops;    // m^2 ambient W -> W operators, (r, j) order
};

/// The materialized construction: blocks, the flat atom sequence, and the
/// constants the bounds refer to.
struct SplittingPlan {
  NormedSpace X;
  NormedSpace W;
  std::vector<SplitBlock> blocks;
  std::vector<RankOneAtom> atoms;
  std::vector<int> m_list;  // m_p per block, zero blocks included
  double K = 1.0;
  double norm_T = 0.0;

  FiniteRankOperator total() const;  // sum of all blocks (= sum of all atoms)
};

/// Split A into the m^2 rank-one operators C_i o A in (r, j) order:
/// C_i = (1/m) B_j for i = r m + j. The system must be built on range(A).
std::vector<FiniteRankOperator> split_block(const FiniteRankOperator& A,
                                            const AuerbachSystem& sys);

/// Global index s = m_1^2 + ... + m_{p-1}^2 + i for 1 <= i <= m_p^2, with the
/// convention m_0 = 0; p is 1-based into m_list. Zero blocks contribute zero
/// offsets.
int atom_index(const std::vector<int>& m_list, int p, int i);
std::pair<int, int> atom_index_inverse(const std::vector<int>& m_list, int s);

/// Build the full plan from a telescoped block list. Rejects input whose
/// partial-sum norms exceed K ||T||, naming the offending prefix length.
SplittingPlan build_splitting(const std::vector<FiniteRankOperator>& q_list, double K);

struct CurvePoint {
  int n = 0;
  double norm = 0.0;
  double bound = 0.0;
  double margin = 0.0;  // bound - norm
};

struct SplittingReport {
  std::vector<std::vector<CurvePoint>> block_curves;  // within-block prefixes, bound 2
  std::vector<CurvePoint> global_curve;               // atom prefixes, bound 5 K ||T||
  std::vector<CurvePoint> block_norms;                // ||A_p||, bound 2 K ||T||
  double reconstruction_residual = 0.0;               // || sum atoms - sum blocks ||
  double observed_global_max = 0.0;
  double observed_ratio_over_K_normT = 0.0;  // empirical max / (K ||T||); 4K holds iff <= 4
  bool within_block_pass = false;
  bool global_pass = false;
  bool block_norm_pass = false;
  bool pass = false;
};

/// Certify the construction's bounds: within-block partial sums <= 2, global atom
/// partial sums <= 5 K ||T||, per-block norms <= 2 K ||T||. Violations are
/// reported, not thrown.
SplittingReport verify_partial_sums(const SplittingPlan& plan);

}  // namespace bapfactor
