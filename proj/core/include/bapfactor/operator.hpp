#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "bapfactor/space.hpp"

namespace bapfactor {

// Relative tolerance of the induced-norm engine.
inline constexpr double kTolNorm = 1e-8;

/// Hard cap for the sign-enumeration norm cases; the env var
/// BAPFACTOR_MAX_ENUM_DIM overrides the default of 20.
int max_enum_dim();

struct RangeBasisResult {
  int rank = 0;
  std::optional<SubspaceBasis> basis;  // absent iff rank == 0
  std::vector<int> pivot_columns;      // selection order
};

/// A dense matrix viewed as a bounded operator between two normed spaces.
/// Immutable; rank data is computed on demand and cached.
class FiniteRankOperator {
 public:
  FiniteRankOperator(Eigen::MatrixXd matrix, NormedSpace domain, NormedSpace codomain);

  static FiniteRankOperator zero(NormedSpace domain, NormedSpace codomain);
  static FiniteRankOperator identity(NormedSpace space);

  const Eigen::MatrixXd& matrix() const { return mat_; }
  const NormedSpace& domain() const { return dom_; }
  const NormedSpace& codomain() const { return cod_; }

  Vec apply(const Vec& x) const;

 private:
  Eigen::MatrixXd mat_;
  NormedSpace dom_;
  NormedSpace cod_;

  // Idempotent last-write-wins cache of identical values.
  mutable std::shared_ptr<const RangeBasisResult> range_cache_;
  friend RangeBasisResult range_basis(const FiniteRankOperator&);
};

FiniteRankOperator add(const FiniteRankOperator& a, const FiniteRankOperator& b);
FiniteRankOperator subtract(const FiniteRankOperator& a, const FiniteRankOperator& b);
FiniteRankOperator scale(double alpha, const FiniteRankOperator& a);
/// compose(a, b) = a after b (domain of a = codomain of b).
FiniteRankOperator compose(const FiniteRankOperator& a, const FiniteRankOperator& b);

/// Exact induced operator norm for every (domain, codomain) tag pair.
/// Sign-enumeration cases (Linf domain, or L2 -> L1) throw CapacityError when
/// the enumeration dimension exceeds max_enum_dim().
double operator_norm(const FiniteRankOperator& op);

/// Largest singular value of a dense matrix by one-sided Jacobi rotations
/// (100-sweep cap, off-diagonal tolerance 1e-12).
double spectral_norm(const Eigen::MatrixXd& m);

/// Column-pivoted basis of the column space: greedy largest-residual-first
/// pivoting, ties by lowest index, rank tolerance 1e-10 x largest column norm.
RangeBasisResult range_basis(const FiniteRankOperator& op);

/// x -> f(x) w.
FiniteRankOperator rank_one(const Functional& f, const Vec& w);

/// Induced norm of an ambient matrix m restricted to the subspace (as an
/// operator span -> ambient with the induced domain norm). This is the norm
/// the within-block bounds refer to.
double subspace_operator_norm(const Eigen::MatrixXd& m, const SubspaceBasis& sub);

}  // namespace bapfactor
