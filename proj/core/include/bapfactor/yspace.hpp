#pragma once

#include <cstdint>
#include <vector>

#include "bapfactor/splitting.hpp"
#include "bapfactor/telescope.hpp"

namespace bapfactor {

class YSpace;

/// A finitely supported sequence over the atom image lines, stored as the
/// coefficient of each atom's unit vector. Coefficients at zero atoms are
/// identically zero.
struct YElement {
  std::vector<double> coeffs;
  const YSpace* space = nullptr;
};

/// The sequence space the factorization passes through: coefficients against a
/// splitting plan, the prefix-sup norm, the lift, and the summation map.
class YSpace {
 public:
  explicit YSpace(const SplittingPlan& plan);

  const SplittingPlan& plan() const { return *plan_; }
  int atom_count() const { return static_cast<int>(unit_vectors_.size()); }

  /// Unit vector spanning atom s's image line (s is 0-based here); zero for a
  /// zero atom.
  const Vec& unit_vector(int s) const { return unit_vectors_[s]; }
  bool zero_atom(int s) const { return zero_atom_[s]; }

  YElement element(std::vector<double> coeffs) const;

  /// sup_n || sum_{s<=n} y(s) ||_W.
  double y_norm(const YElement& y) const;

  /// The coefficients of (A~_s x)_s; its norm is bounded by 5 K ||T|| ||x||.
  YElement lift(const Vec& x) const;

  /// The summation map j: y -> sum_s y(s); a contraction for the prefix-sup
  /// norm.
  Vec sum_j(const YElement& y) const;

  struct FactorizationReport {
    std::vector<double> residuals;  // || j(lift(x)) - Tx || per test vector
    std::vector<double> bounds;     // 1e-8 ||T|| ||x|| per test vector
    double max_residual = 0.0;
    bool pass = false;
  };
  FactorizationReport verify_factorization(const FiniteRankOperator& T,
                                           const std::vector<Vec>& test_set) const;

  struct MonotonicityReport {
    int samples = 0;
    double max_violation = 0.0;  // max over samples and m of norm_m - norm_{m+1}
    bool pass = false;
  };
  /// Prefix-expansion norms must be non-decreasing in the prefix length for
  /// every coefficient sequence (the basis is monotone).
  MonotonicityReport basis_monotonicity_check(int coeff_samples, std::uint64_t seed) const;

  /// Converse-direction certificate: R_N = j P_N A~ are the atom prefix
  /// sums, bounded by C = 5K, and the final one reconstructs T.
  BapCertificate certificate_from_factorization() const;

 private:
  const SplittingPlan* plan_;
  std::vector<Vec> unit_vectors_;   // y~_s
  std::vector<double> line_scale_;  // w_s = line_scale_[s] * y~_s
  std::vector<bool> zero_atom_;
};

}  // namespace bapfactor
