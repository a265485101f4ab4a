#pragma once

#include <functional>
#include <vector>

#include "bapfactor/operator.hpp"

namespace bapfactor {

enum class NetVariant { Lemma11, Lemma14 };

/// Radius of the net for which finite-set approximation implies compact-set
/// approximation at accuracy eps. Lemma11 assumes the normalization
/// norm_T = 1 and rejects anything else; Lemma14 carries norm_T explicitly.
double net_tolerance(double eps, double C, double norm_T, NetVariant variant);

/// Q_1 = S_1, Q_l = S_l - S_{l-1}: partial sums of the output reproduce the
/// input exactly.
std::vector<FiniteRankOperator> telescope(const std::vector<FiniteRankOperator>& s_list);

/// Exact inverse of telescope.
std::vector<FiniteRankOperator> partial_sums(const std::vector<FiniteRankOperator>& q_list);

struct FiniteSetReport {
  double norm_R = 0.0;
  double norm_bound = 0.0;  // C * ||T||
  double sup_error = 0.0;   // max over the test set of ||Rx - Tx||
  double eps = 0.0;
  bool norm_ok = false;
  bool approx_ok = false;
  bool pass = false;
};

/// Check ||R|| <= C ||T|| and sup_k ||R x_k - T x_k|| <= eps over a finite
/// test set. Failures are reported, never thrown.
FiniteSetReport certify_finite_set(const FiniteRankOperator& T, const FiniteRankOperator& R,
                                   const std::vector<Vec>& test_set, double eps, double C);

/// A uniformly bounded approximant sequence together with the finite test set
/// it was certified on.
struct BapCertificate {
  double C = 1.0;
  double norm_T = 0.0;
  std::vector<FiniteRankOperator> approximants;
  std::vector<Vec> test_set;
  std::vector<double> epsilon_schedule;   // per-N max residual over the test set
  std::vector<double> approximant_norms;  // per-N ||R_N||
  std::vector<double> eps_requested;
  std::vector<int> eps_witness;           // first index from which the residual stays <= eps
};

/// Certify a pointwise-convergent bounded sequence. Throws CertificationError
/// (naming the first offending N) if a norm bound fails; "eventually <= eps"
/// means: holds from some index through the end of the finite list.
BapCertificate bap_from_pointwise(const FiniteRankOperator& T,
                                  const std::vector<FiniteRankOperator>& r_list,
                                  const std::vector<Vec>& test_set, double C,
                                  const std::vector<double>& eps_list = {});

/// Responder contract: for a finite prefix and accuracy eps, return R with
/// ||R|| <= C ||T|| and max prefix error <= eps.
using FiniteSetOracle =
    std::function<FiniteRankOperator(const std::vector<Vec>& prefix, double eps)>;

/// Build R_1..R_depth by querying the oracle on prefixes of dense_seq at the
/// accuracy schedule eps_N = 1/2^(N+1). Oracle responses violating the
/// contract raise ProtocolError.
std::vector<FiniteRankOperator> pointwise_from_bap(const FiniteSetOracle& oracle,
                                                   const std::vector<Vec>& dense_seq, int depth,
                                                   const FiniteRankOperator& T, double C);

}  // namespace bapfactor
