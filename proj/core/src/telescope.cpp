#include "bapfactor/telescope.hpp"

#include <cmath>
#include <string>

namespace bapfactor {

double net_tolerance(double eps, double C, double norm_T, NetVariant variant) {
  if (eps < 0.0) throw InputError("net_tolerance: eps must be >= 0");
  if (C < 1.0) throw InputError("net_tolerance: C must be >= 1");
  if (norm_T < 0.0) throw InputError("net_tolerance: norm_T must be >= 0");
  switch (variant) {
    case NetVariant::Lemma11:
      if (norm_T != 1.0)
        throw InputError("net_tolerance: the Lemma11 variant assumes norm_T = 1");
      return eps / (2.0 + C);
    case NetVariant::Lemma14:
      return eps / (norm_T + 1.0 + C * norm_T);
  }
  return 0.0;
}

std::vector<FiniteRankOperator> telescope(const std::vector<FiniteRankOperator>& s_list) {
  if (s_list.empty()) throw InputError("telescope: empty list");
  std::vector<FiniteRankOperator> q;
  q.reserve(s_list.size());
  q.push_back(s_list.front());
  for (size_t l = 1; l < s_list.size(); ++l) q.push_back(subtract(s_list[l], s_list[l - 1]));
  return q;
}

std::vector<FiniteRankOperator> partial_sums(const std::vector<FiniteRankOperator>& q_list) {
  if (q_list.empty()) throw InputError("partial_sums: empty list");
  std::vector<FiniteRankOperator> s;
  s.reserve(q_list.size());
  s.push_back(q_list.front());
  for (size_t l = 1; l < q_list.size(); ++l) s.push_back(add(s.back(), q_list[l]));
  return s;
}

FiniteSetReport certify_finite_set(const FiniteRankOperator& T, const FiniteRankOperator& R,
                                   const std::vector<Vec>& test_set, double eps, double C) {
  if (T.domain() != R.domain() || T.codomain() != R.codomain())
    throw InputError("certify_finite_set: operator spaces mismatch");
  FiniteSetReport rep;
  rep.eps = eps;
  rep.norm_R = operator_norm(R);
  rep.norm_bound = C * operator_norm(T);
  for (const Vec& x : test_set) {
    Vec rx = R.apply(x);
    Vec tx = T.apply(x);
    rep.sup_error = std::max(rep.sup_error, norm(T.codomain(), Eigen::VectorXd(rx.coords - tx.coords)));
  }
  rep.norm_ok = rep.norm_R <= rep.norm_bound * (1.0 + kTolNorm);
  rep.approx_ok = rep.sup_error <= eps;
  rep.pass = rep.norm_ok && rep.approx_ok;
  return rep;
}

BapCertificate bap_from_pointwise(const FiniteRankOperator& T,
                                  const std::vector<FiniteRankOperator>& r_list,
                                  const std::vector<Vec>& test_set, double C,
                                  const std::vector<double>& eps_list) {
  if (r_list.empty()) throw InputError("bap_from_pointwise: empty approximant list");

  BapCertificate cert;
  cert.C = C;
  cert.norm_T = operator_norm(T);
  cert.approximants = r_list;
  cert.test_set = test_set;
  cert.eps_requested = eps_list;

  const double bound = C * cert.norm_T * (1.0 + kTolNorm);
  for (size_t n = 0; n < r_list.size(); ++n) {
    double rn = operator_norm(r_list[n]);
    if (rn > bound)
      throw CertificationError("bap_from_pointwise: ||R_" + std::to_string(n + 1) + "|| = " +
                               std::to_string(rn) + " exceeds C||T|| = " + std::to_string(bound));
    cert.approximant_norms.push_back(rn);

    double sup = 0.0;
    for (const Vec& x : test_set) {
      Eigen::VectorXd diff = r_list[n].matrix() * x.coords - T.matrix() * x.coords;
      sup = std::max(sup, norm(T.codomain(), diff));
    }
    cert.epsilon_schedule.push_back(sup);
  }

  for (double eps : eps_list) {
    // "eventually <= eps" at desk scale: the residual stays <= eps from the
    // witness through the final index.
    int witness = -1;
    for (int n = static_cast<int>(cert.epsilon_schedule.size()) - 1; n >= 0; --n) {
      if (cert.epsilon_schedule[n] <= eps)
        witness = n;
      else
        break;
    }
    if (witness < 0)
      throw CertificationError("bap_from_pointwise: requested eps " + std::to_string(eps) +
                               " is not met at the final index (residual " +
                               std::to_string(cert.epsilon_schedule.back()) + ")");
    cert.eps_witness.push_back(witness + 1);
  }
  return cert;
}

std::vector<FiniteRankOperator> pointwise_from_bap(const FiniteSetOracle& oracle,
                                                   const std::vector<Vec>& dense_seq, int depth,
                                                   const FiniteRankOperator& T, double C) {
  if (depth < 1) throw InputError("pointwise_from_bap: depth must be >= 1");
  if (dense_seq.empty()) throw InputError("pointwise_from_bap: empty sequence");

  const double norm_T = operator_norm(T);
  const double bound = C * norm_T * (1.0 + kTolNorm);

  std::vector<FiniteRankOperator> out;
  out.reserve(depth);
  for (int N = 1; N <= depth; ++N) {
    const double eps = std::ldexp(1.0, -(N + 1));  // 1/2^(N+1)
    std::vector<Vec> prefix(dense_seq.begin(),
                            dense_seq.begin() + std::min<size_t>(N, dense_seq.size()));
    FiniteRankOperator R = oracle(prefix, eps);
    if (R.domain() != T.domain() || R.codomain() != T.codomain())
      throw ProtocolError("pointwise_from_bap: oracle returned mismatched spaces at N=" +
                          std::to_string(N));
    double rn = operator_norm(R);
    if (rn > bound)
      throw ProtocolError("pointwise_from_bap: oracle norm " + std::to_string(rn) +
                          " exceeds C||T|| at N=" + std::to_string(N));
    for (const Vec& x : prefix) {
      double err = norm(T.codomain(), Eigen::VectorXd(R.matrix() * x.coords - T.matrix() * x.coords));
      if (err > eps * (1.0 + kTolNorm) + 1e-15)
        throw ProtocolError("pointwise_from_bap: oracle error " + std::to_string(err) +
                            " exceeds eps at N=" + std::to_string(N));
    }
    out.push_back(std::move(R));
  }
  return out;
}

}  // namespace bapfactor
