#include "bapfactor/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <random>

#include "bapfactor/telescope.hpp"
#include "bapfactor/version.hpp"

namespace bapfactor {

std::vector<Vec> seeded_unit_vectors(const NormedSpace& space, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Vec> out;
  out.reserve(count);
  while (static_cast<int>(out.size()) < count) {
    Eigen::VectorXd v(space.dim);
    for (int i = 0; i < space.dim; ++i) v[i] = gauss(rng);
    double n = norm(space, v);
    if (n > 1e-12) out.emplace_back(v / n, space);
  }
  return out;
}

namespace {

ordered_json check_entry(const std::string& name, double value, double bound, bool pass) {
  return ordered_json{{"name", name}, {"value", value}, {"bound", bound},
                      {"margin", bound - value}, {"pass", pass}};
}

ordered_json curve_to_json(const std::vector<CurvePoint>& curve) {
  ordered_json arr = ordered_json::array();
  for (const CurvePoint& c : curve)
    arr.push_back(ordered_json{{"n", c.n}, {"norm", c.norm}, {"bound", c.bound}, {"margin", c.margin}});
  return arr;
}

ordered_json report_header(const Scenario& s, const char* mode, std::uint64_t seed) {
  ordered_json j;
  j["version"] = kVersion;
  j["mode"] = mode;
  j["prng"] = kPrngName;
  j["seed"] = seed;
  j["scenario"] = scenario_to_json(s);
  j["stages"] = ordered_json::array();
  return j;
}

void push_stage(ordered_json& report, const std::string& name, bool pass, ordered_json checks) {
  report["stages"].push_back(ordered_json{{"name", name}, {"pass", pass}, {"checks", std::move(checks)}});
}

std::uint64_t scenario_seed(const Scenario& s) {
  return s.generator ? s.generator->seed : 12345u;
}

}  // namespace

std::string curve_to_csv(const std::vector<CurvePoint>& curve) {
  std::string out = "n,norm,bound,margin\n";
  char buf[160];
  for (const CurvePoint& c : curve) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g\n", c.n, c.norm, c.bound, c.margin);
    out += buf;
  }
  return out;
}

PipelineResult run_factorize(const Scenario& scenario) {
  PipelineResult result;
  const std::uint64_t seed = scenario_seed(scenario);
  result.report = report_header(scenario, "factorize", seed);

  std::vector<FiniteRankOperator> q_list = scenario.block_operators();
  SplittingPlan plan = build_splitting(q_list, scenario.K);  // throws InputError on a bad prefix
  result.report["norm_T"] = plan.norm_T;
  result.report["atom_count"] = static_cast<int>(plan.atoms.size());
  {
    ordered_json ms = ordered_json::array();
    for (int m : plan.m_list) ms.push_back(m);
    result.report["m_list"] = std::move(ms);
  }

  SplittingReport split = verify_partial_sums(plan);
  {
    ordered_json checks = ordered_json::array();
    double worst_block = 0.0;
    for (const auto& curve : split.block_curves)
      for (const CurvePoint& c : curve) worst_block = std::max(worst_block, c.norm);
    checks.push_back(check_entry("within_block_partial_sum_max", worst_block, 2.0 + 1e-7,
                                 split.within_block_pass));
    checks.push_back(check_entry("global_partial_sum_max", split.observed_global_max,
                                 5.0 * plan.K * plan.norm_T + 1e-7, split.global_pass));
    double worst_a = 0.0;
    for (const CurvePoint& c : split.block_norms) worst_a = std::max(worst_a, c.norm);
    checks.push_back(check_entry("block_norm_max", worst_a, 2.0 * plan.K * plan.norm_T + 1e-7,
                                 split.block_norm_pass));
    checks.push_back(check_entry("reconstruction_residual", split.reconstruction_residual,
                                 1e-9 * std::max(1.0, plan.norm_T),
                                 split.reconstruction_residual <= 1e-9 * std::max(1.0, plan.norm_T)));
    push_stage(result.report, "splitting_bounds", split.pass, std::move(checks));
  }
  result.report["curve"] = curve_to_json(split.global_curve);
  {
    ordered_json bc = ordered_json::array();
    for (size_t p = 0; p < split.block_curves.size(); ++p)
      bc.push_back(ordered_json{{"p", static_cast<int>(p) + 1},
                                {"curve", curve_to_json(split.block_curves[p])}});
    result.report["block_curves"] = std::move(bc);
  }
  result.report["observed_global_max"] = split.observed_global_max;
  result.report["observed_ratio_over_K_normT"] = split.observed_ratio_over_K_normT;
  result.csv = curve_to_csv(split.global_curve);

  YSpace y(plan);
  FiniteRankOperator total = plan.total();
  std::vector<Vec> tests = seeded_unit_vectors(scenario.X, 500, seed ^ 0x9e3779b97f4a7c15ull);
  YSpace::FactorizationReport fact = y.verify_factorization(total, tests);
  {
    ordered_json checks = ordered_json::array();
    checks.push_back(check_entry("factorization_max_residual", fact.max_residual,
                                 1e-8 * plan.norm_T, fact.pass));
    push_stage(result.report, "factorization_identity", fact.pass, std::move(checks));
  }

  // ||j|| <= 1 and ||A~|| <= 5K ||T|| on seeded samples.
  bool contraction_ok = true, lift_ok = true;
  double worst_j = 0.0, worst_lift = 0.0;
  {
    std::mt19937_64 rng(seed ^ 0xc2b2ae3d27d4eb4full);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int atoms = y.atom_count();
    for (int t = 0; t < 500 && atoms > 0; ++t) {
      std::vector<double> c(atoms);
      for (int s = 0; s < atoms; ++s) c[s] = y.zero_atom(s) ? 0.0 : gauss(rng);
      YElement ye = y.element(std::move(c));
      double yn = y.y_norm(ye);
      double jn = norm(y.sum_j(ye));
      if (yn > 0.0) worst_j = std::max(worst_j, jn / yn);
      if (jn > yn * (1.0 + 1e-12)) contraction_ok = false;
    }
    const double lift_bound = 5.0 * plan.K * plan.norm_T;
    for (const Vec& x : tests) {
      double ln = y.y_norm(y.lift(x));  // ||x|| = 1
      worst_lift = std::max(worst_lift, ln);
      if (ln > lift_bound * (1.0 + 1e-7)) lift_ok = false;
    }
    ordered_json checks = ordered_json::array();
    checks.push_back(check_entry("j_contraction_max_ratio", worst_j, 1.0 + 1e-12, contraction_ok));
    checks.push_back(check_entry("lift_norm_max", worst_lift, lift_bound * (1.0 + 1e-7), lift_ok));
    push_stage(result.report, "y_space_bounds", contraction_ok && lift_ok, std::move(checks));
  }

  YSpace::MonotonicityReport mono = y.basis_monotonicity_check(100, seed ^ 0xa0761d6478bd642full);
  {
    ordered_json checks = ordered_json::array();
    checks.push_back(check_entry("monotonicity_max_violation", mono.max_violation, 1e-12, mono.pass));
    push_stage(result.report, "monotone_basis", mono.pass, std::move(checks));
  }

  BapCertificate cert = y.certificate_from_factorization();
  bool cert_norm_ok = true;
  double worst_rn = 0.0;
  for (double rn : cert.approximant_norms) {
    worst_rn = std::max(worst_rn, rn);
    if (rn > 5.0 * plan.K * plan.norm_T + 1e-7) cert_norm_ok = false;
  }
  double final_residual =
      operator_norm(subtract(cert.approximants.back(), total));
  bool final_ok = final_residual <= 1e-9 * std::max(1.0, plan.norm_T);
  {
    ordered_json checks = ordered_json::array();
    checks.push_back(check_entry("certificate_norm_max", worst_rn,
                                 5.0 * plan.K * plan.norm_T + 1e-7, cert_norm_ok));
    checks.push_back(check_entry("certificate_final_residual", final_residual,
                                 1e-9 * std::max(1.0, plan.norm_T), final_ok));
    push_stage(result.report, "converse_certificate", cert_norm_ok && final_ok, std::move(checks));
  }

  result.pass = split.pass && fact.pass && contraction_ok && lift_ok && mono.pass &&
                cert_norm_ok && final_ok;
  result.report["pass"] = result.pass;
  return result;
}

PipelineResult run_certify(const Scenario& scenario, const std::vector<double>& eps_list) {
  PipelineResult result;
  const std::uint64_t seed = scenario_seed(scenario);
  result.report = report_header(scenario, "certify", seed);

  std::vector<FiniteRankOperator> q_list = scenario.block_operators();
  std::vector<FiniteRankOperator> r_list = partial_sums(q_list);
  FiniteRankOperator total = r_list.back();
  std::vector<Vec> tests = seeded_unit_vectors(scenario.X, 100, seed ^ 0x9e3779b97f4a7c15ull);

  bool pointwise_ok = true;
  std::string pointwise_msg;
  ordered_json pw = ordered_json::array();
  try {
    BapCertificate cert = bap_from_pointwise(total, r_list, tests, scenario.K, eps_list);
    for (size_t n = 0; n < cert.approximant_norms.size(); ++n) {
      pw.push_back(ordered_json{{"N", static_cast<int>(n) + 1},
                                {"norm", cert.approximant_norms[n]},
                                {"residual", cert.epsilon_schedule[n]}});
    }
    ordered_json eps_json = ordered_json::array();
    for (size_t t = 0; t < eps_list.size(); ++t)
      eps_json.push_back(ordered_json{{"eps", eps_list[t]}, {"witness_N", cert.eps_witness[t]}});
    result.report["pointwise_certificate"] =
        ordered_json{{"C", cert.C}, {"norm_T", cert.norm_T}, {"per_N", std::move(pw)},
                     {"eps_witnesses", std::move(eps_json)}};
  } catch (const CertificationError& e) {
    pointwise_ok = false;
    pointwise_msg = e.what();
    result.report["pointwise_certificate"] = ordered_json{{"error", pointwise_msg}};
  }
  push_stage(result.report, "bap_from_pointwise", pointwise_ok,
             ordered_json::array({check_entry("pointwise_certified", pointwise_ok ? 1.0 : 0.0, 1.0,
                                              pointwise_ok)}));

  SplittingPlan plan = build_splitting(q_list, scenario.K);
  YSpace y(plan);
  BapCertificate conv = y.certificate_from_factorization();
  bool conv_ok = true;
  double worst_rn = 0.0;
  for (double rn : conv.approximant_norms) worst_rn = std::max(worst_rn, rn);
  if (worst_rn > 5.0 * plan.K * plan.norm_T + 1e-7) conv_ok = false;
  push_stage(result.report, "certificate_from_factorization", conv_ok,
             ordered_json::array({check_entry("certificate_norm_max", worst_rn,
                                              5.0 * plan.K * plan.norm_T + 1e-7, conv_ok)}));

  // Cross-check: both routes end at the same operator, each within its bound.
  double cross_residual = operator_norm(subtract(conv.approximants.back(), total));
  bool cross_ok = cross_residual <= 1e-9 * std::max(1.0, plan.norm_T);
  push_stage(result.report, "cross_check", cross_ok,
             ordered_json::array({check_entry("final_operator_residual", cross_residual,
                                              1e-9 * std::max(1.0, plan.norm_T), cross_ok)}));

  result.pass = pointwise_ok && conv_ok && cross_ok;
  result.report["pass"] = result.pass;
  return result;
}

}  // namespace bapfactor
