#pragma once

#include <string>
#include <vector>

#include "bapfactor/scenario.hpp"
#include "bapfactor/splitting.hpp"
#include "bapfactor/yspace.hpp"

namespace bapfactor {

struct PipelineResult {
  bool pass = false;
  ordered_json report;
  std::string csv;  // global partial-sum curve: n, norm, bound, margin
};

/// Seeded unit vectors in the given space (the PRNG is the one named in the
/// report).
std::vector<Vec> seeded_unit_vectors(const NormedSpace& space, int count, std::uint64_t seed);

/// Full construction pipeline: telescoped blocks -> Auerbach split -> atom
/// sequence -> Y space, with every bound certified and reported.
PipelineResult run_factorize(const Scenario& scenario);

/// Both certification directions on one instance: bap_from_pointwise over the
/// scenario's partial sums, certificate_from_factorization from the plan, and
/// a cross-check that the two routes end at the same operator.
PipelineResult run_certify(const Scenario& scenario, const std::vector<double>& eps_list);

std::string curve_to_csv(const std::vector<CurvePoint>& curve);

}  // namespace bapfactor
