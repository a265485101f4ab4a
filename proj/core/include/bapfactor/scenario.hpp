#pragma once

#include <cstdint>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "bapfactor/operator.hpp"

namespace bapfactor {

using ordered_json = nlohmann::ordered_json;

struct GeneratorSpec {
  std::uint64_t seed = 0;
  int block_count = 1;
  std::vector<int> ranks;
  double decay = 0.5;
};

/// A factorization instance: the two spaces, the constant K, and the block
/// list (explicit matrices, with the generator echoed when one was used).
struct Scenario {
  NormedSpace X;
  NormedSpace W;
  double K = 1.0;
  std::vector<Eigen::MatrixXd> blocks;
  std::optional<GeneratorSpec> generator;

  std::vector<FiniteRankOperator> block_operators() const;
};

/// Deterministic instance generation: unit-norm random rank-r_p blocks scaled
/// by decay^p, the trailing blocks damped (bisection) until every partial-sum
/// norm is within K ||T||, and the whole list normalized to ||T|| = 1.
Scenario gen_scenario(std::uint64_t seed, int dim_x, int dim_w, NormTag tag_x, NormTag tag_w,
                      int block_count, const std::vector<int>& ranks, double decay, double K = 1.0);

ordered_json scenario_to_json(const Scenario& s);
Scenario scenario_from_json(const ordered_json& j);

Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& s, const std::string& path);

/// Serialize with every scalar printed as decimal with 17 significant digits
/// (diffable and value-exact for doubles).
std::string dump_json_17(const ordered_json& j, int indent = 2);

ordered_json matrix_to_json(const Eigen::MatrixXd& m);  // row-major nested arrays
Eigen::MatrixXd matrix_from_json(const ordered_json& j);

}  // namespace bapfactor
