#include "bapfactor/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "bapfactor/version.hpp"

namespace bapfactor {

std::vector<FiniteRankOperator> Scenario::block_operators() const {
  std::vector<FiniteRankOperator> ops;
  ops.reserve(blocks.size());
  for (const Eigen::MatrixXd& m : blocks) ops.emplace_back(m, X, W);
  return ops;
}

namespace {

std::string format_17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void dump_rec(const ordered_json& j, std::string& out, int indent, int level) {
  const std::string pad(static_cast<size_t>(indent) * level, ' ');
  const std::string pad_in(static_cast<size_t>(indent) * (level + 1), ' ');
  switch (j.type()) {
    case ordered_json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      size_t k = 0;
      for (auto it = j.begin(); it != j.end(); ++it, ++k) {
        out += pad_in + ordered_json(it.key()).dump() + ": ";
        dump_rec(it.value(), out, indent, level + 1);
        if (k + 1 < j.size()) out += ",";
        out += "\n";
      }
      out += pad + "}";
      return;
    }
    case ordered_json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Numeric arrays stay on one line (matrix rows).
      bool flat = true;
      for (const auto& e : j)
        if (e.is_structured()) flat = false;
      out += flat ? "[" : "[\n";
      for (size_t k = 0; k < j.size(); ++k) {
        if (!flat) out += pad_in;
        dump_rec(j[k], out, indent, level + 1);
        if (k + 1 < j.size()) out += flat ? ", " : ",";
        if (!flat) out += "\n";
      }
      out += flat ? "]" : pad + "]";
      return;
    }
    case ordered_json::value_t::number_float:
      out += format_17(j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

}  // namespace

std::string dump_json_17(const ordered_json& j, int indent) {
  std::string out;
  dump_rec(j, out, indent, 0);
  out += "\n";
  return out;
}

ordered_json matrix_to_json(const Eigen::MatrixXd& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const ordered_json& j) {
  if (!j.is_array() || j.empty()) throw InputError("matrix: expected a non-empty array of rows");
  const auto rows = j.size();
  const auto cols = j[0].size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) throw InputError("matrix: ragged rows");
    for (size_t c = 0; c < cols; ++c) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
        j[i][c].get<double>();
  }
  if (!m.allFinite()) throw InputError("matrix: non-finite entry");
  return m;
}

ordered_json scenario_to_json(const Scenario& s) {
  ordered_json j;
  j["version"] = kVersion;
  j["X"] = {{"dim", s.X.dim}, {"tag", to_string(s.X.tag)}};
  j["W"] = {{"dim", s.W.dim}, {"tag", to_string(s.W.tag)}};
  j["K"] = s.K;
  ordered_json blocks = ordered_json::array();
  for (const Eigen::MatrixXd& b : s.blocks) blocks.push_back(matrix_to_json(b));
  j["blocks"] = std::move(blocks);
  if (s.generator) {
    j["generator"] = {{"prng", kPrngName},
                      {"seed", s.generator->seed},
                      {"block_count", s.generator->block_count},
                      {"ranks", s.generator->ranks},
                      {"decay", s.generator->decay}};
  }
  return j;
}

Scenario scenario_from_json(const ordered_json& j) {
  Scenario s;
  try {
    s.X = NormedSpace(j.at("X").at("dim").get<int>(), tag_from_string(j.at("X").at("tag")));
    s.W = NormedSpace(j.at("W").at("dim").get<int>(), tag_from_string(j.at("W").at("tag")));
    s.K = j.at("K").get<double>();
    for (const auto& b : j.at("blocks")) {
      Eigen::MatrixXd m = matrix_from_json(b);
      if (m.rows() != s.W.dim || m.cols() != s.X.dim)
        throw InputError("scenario: block shape does not match the spaces");
      s.blocks.push_back(std::move(m));
    }
    if (j.contains("generator")) {
      GeneratorSpec g;
      g.seed = j["generator"].at("seed").get<std::uint64_t>();
      g.block_count = j["generator"].at("block_count").get<int>();
      g.ranks = j["generator"].at("ranks").get<std::vector<int>>();
      g.decay = j["generator"].at("decay").get<double>();
      s.generator = g;
    }
  } catch (const ordered_json::exception& e) {
    throw InputError(std::string("scenario: malformed file: ") + e.what());
  }
  if (s.K < 1.0) throw InputError("scenario: K must be >= 1");
  if (s.blocks.empty()) throw InputError("scenario: needs at least one block");
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open scenario file: " + path);
  ordered_json j;
  try {
    in >> j;
  } catch (const ordered_json::exception& e) {
    throw InputError(std::string("scenario parse error: ") + e.what());
  }
  return scenario_from_json(j);
}

void save_scenario(const Scenario& s, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write scenario file: " + path);
  out << dump_json_17(scenario_to_json(s));
}

namespace {

double max_prefix_ratio(const std::vector<Eigen::MatrixXd>& blocks, const NormedSpace& X,
                        const NormedSpace& W, double* out_norm_t) {
  Eigen::MatrixXd prefix = Eigen::MatrixXd::Zero(W.dim, X.dim);
  double curve_max = 0.0;
  for (const Eigen::MatrixXd& b : blocks) {
    prefix += b;
    curve_max = std::max(curve_max, operator_norm(FiniteRankOperator(prefix, X, W)));
  }
  double norm_t = operator_norm(FiniteRankOperator(prefix, X, W));
  if (out_norm_t) *out_norm_t = norm_t;
  return norm_t > 0.0 ? curve_max / norm_t : 0.0;
}

std::vector<Eigen::MatrixXd> damped(const std::vector<Eigen::MatrixXd>& blocks, double gamma) {
  std::vector<Eigen::MatrixXd> out;
  out.reserve(blocks.size());
  double factor = 1.0;
  for (size_t p = 0; p < blocks.size(); ++p) {
    out.push_back(factor * blocks[p]);
    factor *= gamma;
  }
  return out;
}

}  // namespace

Scenario gen_scenario(std::uint64_t seed, int dim_x, int dim_w, NormTag tag_x, NormTag tag_w,
                      int block_count, const std::vector<int>& ranks, double decay, double K) {
  if (block_count < 1) throw InputError("gen_scenario: block_count must be >= 1");
  if (static_cast<int>(ranks.size()) != block_count)
    throw InputError("gen_scenario: need one rank per block");
  if (!(decay > 0.0 && decay < 1.0)) throw InputError("gen_scenario: decay must be in (0,1)");
  if (K < 1.0) throw InputError("gen_scenario: K must be >= 1");

  Scenario s;
  s.X = NormedSpace(dim_x, tag_x);
  s.W = NormedSpace(dim_w, tag_w);
  s.K = K;
  s.generator = GeneratorSpec{seed, block_count, ranks, decay};

  const int min_dim = std::min(dim_x, dim_w);
  for (int r : ranks)
    if (r < 1 || r > min_dim) throw InputError("gen_scenario: rank out of [1, min dim]");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Eigen::MatrixXd> raw;
  double weight = decay;
  for (int p = 0; p < block_count; ++p) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(dim_w, dim_x);
    for (int t = 0; t < ranks[p]; ++t) {
      Eigen::VectorXd u(dim_w), v(dim_x);
      for (int i = 0; i < dim_w; ++i) u[i] = gauss(rng);
      for (int i = 0; i < dim_x; ++i) v[i] = gauss(rng);
      m += u * v.transpose();
    }
    double n = operator_norm(FiniteRankOperator(m, s.X, s.W));
    if (n <= 0.0) throw ConvergenceError("gen_scenario: degenerate random block");
    raw.push_back((weight / n) * m);
    weight *= decay;
  }

  // Enforce the property-(*) bound: damp trailing blocks until every partial
  // sum stays within K ||T||. A single global scale cannot change the ratio,
  // so the damping is geometric in the block index, found by bisection.
  std::vector<Eigen::MatrixXd> blocks = raw;
  if (max_prefix_ratio(blocks, s.X, s.W, nullptr) > K) {
    double lo = 0.0, hi = 1.0;  // ratio(0) = 1 <= K
    for (int it = 0; it < 60; ++it) {
      double mid = 0.5 * (lo + hi);
      if (max_prefix_ratio(damped(raw, mid), s.X, s.W, nullptr) <= K)
        lo = mid;
      else
        hi = mid;
    }
    blocks = damped(raw, lo);
  }

  // Normalize so that ||T|| = 1; bounds in reports then read directly in K.
  double norm_t = 0.0;
  max_prefix_ratio(blocks, s.X, s.W, &norm_t);
  if (norm_t <= 0.0) throw ConvergenceError("gen_scenario: total operator vanished");
  for (Eigen::MatrixXd& b : blocks) b /= norm_t;
  s.blocks = std::move(blocks);
  return s;
}

}  // namespace bapfactor
