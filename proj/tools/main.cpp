#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "bapfactor/oracles.hpp"
#include "bapfactor/pipeline.hpp"
#include "bapfactor/scenario.hpp"
#include "bapfactor/version.hpp"

namespace {

using namespace bapfactor;

constexpr int kExitPass = 0;
constexpr int kExitCertificationFailure = 1;
constexpr int kExitInputError = 2;

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

std::vector<int> parse_ints(const std::string& s) {
  std::vector<int> out;
  for (const std::string& t : split_commas(s)) out.push_back(std::stoi(t));
  return out;
}

std::vector<double> parse_doubles(const std::string& s) {
  std::vector<double> out;
  for (const std::string& t : split_commas(s)) out.push_back(std::stod(t));
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write file: " + path);
  out << content;
}

int finish_run(PipelineResult result, const std::string& out_path, const std::string& csv_path,
               double wall_seconds) {
  result.report["wall_time_s"] = wall_seconds;
  write_file(out_path, dump_json_17(result.report));
  if (!csv_path.empty()) write_file(csv_path, result.csv);
  for (const auto& stage : result.report["stages"])
    std::printf("[%s] %s\n", stage["pass"].get<bool>() ? "PASS" : "FAIL",
                stage["name"].get<std::string>().c_str());
  std::printf("%s: %s -> %s\n", result.pass ? "PASS" : "FAIL",
              result.report["mode"].get<std::string>().c_str(), out_path.c_str());
  return result.pass ? kExitPass : kExitCertificationFailure;
}

int cmd_gen(std::uint64_t seed, const std::string& dims, const std::string& tags, int blocks,
            const std::string& ranks, double decay, double K, const std::string& out_path) {
  std::vector<int> d = parse_ints(dims);
  std::vector<std::string> t = split_commas(tags);
  if (d.size() != 2 || t.size() != 2) throw InputError("gen: --dims and --tags need two entries");
  Scenario s = gen_scenario(seed, d[0], d[1], tag_from_string(t[0]), tag_from_string(t[1]), blocks,
                            parse_ints(ranks), decay, K);
  save_scenario(s, out_path);
  std::printf("scenario written: %s\n", out_path.c_str());
  return kExitPass;
}

int cmd_opnorm(const std::string& matrix_path, const std::string& from, const std::string& to) {
  std::ifstream in(matrix_path);
  if (!in) throw InputError("cannot open matrix file: " + matrix_path);
  ordered_json j;
  try {
    in >> j;
  } catch (const ordered_json::exception& e) {
    throw InputError(std::string("matrix parse error: ") + e.what());
  }
  Eigen::MatrixXd m = matrix_from_json(j);
  NormedSpace dom(static_cast<int>(m.cols()), tag_from_string(from));
  NormedSpace cod(static_cast<int>(m.rows()), tag_from_string(to));
  double n = operator_norm(FiniteRankOperator(m, dom, cod));
  std::printf("operator_norm = %.17g\n", n);
  if (dom.dim <= 3) {
    double g = grid_operator_norm(m, dom, cod);
    std::printf("grid_oracle   = %.17g (|diff| = %.3g)\n", g, std::abs(n - g));
  }
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-dimensional operator factorization through a sequence space with a "
               "monotone basis, with numeric certification of every bound"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "generate a seeded scenario file");
  std::uint64_t seed = 0;
  std::string dims, tags, ranks, gen_out;
  int blocks = 1;
  double decay = 0.5, K = 1.0;
  gen->add_option("--seed", seed, "PRNG seed")->required();
  gen->add_option("--dims", dims, "dim X,dim W (e.g. 4,5)")->required();
  gen->add_option("--tags", tags, "norm tags for X,W (l1|l2|linf)")->required();
  gen->add_option("--blocks", blocks, "number of blocks")->required();
  gen->add_option("--ranks", ranks, "comma list of block ranks")->required();
  gen->add_option("--decay", decay, "per-block decay in (0,1)")->required();
  gen->add_option("--K", K, "approximation constant K >= 1");
  gen->add_option("-o,--out", gen_out, "output scenario path")->required();

  // factorize
  auto* fact = app.add_subcommand("factorize", "run the full construction and certify the bounds");
  std::string fact_scenario, fact_out, fact_csv;
  fact->add_option("scenario", fact_scenario, "scenario file")->required();
  fact->add_option("-o,--out", fact_out, "output report path")->required();
  fact->add_option("--csv", fact_csv, "emit the global partial-sum curve as CSV");

  // certify
  auto* cert = app.add_subcommand("certify", "certify both BAP directions and cross-check");
  std::string cert_scenario, cert_out, cert_csv, eps_str;
  cert->add_option("scenario", cert_scenario, "scenario file")->required();
  cert->add_option("--eps", eps_str, "comma list of target accuracies")->required();
  cert->add_option("-o,--out", cert_out, "output report path")->required();
  cert->add_option("--csv", cert_csv, "emit the global partial-sum curve as CSV");

  // opnorm
  auto* opn = app.add_subcommand("opnorm", "induced norm of a matrix between tagged spaces");
  std::string matrix_path, from_tag, to_tag;
  opn->add_option("matrix", matrix_path, "JSON file with a row-major matrix")->required();
  opn->add_option("--from", from_tag, "domain norm tag")->required();
  opn->add_option("--to", to_tag, "codomain norm tag")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) return cmd_gen(seed, dims, tags, blocks, ranks, decay, K, gen_out);
    if (*opn) return cmd_opnorm(matrix_path, from_tag, to_tag);

    const auto t0 = std::chrono::steady_clock::now();
    if (*fact) {
      PipelineResult r = run_factorize(load_scenario(fact_scenario));
      double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      return finish_run(std::move(r), fact_out, fact_csv, dt);
    }
    PipelineResult r = run_certify(load_scenario(cert_scenario), parse_doubles(eps_str));
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return finish_run(std::move(r), cert_out, cert_csv, dt);
  } catch (const InputError& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return kExitInputError;
  } catch (const CapacityError& e) {
    std::fprintf(stderr, "capacity error: %s\n", e.what());
    return kExitInputError;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return kExitInputError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitCertificationFailure;
  }
}
