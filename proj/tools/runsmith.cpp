#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "runsmith/errors.hpp"
#include "runsmith/generators.hpp"
#include "runsmith/harness.hpp"
#include "runsmith/io.hpp"
#include "runsmith/offline.hpp"

namespace {

using namespace runsmith;

double parse_fraction(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) return std::stod(s);
  double num = std::stod(s.substr(0, slash));
  double den = std::stod(s.substr(slash + 1));
  if (den == 0.0) throw std::invalid_argument("--eps has a zero denominator");
  return num / den;
}

void write_text_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << body;
  out.flush();
  if (!out) throw IoError("write failed on " + path);
}

struct GenerateArgs {
  std::string gen;
  std::size_t m = 0;
  std::uint64_t n = 0;
  std::uint64_t c = 1;
  std::size_t t = 1;
  std::uint64_t runs = 3;
  std::uint64_t seed = 0;
  std::string out;
  bool binary = false;
};

int do_generate(const GenerateArgs& a) {
  std::vector<Key> keys;
  if (a.gen == "sorted") {
    keys.reserve(a.n);
    for (std::uint64_t i = 1; i <= a.n; ++i) keys.push_back(static_cast<Key>(i));
  } else if (a.gen == "perm") {
    keys = gen_random_permutation(a.n, a.seed);
  } else if (a.gen == "greedy_gap") {
    keys = fixture_greedy_gap(a.m, a.c);
  } else if (a.gen == "fixture_3m") {
    keys = fixture_3m_tight(a.m);
  } else if (a.gen == "rand_adversary") {
    keys = adversary_randomized(a.m, a.t, a.seed).input;
  } else {
    keys = gen_nearly_sorted(a.m, a.c, a.runs, a.seed).input;
  }
  if (a.binary) {
    write_keys_binary(a.out, keys);
  } else {
    write_keys_text(a.out, keys);
  }
  std::cout << keys.size() << "\n";
  return 0;
}

struct RunArgs {
  std::string algo;
  std::size_t m = 0;
  std::string in;
  std::uint64_t seed = 0;
  std::string eps = "1";
  std::uint64_t budget = 10'000'000;
  std::string out;
};

int do_run(const RunArgs& a) {
  std::vector<Key> keys = read_keys_auto(a.in);
  double eps = parse_fraction(a.eps);
  ResultDoc doc;
  if (a.algo == "oracle") {
    OracleResult o = brute_force_opt(keys, a.m, a.budget);
    RunSequence seq = replay_directions(keys, a.m, o.witnessDirections);
    doc = make_result_doc(seq, a.algo, a.m, a.seed);
    doc.opt = o.optRuns;
    doc.optProvenance = "bruteforce";
    doc.ratio = o.optRuns == 0 ? 1.0
                               : static_cast<double>(doc.r) / static_cast<double>(o.optRuns);
  } else {
    RunSequence seq = run_algorithm(a.algo, keys, a.m, a.seed, eps, a.budget);
    doc = make_result_doc(seq, a.algo, a.m, a.seed);
  }
  write_result_file(a.out, doc);
  std::cout << doc.r << "\n";
  return 0;
}

int do_bench(const std::string& specPath, const std::string& csvPath) {
  std::ifstream in(specPath, std::ios::binary);
  if (!in) throw IoError("cannot open " + specPath);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw IoError(specPath + ": " + e.what());
  }
  ExperimentSpec spec;
  try {
    spec = parse_experiment_spec(j);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(specPath + ": " + e.what());
  }
  ExperimentOutput out = run_experiment(spec);
  write_text_file(csvPath, records_to_csv(out.records));
  for (const auto& [seed, input] : out.realizedInputs) {
    write_keys_text(csvPath + ".realized." + std::to_string(seed) + ".txt", input);
  }
  std::cout << out.records.size() << " rows\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bounded-buffer run generation toolkit"};
  app.require_subcommand(1);

  GenerateArgs g;
  auto* generate = app.add_subcommand("generate", "write an input key file");
  generate->add_option("--gen", g.gen, "generator name")
      ->required()
      ->check(CLI::IsMember(
          {"sorted", "perm", "greedy_gap", "fixture_3m", "rand_adversary", "nearly_sorted"}));
  generate->add_option("--m", g.m, "buffer capacity the fixture is built for");
  generate->add_option("--n", g.n, "element count (sorted, perm)");
  generate->add_option("--c", g.c, "block/band multiplier (greedy_gap, nearly_sorted)");
  generate->add_option("--t", g.t, "segment count (rand_adversary)");
  generate->add_option("--runs", g.runs, "intended run count (nearly_sorted)");
  generate->add_option("--seed", g.seed, "generator seed");
  generate->add_option("--out", g.out, "output path")->required();
  generate->add_flag("--binary", g.binary, "write the binary format");

  RunArgs r;
  auto* run = app.add_subcommand("run", "run one algorithm over a key file");
  run->add_option("--algo", r.algo, "algorithm name")
      ->required()
      ->check(CLI::IsMember({"rs_up", "alternating", "greedy4m", "lookahead3m", "rand2m",
                             "greedy_offline", "ptas_simple", "ptas_fib", "ghost", "oracle"}));
  run->add_option("--m", r.m, "buffer capacity")->required();
  run->add_option("--in", r.in, "input key file (text or binary)")->required();
  run->add_option("--seed", r.seed, "coin seed for randomized algorithms");
  run->add_option("--eps", r.eps, "approximation slack, decimal or fraction like 1/3");
  run->add_option("--budget", r.budget, "oracle node budget");
  run->add_option("--out", r.out, "result JSON path")->required();

  std::string specPath, csvPath;
  auto* bench = app.add_subcommand("bench", "run an experiment spec, write CSV");
  bench->add_option("--spec", specPath, "experiment spec JSON")->required();
  bench->add_option("--out", csvPath, "CSV output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (generate->parsed()) return do_generate(g);
    if (run->parsed()) return do_run(r);
    return do_bench(specPath, csvPath);
  } catch (const IoError& e) {
    std::cerr << e.what() << "\n";
    return 3;
  } catch (const DuplicateKeyError& e) {
    std::cerr << e.what() << "\n";
    return 4;
  } catch (const BudgetExceededError& e) {
    std::cerr << e.what() << "\n";
    return 5;
  } catch (const std::logic_error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
}
