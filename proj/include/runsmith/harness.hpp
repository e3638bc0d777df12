#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "runsmith/core.hpp"

namespace runsmith {

enum class OracleKind { None, BruteForce, Ptas, ConstructionOpt };

// inputSpec is a JSON object:
//   {"file": "<path>"}                                  fixed keys from disk
//   {"gen": "sorted"|"perm"|"greedy_gap"|"fixture_3m"|"rand_adversary"|"nearly_sorted", ...}
//   {"adversary": "deterministic"|"resaug", ...}        adaptive, needs the algorithm in the loop
// Seeded generators take the trial seed unless the spec pins "seed"; a pinned
// input seed leaves the trial seed to drive the algorithm's coins instead.
struct ExperimentSpec {
  std::string algorithmId;
  nlohmann::json inputSpec;
  std::size_t m = 0;
  std::size_t trials = 1;
  std::uint64_t seedBase = 0;
  OracleKind oracle = OracleKind::None;
  double epsilon = 1.0;
  std::uint64_t nodeBudget = 10'000'000;
};

struct ExperimentRecord {
  std::uint64_t seed = 0;
  std::uint64_t runCount = 0;
  std::vector<std::uint64_t> runLengths;
  double meanRunLength = 0.0;
  std::optional<std::uint64_t> optEstimate;
  std::string optProvenance;  // "bruteforce", "ptas", "construction"; empty when absent
  std::optional<double> ratio;
  bool ambiguityFlag = false;
  bool incomparable = false;  // oracle ran out of budget on this trial
  std::uint64_t durationMs = 0;
  std::string inputTag;  // groups trials that ran on the same input
};

struct ExperimentOutput {
  std::vector<ExperimentRecord> records;  // ordered by seed
  // Adaptive adversaries only: the input each trial realized, keyed by seed.
  std::map<std::uint64_t, std::vector<Key>> realizedInputs;
};

// Runs trials with seeds seedBase..seedBase+trials-1. Trials may execute
// concurrently (RUNSMITH_THREADS overrides the worker count); the record
// order and content are deterministic regardless.
ExperimentOutput run_experiment(const ExperimentSpec& spec);

struct CompetitiveSummary {
  double maxRatio = 0.0;
  // Max over inputs of the per-input mean ratio: the expectation over seeds
  // is taken per input before the outer max, so randomized algorithms are
  // judged on their per-input expected ratio.
  double meanRatio = 0.0;
  std::map<std::uint64_t, std::uint64_t> runCountHistogram;
};

CompetitiveSummary competitive_summary(const std::vector<ExperimentRecord>& records);

ExperimentSpec parse_experiment_spec(const nlohmann::json& j);
std::string records_to_csv(const std::vector<ExperimentRecord>& records);

// One algorithm over one fixed input. trialSeed drives the coin flips of the
// randomized algorithms; ambiguityOut (may be null) receives the ghost
// algorithm's fallback flag. "oracle" replays the brute-force witness.
RunSequence run_algorithm(const std::string& algorithmId, const std::vector<Key>& input,
                          std::size_t m, std::uint64_t trialSeed, double epsilon = 1.0,
                          std::uint64_t nodeBudget = 10'000'000, bool* ambiguityOut = nullptr);

}  // namespace runsmith
