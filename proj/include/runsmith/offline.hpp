#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "runsmith/core.hpp"

namespace runsmith {

struct OracleResult {
  std::uint64_t optRuns = 0;
  std::vector<Direction> witnessDirections;  // replaying these maximal runs attains optRuns
  bool exhaustive = true;
  std::uint64_t nodesVisited = 0;
};

// Exhaustive direction search over maximal runs with memoization on
// (input cursor, buffer contents). Throws BudgetExceededError past nodeBudget
// memo-miss states, carrying the best complete solution seen so far.
OracleResult brute_force_opt(std::span<const Key> input, std::size_t m,
                             std::uint64_t nodeBudget = 10'000'000);

// Writes maximal runs in the given directions until input is exhausted.
// Directions beyond what is needed are ignored; running out of directions
// before the input ends is an error.
RunSequence replay_directions(std::span<const Key> input, std::size_t m,
                              std::span<const Direction> directions);

// At every decision point, both maximal run lengths are computed exactly
// against the true remaining input; the longer direction is written (ties up).
RunSequence greedy_offline(std::span<const Key> input, std::size_t m);

enum class PtasVariant { Simple, Fibonacci };

struct PtasConfig {
  double epsilon = 1.0;
  std::size_t blockRuns = 1;  // ceil(1/epsilon)
  PtasVariant variant = PtasVariant::Simple;

  static PtasConfig from_epsilon(double eps, PtasVariant variant);
};

struct SearchStats {
  std::vector<std::uint64_t> combinationsExplored;  // leaf sequences evaluated, per partition
  std::uint64_t nodesVisited = 0;
};

struct PtasResult {
  RunSequence seq;
  SearchStats stats;
};

// Blockwise direction-sequence search. Per partition, all direction sequences
// of blockRuns maximal runs are enumerated (Simple: full binary tree;
// Fibonacci: greedy branch plus shorter-run branch with a forced same-
// direction follow-up). The sequence writing the most elements wins (ties
// lexicographic, up before down) and is emitted followed by one extra greedy
// run; a sequence that exhausts the input preempts everything (fewest runs,
// then lexicographic) and ends the algorithm. Fibonacci requires distinct
// keys.
PtasResult ptas(std::span<const Key> input, std::size_t m, const PtasConfig& config);

}  // namespace runsmith
