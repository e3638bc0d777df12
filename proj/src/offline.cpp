#include "runsmith/offline.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <unordered_set>

namespace runsmith {

namespace {

struct OracleState {
  std::size_t pos;
  std::vector<Key> buf;  // sorted
  bool operator<(const OracleState& o) const {
    if (pos != o.pos) return pos < o.pos;
    return buf < o.buf;
  }
};

struct OracleSearch {
  std::span<const Key> input;
  std::size_t m;
  std::uint64_t budget;
  std::uint64_t nodes = 0;
  std::optional<std::uint64_t> incumbent;  // best complete run count seen so far
  std::map<OracleState, std::pair<std::uint64_t, Direction>> memo;

  std::uint64_t dfs(const OracleState& state, std::uint64_t depth) {
    if (state.buf.empty() && state.pos == input.size()) {
      if (!incumbent || depth < *incumbent) incumbent = depth;
      return 0;
    }
    auto hit = memo.find(state);
    if (hit != memo.end()) return hit->second.first;
    if (++nodes > budget) throw BudgetExceededError(budget, incumbent);

    std::uint64_t best = ~std::uint64_t{0};
    Direction bestDir = Direction::Up;
    for (Direction dir : {Direction::Up, Direction::Down}) {
      ValueMachine vm;
      vm.buf = std::multiset<Key>(state.buf.begin(), state.buf.end());
      vm.input = input;
      vm.pos = state.pos;
      vm.capacity = m;
      vm.write_maximal_run(dir);
      OracleState next{vm.pos, vm.sorted_buffer()};
      std::uint64_t sub = 1 + dfs(next, depth + 1);
      if (sub < best) {
        best = sub;
        bestDir = dir;
      }
    }
    memo.emplace(state, std::make_pair(best, bestDir));
    return best;
  }
};

}  // namespace

OracleResult brute_force_opt(std::span<const Key> input, std::size_t m,
                             std::uint64_t nodeBudget) {
  if (m == 0) throw std::logic_error("oracle needs positive buffer size");
  OracleSearch search{input, m, nodeBudget};
  ValueMachine start(input, m);
  OracleState root{start.pos, start.sorted_buffer()};

  OracleResult result;
  result.optRuns = search.dfs(root, 0);
  result.exhaustive = true;
  result.nodesVisited = search.nodes;

  // walk the memo for the witness
  OracleState state = root;
  while (!(state.buf.empty() && state.pos == input.size())) {
    auto it = search.memo.find(state);
    if (it == search.memo.end()) throw std::logic_error("oracle memo missing witness state");
    Direction dir = it->second.second;
    result.witnessDirections.push_back(dir);
    ValueMachine vm;
    vm.buf = std::multiset<Key>(state.buf.begin(), state.buf.end());
    vm.input = input;
    vm.pos = state.pos;
    vm.capacity = m;
    vm.write_maximal_run(dir);
    state = OracleState{vm.pos, vm.sorted_buffer()};
  }
  return result;
}

RunSequence replay_directions(std::span<const Key> input, std::size_t m,
                              std::span<const Direction> directions) {
  ValueMachine vm(input, m);
  RunSequence seq{{}, m};
  std::size_t i = 0;
  while (!vm.done()) {
    if (i >= directions.size()) throw std::logic_error("replay ran out of directions");
    Run run{directions[i++], {}};
    vm.write_maximal_run(run.direction, &run.elements);
    seq.runs.push_back(std::move(run));
  }
  return seq;
}

namespace {

// exact maximal run lengths from a machine state, against the true future
std::pair<std::uint64_t, std::uint64_t> exact_lengths(const ValueMachine& vm) {
  std::uint64_t up, down;
  {
    ValueMachine probe = vm;
    up = probe.write_maximal_run(Direction::Up);
  }
  {
    ValueMachine probe = vm;
    down = probe.write_maximal_run(Direction::Down);
  }
  return {up, down};
}

}  // namespace

RunSequence greedy_offline(std::span<const Key> input, std::size_t m) {
  ValueMachine vm(input, m);
  RunSequence seq{{}, m};
  while (!vm.done()) {
    auto [up, down] = exact_lengths(vm);
    Run run{down > up ? Direction::Down : Direction::Up, {}};
    vm.write_maximal_run(run.direction, &run.elements);
    seq.runs.push_back(std::move(run));
  }
  return seq;
}

PtasConfig PtasConfig::from_epsilon(double eps, PtasVariant variant) {
  if (!(eps > 0.0) || eps > 1.0) throw std::logic_error("epsilon must be in (0, 1]");
  PtasConfig cfg;
  cfg.epsilon = eps;
  // guard against 1/(1/k) landing just above k in floating point
  cfg.blockRuns = static_cast<std::size_t>(std::ceil(1.0 / eps - 1e-9));
  cfg.variant = variant;
  return cfg;
}

namespace {

struct BlockCandidate {
  std::vector<Direction> dirs;
  std::uint64_t written = 0;
  bool terminal = false;
};

struct BlockSearch {
  std::size_t depth;
  PtasVariant variant;
  std::uint64_t combos = 0;
  std::uint64_t nodes = 0;
  std::optional<BlockCandidate> bestFull;
  std::optional<BlockCandidate> bestTerminal;

  static bool lex_less(const std::vector<Direction>& a, const std::vector<Direction>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                        [](Direction x, Direction y) {
                                          return static_cast<int>(x) < static_cast<int>(y);
                                        });
  }

  void offer_terminal(std::vector<Direction> dirs, std::uint64_t written) {
    ++combos;
    BlockCandidate cand{std::move(dirs), written, true};
    if (!bestTerminal || cand.dirs.size() < bestTerminal->dirs.size() ||
        (cand.dirs.size() == bestTerminal->dirs.size() && lex_less(cand.dirs, bestTerminal->dirs))) {
      bestTerminal = std::move(cand);
    }
  }

  void offer_full(std::vector<Direction> dirs, std::uint64_t written) {
    ++combos;
    BlockCandidate cand{std::move(dirs), written, false};
    if (!bestFull || cand.written > bestFull->written ||
        (cand.written == bestFull->written && lex_less(cand.dirs, bestFull->dirs))) {
      bestFull = std::move(cand);
    }
  }

  void rec(const ValueMachine& vm, std::vector<Direction>& dirs, std::uint64_t baseWritten) {
    ++nodes;
    if (vm.done()) {
      offer_terminal(dirs, vm.written - baseWritten);
      return;
    }
    if (dirs.size() == depth) {
      offer_full(dirs, vm.written - baseWritten);
      return;
    }
    if (variant == PtasVariant::Simple) {
      for (Direction dir : {Direction::Up, Direction::Down}) {
        ValueMachine child = vm;
        child.write_maximal_run(dir);
        dirs.push_back(dir);
        rec(child, dirs, baseWritten);
        dirs.pop_back();
      }
      return;
    }
    // Fibonacci: greedy branch free, shorter branch forced to repeat its direction
    auto [up, down] = exact_lengths(vm);
    Direction greedyDir = down > up ? Direction::Down : Direction::Up;
    Direction shortDir = opposite(greedyDir);
    {
      ValueMachine child = vm;
      child.write_maximal_run(greedyDir);
      dirs.push_back(greedyDir);
      rec(child, dirs, baseWritten);
      dirs.pop_back();
    }
    if (depth - dirs.size() >= 2) {
      ValueMachine child = vm;
      child.write_maximal_run(shortDir);
      if (child.done()) {
        dirs.push_back(shortDir);
        offer_terminal(dirs, child.written - baseWritten);
        dirs.pop_back();
        return;
      }
      child.write_maximal_run(shortDir);
      dirs.push_back(shortDir);
      dirs.push_back(shortDir);
      rec(child, dirs, baseWritten);
      dirs.pop_back();
      dirs.pop_back();
    }
  }
};

}  // namespace

PtasResult ptas(std::span<const Key> input, std::size_t m, const PtasConfig& config) {
  if (config.blockRuns == 0) throw std::logic_error("blockRuns must be positive");
  if (config.variant == PtasVariant::Fibonacci) {
    std::unordered_set<Key> seen;
    for (Key k : input) {
      if (!seen.insert(k).second) throw DuplicateKeyError(k);
    }
  }

  ValueMachine vm(input, m);
  PtasResult result;
  result.seq.m = m;
  while (!vm.done()) {
    BlockSearch search{config.blockRuns, config.variant};
    std::vector<Direction> dirs;
    search.rec(vm, dirs, vm.written);
    result.stats.combinationsExplored.push_back(search.combos);
    result.stats.nodesVisited += search.nodes;

    const BlockCandidate& chosen = search.bestTerminal ? *search.bestTerminal : *search.bestFull;
    for (Direction dir : chosen.dirs) {
      Run run{dir, {}};
      vm.write_maximal_run(dir, &run.elements);
      if (!run.elements.empty()) result.seq.runs.push_back(std::move(run));
    }
    if (search.bestTerminal) break;
    if (vm.done()) break;
    auto [up, down] = exact_lengths(vm);
    Run extra{down > up ? Direction::Down : Direction::Up, {}};
    vm.write_maximal_run(extra.direction, &extra.elements);
    result.seq.runs.push_back(std::move(extra));
  }
  return result;
}

}  // namespace runsmith
