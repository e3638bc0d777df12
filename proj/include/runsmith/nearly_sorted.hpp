#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "runsmith/core.hpp"
#include "runsmith/online.hpp"

namespace runsmith {

// Input quality claim: some optimal proper schedule writes only runs of
// length >= c*m. witnessed means the claim was verified against the oracle;
// otherwise it is construction-based.
struct SortednessCertificate {
  std::uint64_t c = 0;
  bool witnessed = false;
  std::vector<std::uint64_t> witnessRunLengths;
};

struct GhostPartitionTrace {
  Direction coin = Direction::Up;
  bool lucky = false;
  bool ambiguous = false;        // both runs ended below 3m
  std::uint64_t realLen = 0;     // ticks of the chosen run, ghost deletions included
  std::uint64_t simLen = 0;      // total ticks of the simulated opposite run
  std::uint64_t catchupCount = 0;
  std::vector<Key> preLive;      // sorted
  std::vector<Key> preGhosts;    // sorted
  std::uint64_t preConsumed = 0;
  std::vector<Key> postLive;
  std::vector<Key> postGhosts;
  std::uint64_t postConsumed = 0;
  std::size_t maxOccupancy = 0;  // max of live+ghosts seen this partition
};

struct GhostResult {
  RunSequence seq;
  CoinRecord coins;
  bool ambiguityFlag = false;
  std::vector<GhostPartitionTrace> partitions;
};

// Coin-flipped direction per partition with a lockstep shadow, recovering
// from wrong guesses through ghost markers: the divergence is written out in
// simulated-run order without reads (each freed slot marks one element the
// real run wrote that the simulated run still held), after which the
// simulated run is resumed as if it had been chosen all along. Ghost markers
// occupy buffer slots and are deleted (not re-written) when a later run
// passes them; deletions count toward run length but emit nothing. Requires
// distinct keys.
GhostResult ghost_randomized(std::span<const Key> input, std::size_t m, CoinSource& coins);
GhostResult ghost_randomized(std::span<const Key> input, std::size_t m, std::uint64_t seed);

// Every run of length >= 5m proves the sequence is optimal for buffer m.
bool check_5m_optimality(const RunSequence& seq, std::size_t m);

}  // namespace runsmith
