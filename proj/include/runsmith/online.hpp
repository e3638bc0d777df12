#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "runsmith/core.hpp"
#include "runsmith/rng.hpp"

namespace runsmith {

// An online run generator: consumes a source with buffer parameter m and
// produces a run sequence.
using OnlineAlgorithm = std::function<RunSequence(InputSource&, std::size_t)>;

struct CoinChoice {
  Direction coin = Direction::Up;
  bool luckyGreedy = false;  // the chosen run was at least as long as the other
};

struct CoinRecord {
  std::vector<CoinChoice> choices;
};

class CoinSource {
 public:
  virtual ~CoinSource() = default;
  virtual Direction flip() = 0;
};

// Low bit of each splitmix64 output: 1 = Down, 0 = Up.
class PrngCoins final : public CoinSource {
 public:
  explicit PrngCoins(std::uint64_t seed) : gen_(seed) {}
  Direction flip() override { return gen_.coin() ? Direction::Down : Direction::Up; }

 private:
  SplitMix64 gen_;
};

class ForcedCoins final : public CoinSource {
 public:
  explicit ForcedCoins(std::vector<Direction> coins) : coins_(std::move(coins)) {}
  Direction flip() override {
    if (next_ >= coins_.size()) throw std::logic_error("forced coin sequence exhausted");
    return coins_[next_++];
  }

 private:
  std::vector<Direction> coins_;
  std::size_t next_ = 0;
};

// Maximal up runs only.
RunSequence rs_up(InputSource& in, std::size_t m);

// Strictly alternating maximal runs.
RunSequence alternating_updown(InputSource& in, std::size_t m,
                               Direction first = Direction::Up);

struct PartitionDecision {
  SimResult up;
  SimResult down;
  Direction chosen = Direction::Up;
  std::uint64_t consumedBefore = 0;
  std::uint64_t writtenBefore = 0;
};

struct Greedy4mResult {
  RunSequence seq;
  std::vector<PartitionDecision> decisions;
};

// Greedy with an enlarged buffer (4m unless overridden): before each run, an
// m-buffer machine's two maximal run lengths are simulated over the enlarged
// buffer contents, capped at 3m; the run is written in the longer direction
// (ties up) using the full buffer. Requires distinct keys.
Greedy4mResult greedy_4m_buffer(InputSource& in, std::size_t m, std::size_t capacity = 0);

// m-buffer machine plus 3m-element lookahead. Each partition: pick the
// greedy direction by capped simulation, then write three maximal runs in
// that direction, that direction again, and the opposite. Requires distinct
// keys and a peekable source.
RunSequence lookahead_3m(InputSource& in, std::size_t m);

struct Rand2mResult {
  RunSequence seq;
  CoinRecord coins;
};

// Coin-flipped direction per partition, with a lockstep shadow of the run not
// taken. Lucky (chosen at least as long, ties lucky): two more maximal runs,
// same direction then opposite. Unlucky: three more, alternating from the
// opposite. Requires distinct keys.
Rand2mResult randomized_2m(InputSource& in, std::size_t m, CoinSource& coins);
Rand2mResult randomized_2m(InputSource& in, std::size_t m, std::uint64_t seed);

}  // namespace runsmith
