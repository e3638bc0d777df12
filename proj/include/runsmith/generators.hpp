#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "runsmith/core.hpp"
#include "runsmith/nearly_sorted.hpp"
#include "runsmith/online.hpp"

namespace runsmith {

// Sequence builders. All arithmetic is overflow-checked.
std::vector<Key> up_range(Key from, Key to);    // from, from+1, ..., to
std::vector<Key> down_range(Key from, Key to);  // from, from-1, ..., to
std::vector<Key> cat(std::vector<std::vector<Key>> parts);
std::vector<Key> shifted(std::vector<Key> v, Key delta);
std::vector<Key> scaled(std::vector<Key> v, Key factor);

// One block of the greedy/optimal gap construction (6m-1 elements, m >= 4).
std::vector<Key> greedy_gap_block(std::size_t m);

// c value-shifted copies of the block; exact greedy writes 3 runs per block,
// an all-down schedule writes 2.
std::vector<Key> fixture_greedy_gap(std::size_t m, std::size_t c);

// Input whose two fresh-buffer maximal runs are both short (4m-2 elements,
// m >= 2): up measures 3m-1, down 3m-2.
std::vector<Key> fixture_3m_tight(std::size_t m);

// Fisher-Yates permutation of 1..n.
std::vector<Key> gen_random_permutation(std::size_t n, std::uint64_t seed);

struct NearlySortedInstance {
  std::vector<Key> input;
  SortednessCertificate certificate;
  std::vector<Run> intendedRuns;
};

// Alternating value bands (each above or below everything before it) of
// length c*m plus seeded jitter below m, each band shuffled in blocks of m so
// no element sits more than m-1 positions from its in-band rank. A proper
// machine replaying the intended directions reproduces the bands exactly. At
// desk scale the certificate is checked against the oracle.
NearlySortedInstance gen_nearly_sorted(std::size_t m, std::uint64_t c, std::size_t runCount,
                                       std::uint64_t seed);

// Replays forced-length runs choosing the usual extreme element each step;
// throws if a forced step has no eligible element.
RunSequence play_script(std::span<const Key> input, std::size_t m,
                        std::span<const std::pair<Direction, std::uint64_t>> script);

enum class SegmentRule { FirstSegment, LongRunUp, LongRunDown, SingletonWasMin, SingletonNotMin };

struct SegmentChoice {
  std::size_t index = 0;  // 1-based
  bool positive = false;
  SegmentRule rule = SegmentRule::FirstSegment;
};

struct DetAdversaryOutcome {
  std::vector<Key> input;
  std::vector<SegmentChoice> transcript;
  RunSequence output;
};

// Deterministic adaptive adversary: t segments of m elements, first one
// ascending 1..m, later ones chosen against the observed write log (long run
// going up gets a fresh low descending segment and vice versa; a one-element
// run is disambiguated by whether that element was the smallest outstanding
// element when written). Pull-contract: the first request of segment s needs
// at least m*(s-2)+1 logged writes.
DetAdversaryOutcome adversary_deterministic(const OnlineAlgorithm& alg, std::size_t m,
                                            std::size_t t);

// Certificate schedule for the deterministic adversary's input: segments are
// written in pairs as single runs (direction by the second segment's sign),
// odd tail alone. ceil(t/2) runs.
RunSequence pairing_player(std::span<const Key> input, std::size_t m,
                           std::span<const SegmentChoice> transcript);

struct RandAdversaryInstance {
  std::vector<Key> input;
  std::vector<bool> positives;  // per segment
  std::size_t m = 0;
  std::size_t t = 0;
};

// t coin-flipped segments of 4m elements (an ascending quarter then three
// descending quarters, or mirrored negative), spread apart by scaling with t
// and offsetting with the segment index.
RandAdversaryInstance adversary_randomized(std::size_t m, std::size_t t, std::uint64_t seed);

// Certificate schedule: one 4m-length run per segment, direction by sign.
RunSequence one_run_player(const RandAdversaryInstance& instance);

enum class ResAugCase { NegEWritten, NegOther, PosEWritten, PosOther, Fallback };

struct ResAugOutcome {
  std::vector<Key> input;
  ResAugCase caseTag = ResAugCase::Fallback;
  std::uint64_t claimedOpt = 0;  // attainable with a buffer of 4m-2
  RunSequence output;
};

// Adaptive lower-bound input for algorithms with buffer 4m-3 (m >= 4): a
// fixed 4m-3 prefix, then one probe element chosen from the first write, then
// a tail chosen from the second write.
ResAugOutcome adversary_resaug(const OnlineAlgorithm& alg, std::size_t m);

}  // namespace runsmith
