#include "runsmith/nearly_sorted.hpp"

#include <algorithm>
#include <iterator>
#include <set>
#include <unordered_set>

namespace runsmith {

namespace {

// m slots shared by live elements and ghost markers. Ghosts take part in run
// eligibility like live elements but are deleted instead of written; the slot
// freed by a deletion is refilled from input like any other write.
struct GhostMachine {
  std::size_t m;
  std::span<const Key> input;
  std::size_t pos = 0;
  std::set<Key> live;
  std::set<Key> ghosts;

  std::size_t occupancy() const { return live.size() + ghosts.size(); }

  void fill() {
    while (occupancy() < m && pos < input.size()) live.insert(input[pos++]);
  }

  static std::optional<Key> candidate(const std::set<Key>& s, Direction dir,
                                      const std::optional<Key>& last) {
    std::set<Key>::const_iterator it;
    if (dir == Direction::Up) {
      it = last ? s.lower_bound(*last) : s.begin();
    } else {
      if (last) {
        it = s.upper_bound(*last);
        it = it == s.begin() ? s.end() : std::prev(it);
      } else {
        it = s.empty() ? s.end() : std::prev(s.end());
      }
    }
    if (it == s.end()) return std::nullopt;
    return *it;
  }

  std::optional<Key> eligible(Direction dir, const std::optional<Key>& last) const {
    auto a = candidate(live, dir, last);
    auto b = candidate(ghosts, dir, last);
    if (!a) return b;
    if (!b) return a;
    return dir == Direction::Up ? std::min(*a, *b) : std::max(*a, *b);
  }

  struct Tick {
    Key value;
    bool ghost;
    std::optional<Key> ingested;
  };

  Tick tick(Direction dir, const std::optional<Key>& last) {
    Key v = *eligible(dir, last);
    bool g = ghosts.count(v) > 0;
    if (g) {
      ghosts.erase(v);
    } else {
      live.erase(v);
    }
    Tick t{v, g, std::nullopt};
    if (pos < input.size()) {
      live.insert(input[pos]);
      t.ingested = input[pos];
      ++pos;
    }
    return t;
  }

  std::vector<Key> union_values() const {
    std::vector<Key> out;
    out.reserve(occupancy());
    std::set_union(live.begin(), live.end(), ghosts.begin(), ghosts.end(),
                   std::back_inserter(out));
    return out;
  }
};

}  // namespace

GhostResult ghost_randomized(std::span<const Key> input, std::size_t m, CoinSource& coins) {
  {
    std::unordered_set<Key> seen;
    for (Key k : input) {
      if (!seen.insert(k).second) throw DuplicateKeyError(k);
    }
  }
  GhostMachine gm{m, input};
  GhostResult result;
  result.seq.m = m;

  while (true) {
    gm.fill();
    if (gm.live.empty() && gm.pos == input.size()) break;  // leftover ghosts are spent values

    GhostPartitionTrace tr;
    tr.preLive.assign(gm.live.begin(), gm.live.end());
    tr.preGhosts.assign(gm.ghosts.begin(), gm.ghosts.end());
    tr.preConsumed = gm.pos;
    tr.maxOccupancy = gm.occupancy();

    Direction d = coins.flip();
    tr.coin = d;
    ShadowRun shadow(opposite(d), gm.union_values());

    Run run{d, {}};
    std::uint64_t len = 0;
    std::optional<Key> last;
    while (gm.eligible(d, last)) {
      auto t = gm.tick(d, last);
      if (!t.ghost) run.elements.push_back(t.value);
      last = t.value;
      ++len;
      if (shadow.alive()) {
        shadow.step();
        if (t.ingested && shadow.alive()) shadow.ingest(*t.ingested);
      }
      tr.maxOccupancy = std::max(tr.maxOccupancy, gm.occupancy());
    }
    tr.realLen = len;
    bool lucky = !shadow.alive() || !shadow.has_eligible();
    tr.lucky = lucky;
    result.coins.choices.push_back({d, lucky});

    if (lucky) {
      tr.simLen = shadow.length();
      if (!run.elements.empty()) result.seq.runs.push_back(std::move(run));
    } else {
      if (!run.elements.empty()) result.seq.runs.push_back(std::move(run));
      Direction rd = opposite(d);

      std::vector<Key> unionNow = gm.union_values();
      std::vector<Key> shadowNow(shadow.buffer().begin(), shadow.buffer().end());
      std::vector<Key> divergence, newGhosts;
      std::set_difference(unionNow.begin(), unionNow.end(), shadowNow.begin(), shadowNow.end(),
                          std::back_inserter(divergence));
      std::set_difference(shadowNow.begin(), shadowNow.end(), unionNow.begin(), unionNow.end(),
                          std::back_inserter(newGhosts));
      if (rd == Direction::Down) std::reverse(divergence.begin(), divergence.end());

      // catch-up: write the divergence in simulated-run order without reads;
      // the freed slots hold markers for what the real run wrote instead
      Run rec{rd, {}};
      for (Key v : divergence) {
        if (gm.live.count(v)) {
          gm.live.erase(v);
          rec.elements.push_back(v);
        } else {
          gm.ghosts.erase(v);
        }
      }
      for (Key v : newGhosts) gm.ghosts.insert(v);
      tr.catchupCount = divergence.size();
      tr.maxOccupancy = std::max(tr.maxOccupancy, gm.occupancy());

      // resume the simulated run from where the shadow stopped
      std::uint64_t contTicks = 0;
      std::optional<Key> last2 = shadow.last();
      while (gm.eligible(rd, last2)) {
        auto t = gm.tick(rd, last2);
        if (!t.ghost) rec.elements.push_back(t.value);
        last2 = t.value;
        ++contTicks;
        tr.maxOccupancy = std::max(tr.maxOccupancy, gm.occupancy());
      }
      tr.simLen = shadow.length() + contTicks;
      if (!rec.elements.empty()) result.seq.runs.push_back(std::move(rec));
    }

    tr.ambiguous = tr.realLen < 3 * m && tr.simLen < 3 * m;
    result.ambiguityFlag = result.ambiguityFlag || tr.ambiguous;
    tr.postLive.assign(gm.live.begin(), gm.live.end());
    tr.postGhosts.assign(gm.ghosts.begin(), gm.ghosts.end());
    tr.postConsumed = gm.pos;
    result.partitions.push_back(std::move(tr));
  }
  return result;
}

GhostResult ghost_randomized(std::span<const Key> input, std::size_t m, std::uint64_t seed) {
  PrngCoins coins(seed);
  return ghost_randomized(input, m, coins);
}

bool check_5m_optimality(const RunSequence& seq, std::size_t m) {
  for (const Run& r : seq.runs) {
    if (r.elements.size() < 5 * m) return false;
  }
  return true;
}

}  // namespace runsmith
