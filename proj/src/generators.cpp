#include "runsmith/generators.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

#include "runsmith/offline.hpp"
#include "runsmith/rng.hpp"

namespace runsmith {

namespace {

Key checked_add(Key a, Key b) {
  Key r;
  if (__builtin_add_overflow(a, b, &r)) throw ArithmeticOverflowError("key addition overflow");
  return r;
}

Key checked_mul(Key a, Key b) {
  Key r;
  if (__builtin_mul_overflow(a, b, &r)) throw ArithmeticOverflowError("key multiply overflow");
  return r;
}

}  // namespace

std::vector<Key> up_range(Key from, Key to) {
  if (from > to) throw std::logic_error("up_range needs from <= to");
  std::vector<Key> out;
  out.reserve(static_cast<std::size_t>(to - from) + 1);
  for (Key k = from;; ++k) {
    out.push_back(k);
    if (k == to) break;
  }
  return out;
}

std::vector<Key> down_range(Key from, Key to) {
  if (from < to) throw std::logic_error("down_range needs from >= to");
  std::vector<Key> out;
  out.reserve(static_cast<std::size_t>(from - to) + 1);
  for (Key k = from;; --k) {
    out.push_back(k);
    if (k == to) break;
  }
  return out;
}

std::vector<Key> cat(std::vector<std::vector<Key>> parts) {
  std::vector<Key> out;
  std::size_t total = 0;
  for (const auto& p : parts) total += p.size();
  out.reserve(total);
  for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

std::vector<Key> shifted(std::vector<Key> v, Key delta) {
  for (Key& k : v) k = checked_add(k, delta);
  return v;
}

std::vector<Key> scaled(std::vector<Key> v, Key factor) {
  for (Key& k : v) k = checked_mul(k, factor);
  return v;
}

std::vector<Key> greedy_gap_block(std::size_t m) {
  if (m < 4) throw std::logic_error("greedy_gap_block needs m >= 4");
  Key M = static_cast<Key>(m);
  return cat({up_range(4 * M + 4, 5 * M + 3),
              {M + 2},
              up_range(5 * M + 4, 6 * M + 3),
              up_range(2 * M + 1, 3 * M - 1),
              down_range(4 * M + 3, 3 * M + 4),
              down_range(2 * M, M + 3),
              down_range(M + 1, 1)});
}

std::vector<Key> fixture_greedy_gap(std::size_t m, std::size_t c) {
  if (c == 0) throw std::logic_error("fixture_greedy_gap needs c >= 1");
  std::vector<Key> block = greedy_gap_block(m);
  std::vector<std::vector<Key>> parts;
  parts.reserve(c);
  for (std::size_t i = 0; i < c; ++i) {
    parts.push_back(shifted(block, checked_mul(static_cast<Key>(10 * m), static_cast<Key>(i))));
  }
  return cat(std::move(parts));
}

std::vector<Key> fixture_3m_tight(std::size_t m) {
  if (m < 2) throw std::logic_error("fixture_3m_tight needs m >= 2");
  Key M = static_cast<Key>(m);
  Key M2 = checked_mul(M, M);
  return cat({scaled(up_range(1, M - 1), M),
              down_range(M2, M2 - M + 1),
              down_range(M - 1, 1),
              up_range(M2 + 2, M2 + M + 1)});
}

std::vector<Key> gen_random_permutation(std::size_t n, std::uint64_t seed) {
  std::vector<Key> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<Key>(i + 1);
  SplitMix64 gen(seed);
  fisher_yates(out, gen);
  return out;
}

NearlySortedInstance gen_nearly_sorted(std::size_t m, std::uint64_t c, std::size_t runCount,
                                       std::uint64_t seed) {
  if (m == 0 || c == 0 || runCount == 0) throw std::logic_error("gen_nearly_sorted needs positive m, c, runCount");
  SplitMix64 gen(seed);
  NearlySortedInstance inst;
  inst.certificate.c = c;

  Key lo = 0, hi = 0;
  bool first = true;
  Direction dir = Direction::Up;
  for (std::size_t r = 0; r < runCount; ++r) {
    std::uint64_t len = c * m + gen.below(m);
    std::vector<Key> band;
    if (dir == Direction::Up) {
      Key base = first ? 1 : checked_add(hi, static_cast<Key>(m + 1));
      band = up_range(base, checked_add(base, static_cast<Key>(len - 1)));
      hi = band.back();
      if (first) lo = band.front();
    } else {
      Key top = checked_add(lo, -static_cast<Key>(m + 1));
      band = down_range(top, checked_add(top, -static_cast<Key>(len - 1)));
      lo = band.back();
    }
    first = false;
    inst.certificate.witnessRunLengths.push_back(len);
    inst.intendedRuns.push_back(Run{dir, band});

    // block shuffle: displacement stays below m
    for (std::size_t b = 0; b < band.size(); b += m) {
      std::size_t e = std::min(b + m, band.size());
      for (std::size_t i = e - b; i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(gen.below(i));
        std::swap(band[b + i - 1], band[b + j]);
      }
    }
    inst.input.insert(inst.input.end(), band.begin(), band.end());
    dir = opposite(dir);
  }

  // desk scale: verify the certificate against the oracle and intended replay
  if (m <= 5 && runCount <= 6 && inst.input.size() <= 120) {
    std::vector<Direction> dirs;
    for (const Run& r : inst.intendedRuns) dirs.push_back(r.direction);
    RunSequence replay = replay_directions(inst.input, m, dirs);
    bool replayMatches = replay.run_count() == runCount;
    for (std::size_t i = 0; replayMatches && i < runCount; ++i) {
      replayMatches = replay.runs[i].elements == inst.intendedRuns[i].elements;
    }
    bool longEnough = true;
    for (std::uint64_t len : inst.certificate.witnessRunLengths) {
      longEnough = longEnough && len >= c * m;
    }
    try {
      OracleResult opt = brute_force_opt(inst.input, m);
      inst.certificate.witnessed = replayMatches && longEnough && opt.optRuns == runCount;
    } catch (const BudgetExceededError&) {
      inst.certificate.witnessed = false;
    }
  }
  return inst;
}

RunSequence play_script(std::span<const Key> input, std::size_t m,
                        std::span<const std::pair<Direction, std::uint64_t>> script) {
  ArraySource src(std::vector<Key>(input.begin(), input.end()));
  BufferMachine machine(m, src);
  RunSequence seq{{}, m};
  for (const auto& [dir, len] : script) {
    if (!machine.prepare()) throw std::logic_error("script outlives input");
    machine.begin_run();
    Run run{dir, {}};
    std::optional<Key> last;
    for (std::uint64_t i = 0; i < len; ++i) {
      if (!machine.eligible(dir, last)) throw std::logic_error("script step has no eligible element");
      auto step = machine.write_step(dir, last);
      run.elements.push_back(step.written);
      last = step.written;
    }
    seq.runs.push_back(std::move(run));
  }
  if (machine.prepare()) throw std::logic_error("script leaves input unwritten");
  return seq;
}

namespace {

class DetAdversarySource final : public InputSource {
 public:
  DetAdversarySource(std::size_t m, std::size_t t) : m_(m), t_(t) {
    pending_ = up_range(1, static_cast<Key>(m_));
    transcript_.push_back({1, true, SegmentRule::FirstSegment});
  }

  std::optional<Key> next() override {
    if (pendingPos_ == pending_.size()) {
      if (nextSegment_ > t_) return std::nullopt;
      decide_segment(nextSegment_++);
    }
    Key k = pending_[pendingPos_++];
    outstanding_.insert(k);
    inputLog_.push_back(k);
    return k;
  }

  void observe_write(Key k, std::uint64_t runIndex) override {
    bool isFirst = !haveRun_ || runIndex != lastRunIndex_;
    if (isFirst) {
      haveRun_ = true;
      lastRunIndex_ = runIndex;
      runLen_ = 0;
      runFirst_ = k;
      runSecond_.reset();
      runFirstWasMin_ = !outstanding_.empty() && k == *outstanding_.begin();
    } else if (runLen_ == 1) {
      runSecond_ = k;
    }
    ++runLen_;
    ++writes_;
    auto it = outstanding_.find(k);
    if (it == outstanding_.end()) throw ProtocolError("write of an element never emitted");
    outstanding_.erase(it);
  }

  const std::vector<Key>& input_log() const { return inputLog_; }
  const std::vector<SegmentChoice>& transcript() const { return transcript_; }

 private:
  void decide_segment(std::size_t s) {
    if (writes_ < m_ * (s - 2) + 1) {
      throw ProtocolError("segment requested before enough writes were logged");
    }
    bool positive;
    SegmentRule rule;
    if (runLen_ >= 2) {
      bool runUp = *runSecond_ > runFirst_;
      positive = !runUp;  // ascending feed kills a down run and vice versa
      rule = runUp ? SegmentRule::LongRunUp : SegmentRule::LongRunDown;
    } else {
      positive = !runFirstWasMin_;
      rule = runFirstWasMin_ ? SegmentRule::SingletonWasMin : SegmentRule::SingletonNotMin;
    }
    Key M = static_cast<Key>(m_);
    Key tt = static_cast<Key>(s - 1);
    pending_ = positive ? up_range(tt * M + 1, (tt + 1) * M)
                        : down_range(-(tt * M + 1), -((tt + 1) * M));
    pendingPos_ = 0;
    transcript_.push_back({s, positive, rule});
  }

  std::size_t m_, t_;
  std::vector<Key> pending_;
  std::size_t pendingPos_ = 0;
  std::size_t nextSegment_ = 2;
  std::vector<Key> inputLog_;
  std::vector<SegmentChoice> transcript_;
  std::multiset<Key> outstanding_;
  std::uint64_t writes_ = 0;
  bool haveRun_ = false;
  std::uint64_t lastRunIndex_ = 0;
  std::uint64_t runLen_ = 0;
  Key runFirst_ = 0;
  std::optional<Key> runSecond_;
  bool runFirstWasMin_ = false;
};

}  // namespace

DetAdversaryOutcome adversary_deterministic(const OnlineAlgorithm& alg, std::size_t m,
                                            std::size_t t) {
  if (m == 0 || t == 0) throw std::logic_error("adversary needs positive m and t");
  DetAdversarySource src(m, t);
  DetAdversaryOutcome outcome;
  outcome.output = alg(src, m);
  outcome.input = src.input_log();
  outcome.transcript = src.transcript();
  return outcome;
}

RunSequence pairing_player(std::span<const Key> input, std::size_t m,
                           std::span<const SegmentChoice> transcript) {
  std::vector<std::pair<Direction, std::uint64_t>> script;
  for (std::size_t i = 0; i < transcript.size(); i += 2) {
    if (i + 1 < transcript.size()) {
      Direction d = transcript[i + 1].positive ? Direction::Up : Direction::Down;
      script.push_back({d, 2 * m});
    } else {
      Direction d = transcript[i].positive ? Direction::Up : Direction::Down;
      script.push_back({d, m});
    }
  }
  return play_script(input, m, script);
}

RandAdversaryInstance adversary_randomized(std::size_t m, std::size_t t, std::uint64_t seed) {
  if (m == 0 || t == 0) throw std::logic_error("adversary needs positive m and t");
  Key M = static_cast<Key>(m);
  std::vector<Key> positive = cat({up_range(1, M), down_range(2 * M, M + 1),
                                   down_range(3 * M, 2 * M + 1), down_range(4 * M, 3 * M + 1)});
  std::vector<Key> negative = cat({up_range(1, M), up_range(-2 * M, -M - 1),
                                   up_range(-3 * M, -2 * M - 1), up_range(-4 * M, -3 * M - 1)});

  RandAdversaryInstance inst;
  inst.m = m;
  inst.t = t;
  SplitMix64 gen(seed);
  Key scale = static_cast<Key>(t);  // floor(N / 4m) with N = 4mt
  for (std::size_t s = 1; s <= t; ++s) {
    bool pos = !gen.coin();
    inst.positives.push_back(pos);
    const std::vector<Key>& raw = pos ? positive : negative;
    for (Key v : raw) {
      inst.input.push_back(checked_add(checked_mul(v, scale), static_cast<Key>(s)));
    }
  }
  std::unordered_set<Key> seen;
  for (Key k : inst.input) {
    if (!seen.insert(k).second) throw std::logic_error("randomized adversary produced a duplicate");
  }
  return inst;
}

RunSequence one_run_player(const RandAdversaryInstance& instance) {
  std::vector<std::pair<Direction, std::uint64_t>> script;
  for (bool pos : instance.positives) {
    script.push_back({pos ? Direction::Up : Direction::Down, 4 * instance.m});
  }
  return play_script(instance.input, instance.m, script);
}

namespace {

class ResAugSource final : public InputSource {
 public:
  explicit ResAugSource(std::size_t m) : m_(m) {
    Key M = static_cast<Key>(m_);
    pending_ = cat({up_range(1, M - 1), down_range(2 * M - 1, M), up_range(3 * M, 4 * M - 2),
                    down_range(-M, -2 * M + 2)});
  }

  std::optional<Key> next() override {
    if (pendingPos_ == pending_.size() && !advance()) return std::nullopt;
    Key k = pending_[pendingPos_++];
    inputLog_.push_back(k);
    return k;
  }

  void observe_write(Key k, std::uint64_t /*runIndex*/) override { writeLog_.push_back(k); }

  const std::vector<Key>& input_log() const { return inputLog_; }
  ResAugCase case_tag() const { return caseTag_; }
  std::uint64_t claimed_opt() const { return claimedOpt_; }

 private:
  bool advance() {
    Key M = static_cast<Key>(m_);
    if (phase_ == 0) {
      if (writeLog_.empty()) throw ProtocolError("probe requested before the first write");
      Key w1 = writeLog_[0];
      if (w1 == -2 * M + 2) {
        branch_ = Branch::Neg;
        e_ = -2 * M + 1;
      } else if (w1 == 4 * M - 2) {
        branch_ = Branch::Pos;
        e_ = 4 * M - 1;
      } else {
        branch_ = Branch::Fallback;
        e_ = -2 * M + 1;
        caseTag_ = ResAugCase::Fallback;
        claimedOpt_ = 1;
      }
      pending_ = {e_};
      pendingPos_ = 0;
      phase_ = 1;
      return true;
    }
    if (phase_ == 1) {
      if (branch_ == Branch::Fallback) {
        pending_ = down_range(0, -(M - 1));
      } else {
        if (writeLog_.size() < 2) throw ProtocolError("tail requested before the second write");
        Key w2 = writeLog_[1];
        if (branch_ == Branch::Neg) {
          if (w2 == e_) {
            caseTag_ = ResAugCase::NegEWritten;
            claimedOpt_ = 1;
            pending_ = down_range(0, -(M - 1));
          } else {
            caseTag_ = ResAugCase::NegOther;
            claimedOpt_ = 2;
            pending_ = cat({down_range(-2 * M, -10 * M), up_range(2 * M, 3 * M - 1)});
          }
        } else {
          if (w2 == e_) {
            caseTag_ = ResAugCase::PosEWritten;
            claimedOpt_ = 1;
            pending_ = up_range(2 * M, 3 * M - 1);
          } else {
            caseTag_ = ResAugCase::PosOther;
            claimedOpt_ = 2;
            pending_ = cat({up_range(4 * M, 10 * M), down_range(0, -(M - 1))});
          }
        }
      }
      pendingPos_ = 0;
      phase_ = 2;
      return true;
    }
    return false;
  }

  enum class Branch { Neg, Pos, Fallback };

  std::size_t m_;
  std::vector<Key> pending_;
  std::size_t pendingPos_ = 0;
  int phase_ = 0;
  Branch branch_ = Branch::Fallback;
  Key e_ = 0;
  std::vector<Key> inputLog_;
  std::vector<Key> writeLog_;
  ResAugCase caseTag_ = ResAugCase::Fallback;
  std::uint64_t claimedOpt_ = 0;
};

}  // namespace

ResAugOutcome adversary_resaug(const OnlineAlgorithm& alg, std::size_t m) {
  if (m < 4) throw std::logic_error("adversary_resaug needs m >= 4");
  ResAugSource src(m);
  ResAugOutcome outcome;
  outcome.output = alg(src, m);
  outcome.input = src.input_log();
  outcome.caseTag = src.case_tag();
  outcome.claimedOpt = src.claimed_opt();
  return outcome;
}

}  // namespace runsmith
