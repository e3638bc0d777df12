#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <unordered_set>
#include <utility>
#include <vector>

#include "runsmith/errors.hpp"

namespace runsmith {

using Key = std::int64_t;

enum class Direction : int { Up = 0, Down = 1 };

inline Direction opposite(Direction d) {
  return d == Direction::Up ? Direction::Down : Direction::Up;
}

inline const char* to_cstring(Direction d) { return d == Direction::Up ? "up" : "down"; }

// One output run: non-strictly monotone in `direction`, never empty.
struct Run {
  Direction direction = Direction::Up;
  std::vector<Key> elements;
  std::size_t length() const { return elements.size(); }
};

bool is_valid_run(const Run& r);

struct RunSequence {
  std::vector<Run> runs;
  std::size_t m = 0;

  std::size_t run_count() const { return runs.size(); }
  std::size_t total_elements() const;
  std::vector<Key> flatten() const;
  std::vector<std::uint64_t> run_lengths() const;
};

// Minimum number of monotone segments over any contiguous partition of seq.
// Plateaus are direction-neutral: a new segment starts direction-uncommitted
// and picks up the first strict comparison it sees.
std::size_t count_runs(std::span<const Key> seq);

// Element provider for machines. observe_write lets adaptive sources react to
// the algorithm's output; it is called after each written element, before the
// refill read that follows it.
class InputSource {
 public:
  virtual ~InputSource() = default;
  virtual std::optional<Key> next() = 0;
  virtual void observe_write(Key /*k*/, std::uint64_t /*runIndex*/) {}
  // Lookahead: ahead = 0 is the element next() would return. Sources that
  // cannot reveal the future return nullopt.
  virtual std::optional<Key> peek(std::size_t /*ahead*/) const { return std::nullopt; }
  virtual bool peekable() const { return false; }
  // Whole remaining stream, if this source knows it.
  virtual std::optional<std::span<const Key>> remaining() const { return std::nullopt; }
};

class ArraySource final : public InputSource {
 public:
  explicit ArraySource(std::vector<Key> data) : data_(std::move(data)) {}

  std::optional<Key> next() override {
    if (pos_ < data_.size()) return data_[pos_++];
    return std::nullopt;
  }
  std::optional<Key> peek(std::size_t ahead) const override {
    if (pos_ + ahead < data_.size()) return data_[pos_ + ahead];
    return std::nullopt;
  }
  bool peekable() const override { return true; }
  std::optional<std::span<const Key>> remaining() const override {
    return std::span<const Key>(data_).subspan(pos_);
  }
  const std::vector<Key>& data() const { return data_; }
  std::size_t position() const { return pos_; }

 private:
  std::vector<Key> data_;
  std::size_t pos_ = 0;
};

// Forwards a stream while checking that no key repeats.
class DuplicateGuardSource final : public InputSource {
 public:
  explicit DuplicateGuardSource(InputSource& inner) : inner_(&inner) {}

  std::optional<Key> next() override {
    auto e = inner_->next();
    if (e && !seen_.insert(*e).second) throw DuplicateKeyError(*e);
    return e;
  }
  void observe_write(Key k, std::uint64_t runIndex) override { inner_->observe_write(k, runIndex); }
  std::optional<Key> peek(std::size_t ahead) const override { return inner_->peek(ahead); }
  bool peekable() const override { return inner_->peekable(); }
  std::optional<std::span<const Key>> remaining() const override { return inner_->remaining(); }

 private:
  InputSource* inner_;
  std::unordered_set<Key> seen_;
};

// What a decision point can see of the future: the buffered elements in
// arrival order plus some amount of upcoming input. `complete` says whether
// remainingInput extends to the true end of the stream; a partial window
// (restricted visibility) must leave run-death verdicts uncertain when the
// window runs out first.
struct UnwrittenView {
  std::vector<Key> bufferSnapshot;
  std::vector<Key> remainingInput;
  bool complete = true;

  std::size_t total() const { return bufferSnapshot.size() + remainingInput.size(); }
};

struct SimResult {
  std::uint64_t length = 0;
  bool certain = false;
  friend bool operator==(const SimResult&, const SimResult&) = default;
};

inline constexpr std::uint64_t kNoCap = ~std::uint64_t{0};

// Length of the maximal run an m-buffer machine would write over `view`,
// without writing anything. Stops at `cap` with certain=false. A run death is
// certain only if the machine's full read window (m + length elements) lies
// inside the view, or the view is complete.
SimResult simulate_maximal_run_length(const UnwrittenView& view, std::size_t m, Direction dir,
                                      std::uint64_t cap = kNoCap);

// Bounded buffer in write-one-read-one cadence. Ties between equal keys go to
// the earliest-arrived copy.
class BufferMachine {
 public:
  BufferMachine(std::size_t capacity, InputSource& in);

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return byKey_.size(); }
  bool input_exhausted() const { return exhausted_; }
  std::uint64_t consumed() const { return consumed_; }
  std::uint64_t written() const { return written_; }
  InputSource& source() const { return *in_; }

  // Fills the buffer; true iff at least one element is available to write.
  bool prepare();

  std::vector<Key> buffer_snapshot() const;                              // arrival order
  std::vector<std::pair<Key, std::uint64_t>> buffer_entries() const;    // (key, arrival)

  // Element the run rule would write next, or nullopt if the run must end.
  std::optional<Key> eligible(Direction dir, const std::optional<Key>& last) const;

  struct Step {
    Key written;
    std::optional<Key> ingested;
  };

  // Starts run accounting for step-level callers; write_maximal_run does this
  // itself. Returns the new run index.
  std::uint64_t begin_run();

  // One tick: write the rule's element, then refill one. Caller must have
  // checked eligible().
  Step write_step(Direction dir, const std::optional<Key>& last);

  Run write_maximal_run(Direction dir);

 private:
  void fill();
  using Entry = std::pair<Key, std::uint64_t>;
  std::set<Entry>::const_iterator pick(Direction dir, const std::optional<Key>& last) const;

  std::size_t capacity_;
  InputSource* in_;
  std::set<Entry> byKey_;
  std::uint64_t consumed_ = 0;
  std::uint64_t written_ = 0;
  std::uint64_t runCounter_ = 0;
  bool exhausted_ = false;
};

// Snapshot of everything the machine has not yet written. Requires a source
// that can reveal its remaining stream (ArraySource). complete is true.
UnwrittenView unwritten_view(const BufferMachine& machine);

// Value-level machine over a fixed input span. Ignores arrival order: with
// duplicate keys the chosen copy is interchangeable, so run lengths and the
// buffer multiset evolve exactly as in BufferMachine. Used by search code
// that needs cheap cloning.
struct ValueMachine {
  std::multiset<Key> buf;
  std::span<const Key> input;
  std::size_t pos = 0;
  std::size_t capacity = 0;
  std::uint64_t written = 0;

  ValueMachine() = default;
  ValueMachine(std::span<const Key> in, std::size_t cap) : input(in), capacity(cap) { fill(); }

  void fill() {
    while (buf.size() < capacity && pos < input.size()) buf.insert(input[pos++]);
  }
  bool done() const { return buf.empty() && pos == input.size(); }

  std::optional<Key> eligible(Direction dir, const std::optional<Key>& last) const;

  // Writes one maximal run; collects written elements into *out if given.
  std::uint64_t write_maximal_run(Direction dir, std::vector<Key>* out = nullptr);

  std::vector<Key> sorted_buffer() const { return {buf.begin(), buf.end()}; }
};

// Lockstep simulation of the run not taken: same starting buffer (by value),
// same ingest stream, one write per tick until it dies.
class ShadowRun {
 public:
  ShadowRun(Direction dir, const std::vector<Key>& initialBuffer)
      : dir_(dir), buf_(initialBuffer.begin(), initialBuffer.end()) {}

  Direction direction() const { return dir_; }
  bool alive() const { return alive_; }
  bool has_eligible() const;
  std::optional<Key> last() const { return last_; }
  std::uint64_t length() const { return len_; }
  const std::multiset<Key>& buffer() const { return buf_; }

  void step();
  void ingest(Key k) { buf_.insert(k); }

 private:
  Direction dir_;
  std::multiset<Key> buf_;
  std::optional<Key> last_;
  bool alive_ = true;
  std::uint64_t len_ = 0;
};

// Multiset equality between output and input: nothing lost, nothing invented.
bool conserves_elements(const RunSequence& seq, std::span<const Key> input);

}  // namespace runsmith
