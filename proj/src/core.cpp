#include "runsmith/core.hpp"

#include <algorithm>
#include <stdexcept>

namespace runsmith {

bool is_valid_run(const Run& r) {
  if (r.elements.empty()) return false;
  for (std::size_t i = 1; i < r.elements.size(); ++i) {
    if (r.direction == Direction::Up && r.elements[i] < r.elements[i - 1]) return false;
    if (r.direction == Direction::Down && r.elements[i] > r.elements[i - 1]) return false;
  }
  return true;
}

std::size_t RunSequence::total_elements() const {
  std::size_t n = 0;
  for (const Run& r : runs) n += r.elements.size();
  return n;
}

std::vector<Key> RunSequence::flatten() const {
  std::vector<Key> out;
  out.reserve(total_elements());
  for (const Run& r : runs) out.insert(out.end(), r.elements.begin(), r.elements.end());
  return out;
}

std::vector<std::uint64_t> RunSequence::run_lengths() const {
  std::vector<std::uint64_t> out;
  out.reserve(runs.size());
  for (const Run& r : runs) out.push_back(r.elements.size());
  return out;
}

std::size_t count_runs(std::span<const Key> seq) {
  if (seq.empty()) return 0;
  std::size_t count = 1;
  int dir = 0;  // 0 uncommitted, +1 ascending, -1 descending
  for (std::size_t i = 1; i < seq.size(); ++i) {
    if (seq[i] == seq[i - 1]) continue;
    int d = seq[i] > seq[i - 1] ? +1 : -1;
    if (dir == 0) {
      dir = d;
    } else if (d != dir) {
      ++count;
      dir = 0;
    }
  }
  return count;
}

SimResult simulate_maximal_run_length(const UnwrittenView& view, std::size_t m, Direction dir,
                                      std::uint64_t cap) {
  const std::size_t total = view.total();
  auto at = [&view](std::size_t i) -> Key {
    return i < view.bufferSnapshot.size() ? view.bufferSnapshot[i]
                                          : view.remainingInput[i - view.bufferSnapshot.size()];
  };

  std::multiset<Key> buf;
  std::size_t pos = std::min(m, total);
  for (std::size_t i = 0; i < pos; ++i) buf.insert(at(i));

  std::uint64_t len = 0;
  std::optional<Key> last;
  while (true) {
    if (len == cap) return {len, false};
    std::multiset<Key>::const_iterator it;
    if (dir == Direction::Up) {
      it = last ? buf.lower_bound(*last) : buf.begin();
    } else {
      if (last) {
        it = buf.upper_bound(*last);
        it = it == buf.begin() ? buf.end() : std::prev(it);
      } else {
        it = buf.empty() ? buf.end() : std::prev(buf.end());
      }
    }
    if (it == buf.end()) {
      // Death verdict: the machine would have examined its first m+len reads.
      return {len, view.complete || m + len <= total};
    }
    last = *it;
    buf.erase(it);
    ++len;
    if (pos < total) buf.insert(at(pos++));
  }
}

BufferMachine::BufferMachine(std::size_t capacity, InputSource& in)
    : capacity_(capacity), in_(&in) {
  if (capacity == 0) throw std::logic_error("machine capacity must be positive");
}

void BufferMachine::fill() {
  while (!exhausted_ && byKey_.size() < capacity_) {
    auto e = in_->next();
    if (!e) {
      exhausted_ = true;
      break;
    }
    byKey_.insert({*e, consumed_++});
  }
}

bool BufferMachine::prepare() {
  fill();
  return !byKey_.empty();
}

std::vector<Key> BufferMachine::buffer_snapshot() const {
  auto entries = buffer_entries();
  std::vector<Key> out;
  out.reserve(entries.size());
  for (const auto& [k, a] : entries) out.push_back(k);
  return out;
}

std::vector<std::pair<Key, std::uint64_t>> BufferMachine::buffer_entries() const {
  std::vector<Entry> entries(byKey_.begin(), byKey_.end());
  std::sort(entries.begin(), entries.end(),
            [](const Entry& x, const Entry& y) { return x.second < y.second; });
  return entries;
}

std::set<BufferMachine::Entry>::const_iterator BufferMachine::pick(
    Direction dir, const std::optional<Key>& last) const {
  if (byKey_.empty()) return byKey_.end();
  if (dir == Direction::Up) {
    if (!last) return byKey_.begin();
    return byKey_.lower_bound({*last, 0});
  }
  std::set<Entry>::const_iterator it;
  if (!last) {
    it = std::prev(byKey_.end());
  } else {
    it = byKey_.upper_bound({*last, ~std::uint64_t{0}});
    if (it == byKey_.begin()) return byKey_.end();
    it = std::prev(it);
  }
  // earliest arrival among copies of the chosen key
  return byKey_.lower_bound({it->first, 0});
}

std::optional<Key> BufferMachine::eligible(Direction dir, const std::optional<Key>& last) const {
  auto it = pick(dir, last);
  if (it == byKey_.end()) return std::nullopt;
  return it->first;
}

std::uint64_t BufferMachine::begin_run() { return runCounter_++; }

BufferMachine::Step BufferMachine::write_step(Direction dir, const std::optional<Key>& last) {
  auto it = pick(dir, last);
  if (it == byKey_.end()) throw std::logic_error("write_step: no eligible element");
  Key k = it->first;
  byKey_.erase(it);
  ++written_;
  in_->observe_write(k, runCounter_ == 0 ? 0 : runCounter_ - 1);
  Step step{k, std::nullopt};
  if (!exhausted_) {
    auto e = in_->next();
    if (!e) {
      exhausted_ = true;
    } else {
      byKey_.insert({*e, consumed_++});
      if (byKey_.size() > capacity_) throw std::logic_error("buffer exceeded capacity");
      step.ingested = *e;
    }
  }
  return step;
}

Run BufferMachine::write_maximal_run(Direction dir) {
  fill();
  if (byKey_.empty()) throw std::logic_error("write_maximal_run: empty buffer");
  begin_run();
  Run run{dir, {}};
  std::optional<Key> last;
  while (eligible(dir, last)) {
    Step s = write_step(dir, last);
    run.elements.push_back(s.written);
    last = s.written;
  }
  return run;
}

UnwrittenView unwritten_view(const BufferMachine& machine) {
  auto rem = machine.source().remaining();
  if (!rem) throw std::logic_error("unwritten_view requires a source with a visible remainder");
  UnwrittenView view;
  view.bufferSnapshot = machine.buffer_snapshot();
  view.remainingInput.assign(rem->begin(), rem->end());
  view.complete = true;
  return view;
}

std::optional<Key> ValueMachine::eligible(Direction dir, const std::optional<Key>& last) const {
  std::multiset<Key>::const_iterator it;
  if (dir == Direction::Up) {
    it = last ? buf.lower_bound(*last) : buf.begin();
  } else {
    if (last) {
      it = buf.upper_bound(*last);
      it = it == buf.begin() ? buf.end() : std::prev(it);
    } else {
      it = buf.empty() ? buf.end() : std::prev(buf.end());
    }
  }
  if (it == buf.end()) return std::nullopt;
  return *it;
}

std::uint64_t ValueMachine::write_maximal_run(Direction dir, std::vector<Key>* out) {
  fill();
  std::uint64_t len = 0;
  std::optional<Key> last;
  while (true) {
    auto e = eligible(dir, last);
    if (!e) break;
    buf.erase(buf.find(*e));
    if (out) out->push_back(*e);
    ++written;
    ++len;
    last = *e;
    if (pos < input.size()) buf.insert(input[pos++]);
  }
  return len;
}

bool ShadowRun::has_eligible() const {
  std::multiset<Key>::const_iterator it;
  if (dir_ == Direction::Up) {
    it = last_ ? buf_.lower_bound(*last_) : buf_.begin();
  } else {
    if (last_) {
      it = buf_.upper_bound(*last_);
      it = it == buf_.begin() ? buf_.end() : std::prev(it);
    } else {
      it = buf_.empty() ? buf_.end() : std::prev(buf_.end());
    }
  }
  return it != buf_.end();
}

void ShadowRun::step() {
  if (!alive_) return;
  std::multiset<Key>::const_iterator it;
  if (dir_ == Direction::Up) {
    it = last_ ? buf_.lower_bound(*last_) : buf_.begin();
  } else {
    if (last_) {
      it = buf_.upper_bound(*last_);
      it = it == buf_.begin() ? buf_.end() : std::prev(it);
    } else {
      it = buf_.empty() ? buf_.end() : std::prev(buf_.end());
    }
  }
  if (it == buf_.end()) {
    alive_ = false;
    return;
  }
  last_ = *it;
  buf_.erase(it);
  ++len_;
}

bool conserves_elements(const RunSequence& seq, std::span<const Key> input) {
  std::vector<Key> a = seq.flatten();
  std::vector<Key> b(input.begin(), input.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a == b;
}

}  // namespace runsmith
