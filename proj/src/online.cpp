#include "runsmith/online.hpp"

#include <algorithm>

namespace runsmith {

RunSequence rs_up(InputSource& in, std::size_t m) {
  BufferMachine machine(m, in);
  RunSequence seq{{}, m};
  while (machine.prepare()) seq.runs.push_back(machine.write_maximal_run(Direction::Up));
  return seq;
}

RunSequence alternating_updown(InputSource& in, std::size_t m, Direction first) {
  BufferMachine machine(m, in);
  RunSequence seq{{}, m};
  Direction d = first;
  while (machine.prepare()) {
    seq.runs.push_back(machine.write_maximal_run(d));
    d = opposite(d);
  }
  return seq;
}

namespace {

Direction pick_greedy(const SimResult& up, const SimResult& down) {
  return down.length > up.length ? Direction::Down : Direction::Up;
}

}  // namespace

Greedy4mResult greedy_4m_buffer(InputSource& in, std::size_t m, std::size_t capacity) {
  if (capacity == 0) capacity = 4 * m;
  DuplicateGuardSource guard(in);
  BufferMachine machine(capacity, guard);
  Greedy4mResult result;
  result.seq.m = capacity;
  while (machine.prepare()) {
    UnwrittenView view{machine.buffer_snapshot(), {}, machine.input_exhausted()};
    PartitionDecision d;
    d.up = simulate_maximal_run_length(view, m, Direction::Up, 3 * m);
    d.down = simulate_maximal_run_length(view, m, Direction::Down, 3 * m);
    d.chosen = pick_greedy(d.up, d.down);
    d.consumedBefore = machine.consumed();
    d.writtenBefore = machine.written();
    result.decisions.push_back(d);
    result.seq.runs.push_back(machine.write_maximal_run(d.chosen));
  }
  return result;
}

RunSequence lookahead_3m(InputSource& in, std::size_t m) {
  DuplicateGuardSource guard(in);
  if (!guard.peekable()) throw std::logic_error("lookahead_3m requires a peekable source");
  BufferMachine machine(m, guard);
  RunSequence seq{{}, m};
  while (machine.prepare()) {
    UnwrittenView view;
    view.bufferSnapshot = machine.buffer_snapshot();
    for (std::size_t i = 0; i < 3 * m; ++i) {
      auto e = guard.peek(i);
      if (!e) break;
      view.remainingInput.push_back(*e);
    }
    // fewer than 3m peeked elements means we can see the true end of input
    view.complete = view.remainingInput.size() < 3 * m;
    SimResult up = simulate_maximal_run_length(view, m, Direction::Up, 3 * m);
    SimResult down = simulate_maximal_run_length(view, m, Direction::Down, 3 * m);
    Direction dir = pick_greedy(up, down);
    seq.runs.push_back(machine.write_maximal_run(dir));
    if (!machine.prepare()) break;
    seq.runs.push_back(machine.write_maximal_run(dir));
    if (!machine.prepare()) break;
    seq.runs.push_back(machine.write_maximal_run(opposite(dir)));
  }
  return seq;
}

Rand2mResult randomized_2m(InputSource& in, std::size_t m, CoinSource& coins) {
  DuplicateGuardSource guard(in);
  BufferMachine machine(m, guard);
  Rand2mResult result;
  result.seq.m = m;
  while (machine.prepare()) {
    Direction d = coins.flip();
    ShadowRun shadow(opposite(d), machine.buffer_snapshot());
    machine.begin_run();
    Run run{d, {}};
    std::optional<Key> last;
    while (machine.eligible(d, last)) {
      auto step = machine.write_step(d, last);
      run.elements.push_back(step.written);
      last = step.written;
      if (shadow.alive()) {
        shadow.step();
        if (step.ingested && shadow.alive()) shadow.ingest(*step.ingested);
      }
    }
    bool lucky = !shadow.alive() || !shadow.has_eligible();
    result.coins.choices.push_back({d, lucky});
    result.seq.runs.push_back(std::move(run));
    if (lucky) {
      if (!machine.prepare()) continue;
      result.seq.runs.push_back(machine.write_maximal_run(d));
      if (!machine.prepare()) continue;
      result.seq.runs.push_back(machine.write_maximal_run(opposite(d)));
    } else {
      if (!machine.prepare()) continue;
      result.seq.runs.push_back(machine.write_maximal_run(opposite(d)));
      if (!machine.prepare()) continue;
      result.seq.runs.push_back(machine.write_maximal_run(d));
      if (!machine.prepare()) continue;
      result.seq.runs.push_back(machine.write_maximal_run(opposite(d)));
    }
  }
  return result;
}

Rand2mResult randomized_2m(InputSource& in, std::size_t m, std::uint64_t seed) {
  PrngCoins coins(seed);
  return randomized_2m(in, m, coins);
}

}  // namespace runsmith
