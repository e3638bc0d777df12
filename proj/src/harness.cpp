#include "runsmith/harness.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "runsmith/generators.hpp"
#include "runsmith/io.hpp"
#include "runsmith/nearly_sorted.hpp"
#include "runsmith/offline.hpp"
#include "runsmith/online.hpp"

namespace runsmith {

namespace {

std::size_t worker_count() {
  if (const char* env = std::getenv("RUNSMITH_THREADS")) {
    char* end = nullptr;
    unsigned long v = std::strtoul(env, &end, 10);
    if (end && *end == '\0' && v >= 1) return static_cast<std::size_t>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

bool is_online_algo(const std::string& id) {
  return id == "rs_up" || id == "alternating" || id == "greedy4m" || id == "lookahead3m" ||
         id == "rand2m";
}

bool is_known_algo(const std::string& id) {
  return is_online_algo(id) || id == "greedy_offline" || id == "ptas_simple" ||
         id == "ptas_fib" || id == "ghost" || id == "oracle";
}

struct FixedInput {
  std::vector<Key> keys;
  std::string tag;
  std::optional<std::uint64_t> constructionOpt;
};

FixedInput resolve_fixed_input(const nlohmann::json& in, std::size_t m, std::uint64_t trialSeed) {
  FixedInput out;
  if (in.contains("file")) {
    std::string path = in.at("file").get<std::string>();
    out.keys = read_keys_auto(path);
    out.tag = "file:" + path;
    return out;
  }
  std::string gen = in.at("gen").get<std::string>();
  std::uint64_t seed = in.contains("seed") ? in.at("seed").get<std::uint64_t>() : trialSeed;
  if (gen == "sorted") {
    auto n = in.at("n").get<std::uint64_t>();
    out.keys.reserve(n);
    for (std::uint64_t i = 1; i <= n; ++i) out.keys.push_back(static_cast<Key>(i));
    out.constructionOpt = n == 0 ? 0 : 1;
    out.tag = "sorted/n=" + std::to_string(n);
  } else if (gen == "perm") {
    auto n = in.at("n").get<std::uint64_t>();
    out.keys = gen_random_permutation(n, seed);
    out.tag = "perm/n=" + std::to_string(n) + "/seed=" + std::to_string(seed);
  } else if (gen == "greedy_gap") {
    auto c = in.at("c").get<std::uint64_t>();
    out.keys = fixture_greedy_gap(m, c);
    out.constructionOpt = 2 * c;
    out.tag = "greedy_gap/c=" + std::to_string(c);
  } else if (gen == "fixture_3m") {
    out.keys = fixture_3m_tight(m);
    out.tag = "fixture_3m";
  } else if (gen == "rand_adversary") {
    auto t = in.at("t").get<std::uint64_t>();
    out.keys = adversary_randomized(m, t, seed).input;
    out.constructionOpt = t;
    out.tag = "rand_adversary/t=" + std::to_string(t) + "/seed=" + std::to_string(seed);
  } else if (gen == "nearly_sorted") {
    auto c = in.at("c").get<std::uint64_t>();
    auto runs = in.at("runs").get<std::uint64_t>();
    out.keys = gen_nearly_sorted(m, c, runs, seed).input;
    out.constructionOpt = runs;
    out.tag = "nearly_sorted/c=" + std::to_string(c) + "/runs=" + std::to_string(runs) +
              "/seed=" + std::to_string(seed);
  } else {
    throw std::invalid_argument("unknown generator: " + gen);
  }
  return out;
}

}  // namespace

RunSequence run_algorithm(const std::string& id, const std::vector<Key>& input, std::size_t m,
                          std::uint64_t trialSeed, double epsilon, std::uint64_t budget,
                          bool* ambiguityOut) {
  if (id == "rs_up") {
    ArraySource src(input);
    return rs_up(src, m);
  }
  if (id == "alternating") {
    ArraySource src(input);
    return alternating_updown(src, m);
  }
  if (id == "greedy4m") {
    ArraySource src(input);
    return greedy_4m_buffer(src, m).seq;
  }
  if (id == "lookahead3m") {
    ArraySource src(input);
    return lookahead_3m(src, m);
  }
  if (id == "rand2m") {
    ArraySource src(input);
    return randomized_2m(src, m, trialSeed).seq;
  }
  if (id == "greedy_offline") return greedy_offline(input, m);
  if (id == "ptas_simple") {
    return ptas(input, m, PtasConfig::from_epsilon(epsilon, PtasVariant::Simple)).seq;
  }
  if (id == "ptas_fib") {
    return ptas(input, m, PtasConfig::from_epsilon(epsilon, PtasVariant::Fibonacci)).seq;
  }
  if (id == "ghost") {
    GhostResult g = ghost_randomized(input, m, trialSeed);
    if (ambiguityOut) *ambiguityOut = g.ambiguityFlag;
    return g.seq;
  }
  if (id == "oracle") {
    OracleResult o = brute_force_opt(input, m, budget);
    return replay_directions(input, m, o.witnessDirections);
  }
  throw std::invalid_argument("unknown algorithm: " + id);
}

namespace {

OnlineAlgorithm make_online(const std::string& id, std::uint64_t trialSeed,
                            std::size_t capacityOverride) {
  if (id == "rs_up") return [](InputSource& s, std::size_t m) { return rs_up(s, m); };
  if (id == "alternating") {
    return [](InputSource& s, std::size_t m) { return alternating_updown(s, m); };
  }
  if (id == "greedy4m") {
    return [capacityOverride](InputSource& s, std::size_t m) {
      return greedy_4m_buffer(s, m, capacityOverride).seq;
    };
  }
  if (id == "lookahead3m") return [](InputSource& s, std::size_t m) { return lookahead_3m(s, m); };
  if (id == "rand2m") {
    return [trialSeed](InputSource& s, std::size_t m) {
      return randomized_2m(s, m, trialSeed).seq;
    };
  }
  throw std::invalid_argument("algorithm cannot face an adaptive adversary: " + id);
}

struct AdaptiveOutcome {
  RunSequence seq;
  std::vector<Key> input;
  std::optional<std::uint64_t> constructionOpt;
  std::string tag;
};

AdaptiveOutcome run_adaptive(const nlohmann::json& in, const std::string& id, std::size_t m,
                             std::uint64_t trialSeed) {
  std::string which = in.at("adversary").get<std::string>();
  std::size_t capacity = in.value("capacity", std::size_t{0});
  OnlineAlgorithm alg = make_online(id, trialSeed, capacity);
  AdaptiveOutcome out;
  if (which == "deterministic") {
    auto t = in.at("t").get<std::size_t>();
    DetAdversaryOutcome o = adversary_deterministic(alg, m, t);
    out.seq = std::move(o.output);
    out.input = std::move(o.input);
    out.constructionOpt = pairing_player(out.input, m, o.transcript).run_count();
    out.tag = "adversary_det/t=" + std::to_string(t) + "/seed=" + std::to_string(trialSeed);
  } else if (which == "resaug") {
    if (capacity == 0) alg = make_online(id, trialSeed, 4 * m - 3);
    ResAugOutcome o = adversary_resaug(alg, m);
    out.seq = std::move(o.output);
    out.input = std::move(o.input);
    out.constructionOpt = o.claimedOpt;
    out.tag = "adversary_resaug/seed=" + std::to_string(trialSeed);
  } else {
    throw std::invalid_argument("unknown adversary: " + which);
  }
  return out;
}

void fill_from_sequence(ExperimentRecord& rec, const RunSequence& seq) {
  rec.runCount = seq.run_count();
  rec.runLengths = seq.run_lengths();
  std::uint64_t total = 0;
  for (std::uint64_t len : rec.runLengths) total += len;
  rec.meanRunLength = rec.runCount == 0 ? 0.0
                                        : static_cast<double>(total) /
                                              static_cast<double>(rec.runCount);
}

void apply_oracle(ExperimentRecord& rec, const ExperimentSpec& spec,
                  const std::vector<Key>& input,
                  std::optional<std::uint64_t> constructionOpt) {
  switch (spec.oracle) {
    case OracleKind::None:
      break;
    case OracleKind::BruteForce:
      try {
        rec.optEstimate = brute_force_opt(input, spec.m, spec.nodeBudget).optRuns;
        rec.optProvenance = "bruteforce";
      } catch (const BudgetExceededError&) {
        rec.incomparable = true;
      }
      break;
    case OracleKind::Ptas:
      rec.optEstimate =
          ptas(input, spec.m, PtasConfig::from_epsilon(spec.epsilon, PtasVariant::Simple))
              .seq.run_count();
      rec.optProvenance = "ptas";
      break;
    case OracleKind::ConstructionOpt:
      if (!constructionOpt) {
        throw std::invalid_argument("no construction optimum is defined for this input");
      }
      rec.optEstimate = *constructionOpt;
      rec.optProvenance = "construction";
      break;
  }
  if (rec.optEstimate) {
    if (*rec.optEstimate == 0) {
      if (rec.runCount == 0) rec.ratio = 1.0;
    } else {
      rec.ratio = static_cast<double>(rec.runCount) / static_cast<double>(*rec.optEstimate);
    }
  }
}

ExperimentRecord do_trial(const ExperimentSpec& spec, std::uint64_t seed,
                          std::vector<Key>* realizedOut) {
  ExperimentRecord rec;
  rec.seed = seed;
  if (spec.inputSpec.is_object() && spec.inputSpec.contains("adversary")) {
    AdaptiveOutcome a = run_adaptive(spec.inputSpec, spec.algorithmId, spec.m, seed);
    fill_from_sequence(rec, a.seq);
    rec.inputTag = a.tag;
    apply_oracle(rec, spec, a.input, a.constructionOpt);
    *realizedOut = std::move(a.input);
  } else {
    FixedInput f = resolve_fixed_input(spec.inputSpec, spec.m, seed);
    bool ambiguity = false;
    RunSequence seq = run_algorithm(spec.algorithmId, f.keys, spec.m, seed, spec.epsilon,
                                    spec.nodeBudget, &ambiguity);
    fill_from_sequence(rec, seq);
    rec.ambiguityFlag = ambiguity;
    rec.inputTag = f.tag;
    apply_oracle(rec, spec, f.keys, f.constructionOpt);
  }
  rec.durationMs = 0;  // pinned: records must be byte-stable across reruns
  return rec;
}

}  // namespace

ExperimentOutput run_experiment(const ExperimentSpec& spec) {
  if (spec.trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (spec.m < 1) throw std::invalid_argument("m must be >= 1");
  if (!is_known_algo(spec.algorithmId)) {
    throw std::invalid_argument("unknown algorithm: " + spec.algorithmId);
  }
  if (!spec.inputSpec.is_object() ||
      (!spec.inputSpec.contains("file") && !spec.inputSpec.contains("gen") &&
       !spec.inputSpec.contains("adversary"))) {
    throw std::invalid_argument("input spec needs one of: file, gen, adversary");
  }
  bool adaptive = spec.inputSpec.contains("adversary");

  ExperimentOutput out;
  out.records.resize(spec.trials);
  std::vector<std::vector<Key>> realized(spec.trials);

  std::atomic<std::size_t> next{0};
  std::mutex errMutex;
  std::exception_ptr firstError;
  auto body = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= spec.trials) return;
      try {
        out.records[i] = do_trial(spec, spec.seedBase + i, &realized[i]);
      } catch (...) {
        std::lock_guard<std::mutex> guard(errMutex);
        if (!firstError) firstError = std::current_exception();
        return;
      }
    }
  };

  std::size_t workers = std::min(worker_count(), spec.trials);
  if (workers <= 1) {
    body();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
  }
  if (firstError) std::rethrow_exception(firstError);

  if (adaptive) {
    for (std::size_t i = 0; i < spec.trials; ++i) {
      out.realizedInputs[spec.seedBase + i] = std::move(realized[i]);
    }
  }
  return out;
}

CompetitiveSummary competitive_summary(const std::vector<ExperimentRecord>& records) {
  if (records.empty()) throw std::invalid_argument("no records to summarize");
  const std::string& provenance = records.front().optProvenance;
  for (const ExperimentRecord& rec : records) {
    if (rec.optProvenance != provenance) {
      throw std::invalid_argument("records mix oracle provenances");
    }
    if (!rec.ratio) throw std::invalid_argument("record without a ratio (no oracle, or incomparable)");
  }
  CompetitiveSummary summary;
  std::map<std::string, std::pair<double, std::uint64_t>> perInput;  // tag -> (sum, count)
  for (const ExperimentRecord& rec : records) {
    summary.maxRatio = std::max(summary.maxRatio, *rec.ratio);
    auto& bucket = perInput[rec.inputTag];
    bucket.first += *rec.ratio;
    bucket.second += 1;
    ++summary.runCountHistogram[rec.runCount];
  }
  for (const auto& [tag, bucket] : perInput) {
    summary.meanRatio = std::max(summary.meanRatio, bucket.first / bucket.second);
  }
  return summary;
}

ExperimentSpec parse_experiment_spec(const nlohmann::json& j) {
  ExperimentSpec spec;
  spec.algorithmId = j.at("algo").get<std::string>();
  spec.m = j.at("m").get<std::size_t>();
  spec.trials = j.value("trials", std::size_t{1});
  spec.seedBase = j.value("seedBase", std::uint64_t{0});
  std::string oracle = j.value("oracle", std::string("none"));
  if (oracle == "none") {
    spec.oracle = OracleKind::None;
  } else if (oracle == "bruteforce") {
    spec.oracle = OracleKind::BruteForce;
  } else if (oracle == "ptas") {
    spec.oracle = OracleKind::Ptas;
  } else if (oracle == "construction") {
    spec.oracle = OracleKind::ConstructionOpt;
  } else {
    throw std::invalid_argument("unknown oracle kind: " + oracle);
  }
  spec.epsilon = j.value("epsilon", 1.0);
  spec.nodeBudget = j.value("budget", std::uint64_t{10'000'000});
  spec.inputSpec = j.at("input");
  return spec;
}

std::string records_to_csv(const std::vector<ExperimentRecord>& records) {
  std::string out = "seed,r,opt,ratio,mean_run_len,duration_ms\n";
  char buf[64];
  for (const ExperimentRecord& rec : records) {
    out += std::to_string(rec.seed);
    out += ',';
    out += std::to_string(rec.runCount);
    out += ',';
    if (rec.optEstimate) out += std::to_string(*rec.optEstimate);
    out += ',';
    if (rec.ratio) {
      std::snprintf(buf, sizeof buf, "%.10g", *rec.ratio);
      out += buf;
    }
    out += ',';
    std::snprintf(buf, sizeof buf, "%.10g", rec.meanRunLength);
    out += buf;
    out += ',';
    out += std::to_string(rec.durationMs);
    out += '\n';
  }
  return out;
}

}  // namespace runsmith
