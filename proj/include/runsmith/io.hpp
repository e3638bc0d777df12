#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "runsmith/core.hpp"
#include "runsmith/errors.hpp"

namespace runsmith {

// Text form: one ASCII decimal integer per line, optional leading '-', LF
// endings. Binary form: magic "RGEN1", u64 LE count, then count i64 LE keys.
std::vector<Key> read_keys_text(const std::string& path);
void write_keys_text(const std::string& path, std::span<const Key> keys);
std::vector<Key> read_keys_binary(const std::string& path);
void write_keys_binary(const std::string& path, std::span<const Key> keys);
// Sniffs the magic bytes and dispatches.
std::vector<Key> read_keys_auto(const std::string& path);

// One algorithm run serialized as JSON. optProvenance empty means the opt
// field is absent (serialized as null).
struct ResultDoc {
  std::string algo;
  std::size_t m = 0;
  std::uint64_t seed = 0;
  std::vector<std::pair<Direction, std::uint64_t>> runs;
  std::uint64_t r = 0;
  std::optional<std::uint64_t> opt;
  std::string optProvenance;
  std::optional<double> ratio;
};

ResultDoc make_result_doc(const RunSequence& seq, const std::string& algo, std::size_t m,
                          std::uint64_t seed);
nlohmann::ordered_json result_to_json(const ResultDoc& doc);
ResultDoc result_from_json(const nlohmann::json& j);
void write_result_file(const std::string& path, const ResultDoc& doc);
ResultDoc read_result_file(const std::string& path);

}  // namespace runsmith
