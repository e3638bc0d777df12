#include "runsmith/io.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>

namespace runsmith {

namespace {

constexpr char kMagic[5] = {'R', 'G', 'E', 'N', '1'};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failed on " + path);
  return std::move(buf).str();
}

void spill(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw IoError("write failed on " + path);
}

Key parse_key_line(const std::string& path, std::size_t lineNo, const char* first,
                   const char* last) {
  Key value = 0;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec == std::errc::result_out_of_range) {
    throw IoError(path + ":" + std::to_string(lineNo) + ": key out of 64-bit range");
  }
  if (ec != std::errc() || ptr != last || first == last) {
    throw IoError(path + ":" + std::to_string(lineNo) + ": not an integer");
  }
  return value;
}

}  // namespace

std::vector<Key> read_keys_text(const std::string& path) {
  std::string body = slurp(path);
  std::vector<Key> keys;
  std::size_t lineNo = 0;
  const char* p = body.data();
  const char* end = p + body.size();
  while (p != end) {
    ++lineNo;
    const char* eol = p;
    while (eol != end && *eol != '\n') ++eol;
    keys.push_back(parse_key_line(path, lineNo, p, eol));
    p = eol == end ? end : eol + 1;
  }
  return keys;
}

void write_keys_text(const std::string& path, std::span<const Key> keys) {
  std::string body;
  for (Key k : keys) {
    body += std::to_string(k);
    body += '\n';
  }
  spill(path, body);
}

std::vector<Key> read_keys_binary(const std::string& path) {
  std::string body = slurp(path);
  if (body.size() < sizeof(kMagic) + 8 ||
      !std::equal(std::begin(kMagic), std::end(kMagic), body.begin())) {
    throw IoError(path + ": missing RGEN1 header");
  }
  const auto* bytes = reinterpret_cast<const unsigned char*>(body.data()) + sizeof(kMagic);
  std::uint64_t count = 0;
  for (int i = 0; i < 8; ++i) count |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  bytes += 8;
  if (body.size() != sizeof(kMagic) + 8 + count * 8) {
    throw IoError(path + ": payload length does not match the declared count");
  }
  std::vector<Key> keys;
  keys.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i, bytes += 8) {
    std::uint64_t raw = 0;
    for (int b = 0; b < 8; ++b) raw |= static_cast<std::uint64_t>(bytes[b]) << (8 * b);
    keys.push_back(static_cast<Key>(raw));
  }
  return keys;
}

void write_keys_binary(const std::string& path, std::span<const Key> keys) {
  std::string body(kMagic, sizeof(kMagic));
  auto putU64 = [&body](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) body.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  };
  putU64(keys.size());
  for (Key k : keys) putU64(static_cast<std::uint64_t>(k));
  spill(path, body);
}

std::vector<Key> read_keys_auto(const std::string& path) {
  std::string body = slurp(path);
  bool binary = body.size() >= sizeof(kMagic) &&
                std::equal(std::begin(kMagic), std::end(kMagic), body.begin());
  return binary ? read_keys_binary(path) : read_keys_text(path);
}

ResultDoc make_result_doc(const RunSequence& seq, const std::string& algo, std::size_t m,
                          std::uint64_t seed) {
  ResultDoc doc;
  doc.algo = algo;
  doc.m = m;
  doc.seed = seed;
  for (const Run& run : seq.runs) doc.runs.push_back({run.direction, run.length()});
  doc.r = seq.run_count();
  return doc;
}

nlohmann::ordered_json result_to_json(const ResultDoc& doc) {
  nlohmann::ordered_json j;
  j["schema"] = "runsmith/1";
  j["algo"] = doc.algo;
  j["m"] = doc.m;
  j["seed"] = doc.seed;
  nlohmann::ordered_json runs = nlohmann::ordered_json::array();
  for (const auto& [dir, len] : doc.runs) {
    runs.push_back({{"dir", to_cstring(dir)}, {"len", len}});
  }
  j["runs"] = std::move(runs);
  j["r"] = doc.r;
  if (doc.opt) {
    j["opt"] = *doc.opt;
    j["optProvenance"] = doc.optProvenance;
  } else {
    j["opt"] = nullptr;
    j["optProvenance"] = nullptr;
  }
  if (doc.ratio) {
    j["ratio"] = *doc.ratio;
  } else {
    j["ratio"] = nullptr;
  }
  return j;
}

ResultDoc result_from_json(const nlohmann::json& j) {
  if (j.value("schema", "") != std::string("runsmith/1")) {
    throw IoError("unsupported result schema");
  }
  ResultDoc doc;
  doc.algo = j.at("algo").get<std::string>();
  doc.m = j.at("m").get<std::size_t>();
  doc.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& run : j.at("runs")) {
    std::string dir = run.at("dir").get<std::string>();
    if (dir != "up" && dir != "down") throw IoError("bad run direction: " + dir);
    doc.runs.push_back({dir == "up" ? Direction::Up : Direction::Down,
                        run.at("len").get<std::uint64_t>()});
  }
  doc.r = j.at("r").get<std::uint64_t>();
  if (doc.r != doc.runs.size()) throw IoError("r does not match the run list length");
  if (j.contains("opt") && !j.at("opt").is_null()) {
    doc.opt = j.at("opt").get<std::uint64_t>();
    doc.optProvenance = j.value("optProvenance", "");
  }
  if (j.contains("ratio") && !j.at("ratio").is_null()) {
    doc.ratio = j.at("ratio").get<double>();
  }
  return doc;
}

void write_result_file(const std::string& path, const ResultDoc& doc) {
  spill(path, result_to_json(doc).dump(2) + "\n");
}

ResultDoc read_result_file(const std::string& path) {
  std::string body = slurp(path);
  nlohmann::json j = nlohmann::json::parse(body, nullptr, true);
  return result_from_json(j);
}

}  // namespace runsmith
