#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace runsmith {

// Input stream contained a repeated key where an algorithm requires distinct keys.
class DuplicateKeyError : public std::runtime_error {
 public:
  explicit DuplicateKeyError(std::int64_t key)
      : std::runtime_error("duplicate key: " + std::to_string(key)), key_(key) {}
  std::int64_t key() const { return key_; }

 private:
  std::int64_t key_;
};

// 64-bit overflow in a sequence combinator (shift/scale) or generator.
class ArithmeticOverflowError : public std::runtime_error {
 public:
  explicit ArithmeticOverflowError(const std::string& what) : std::runtime_error(what) {}
};

// An adaptive adversary was driven outside its pull contract.
class ProtocolError : public std::runtime_error {
 public:
  explicit ProtocolError(const std::string& what) : std::runtime_error(what) {}
};

// Exhaustive search ran out of nodes. bestKnownRuns carries the best complete
// solution seen so far (an upper bound, not necessarily optimal), if any.
class BudgetExceededError : public std::runtime_error {
 public:
  BudgetExceededError(std::uint64_t budget, std::optional<std::uint64_t> bestKnownRuns)
      : std::runtime_error("search node budget exceeded: " + std::to_string(budget)),
        budget_(budget),
        bestKnownRuns_(bestKnownRuns) {}
  std::uint64_t budget() const { return budget_; }
  std::optional<std::uint64_t> best_known_runs() const { return bestKnownRuns_; }

 private:
  std::uint64_t budget_;
  std::optional<std::uint64_t> bestKnownRuns_;
};

// File or stream level failure (missing file, malformed text line, bad magic).
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace runsmith
