#pragma once

#include <cstdint>
#include <vector>

namespace runsmith {

// splitmix64 with the standard constants. Chosen over std::mt19937_64 so that
// every recorded seed reproduces bit-identically on any platform/compiler.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Unbiased integer in [0, bound) by rejection. bound must be nonzero.
  std::uint64_t below(std::uint64_t bound) {
    std::uint64_t min = (-bound) % bound;
    std::uint64_t r;
    do {
      r = next();
    } while (r < min);
    return r % bound;
  }

  // Fair coin: low bit of the next output. true = heads.
  bool coin() { return next() & 1ull; }

 private:
  std::uint64_t state_;
};

// In-place Fisher-Yates shuffle driven by a SplitMix64 stream.
template <class T>
void fisher_yates(std::vector<T>& v, SplitMix64& gen) {
  for (std::size_t i = v.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(gen.below(i));
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace runsmith
