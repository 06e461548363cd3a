#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace revo {

// Deterministic random stream keyed by (seed, label).
//
// The same key yields the same sequence on every platform, no matter how
// many other streams exist or which threads draw from them; distinct labels
// give unrelated sequences. Internally xoshiro256** seeded via splitmix64
// from a hash of the key. Doubles and bounded integers are derived from the
// raw 64-bit output with integer arithmetic only, so sequences are
// bit-stable.
//
// A stream is owned by exactly one consumer at a time; it is not
// synchronized.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::string_view label);

  std::uint64_t next_u64();

  // Uniform in [0, 1) with 53-bit resolution.
  double next_double();

  // Uniform integer in [0, n), n > 0. Unbiased (Lemire reduction).
  std::uint64_t next_below(std::uint64_t n);

  // Uniform in [lo, hi).
  double next_in(double lo, double hi) {
    return lo + next_double() * (hi - lo);
  }

 private:
  std::array<std::uint64_t, 4> state_;
};

inline RandomStream derive_stream(std::uint64_t seed, std::string_view label) {
  return RandomStream(seed, label);
}

}  // namespace revo
