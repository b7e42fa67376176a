#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace impair {

// xoshiro256** seeded through SplitMix64. All draws used by the library go
// through this type so that a seed reproduces the same stream on any
// platform; the std:: distributions are implementation-defined and are not
// used anywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  // Uniform in [0, 1) with 53 random bits.
  double uniform();

  // Uniform integer in [0, bound). bound must be > 0. Unbiased (rejection).
  std::uint64_t below(std::uint64_t bound);

  // Standard normal via the Box-Muller transform (cosine branch only, one
  // normal per two uniforms).
  double normal();

  // Normal(mean, sd) restricted to [lo, hi] by rejection.
  double truncated_normal(double mean, double sd, double lo, double hi);

 private:
  std::array<std::uint64_t, 4> state_;
};

std::uint64_t splitmix64(std::uint64_t& state);

// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view text);

// Seed for an independent random stream: SplitMix64 finalizer applied to
// seed XOR fnv1a64(purpose). Purposes are stable strings such as
// "cv:Boosted Trees" so adding a new consumer never shifts existing streams.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view purpose);

}  // namespace impair
