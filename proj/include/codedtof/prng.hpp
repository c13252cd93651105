#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace codedtof {

// Deterministic random stream used for every stochastic choice in the
// toolkit. The generator is SplitMix64 run in counter mode: the k-th output
// of a stream with key K is
//
//   mix64(K + (k + 1) * 0x9E3779B97F4A7C15)
//
// where mix64 is the SplitMix64 finalizer (xorshift-multiply rounds with the
// published constants 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB). Streams are
// split by purpose: derive(tag) hashes the tag with 64-bit FNV-1a, XORs it
// into the parent key and applies one mix64 round, yielding an independent
// child key. Splitting never advances the parent stream, so the consumption
// pattern of one purpose cannot disturb another. Any implementation of this
// recipe, in any language, reproduces the same values bit for bit.
class Prng {
 public:
  explicit Prng(std::uint64_t seed) : key_(seed) {}

  // Independent child stream for a named purpose.
  Prng derive(std::string_view tag) const;

  std::uint64_t next();

  // Uniform on [0, 1) using the top 53 bits of next().
  double next_double();

  // Unbiased uniform integer on [0, bound), bound >= 1, by rejection:
  // draw until the value falls below the largest multiple of bound.
  std::uint64_t next_below(std::uint64_t bound);

  // Standard normal via Box-Muller; consumes exactly two uniforms per call.
  // Uses z = sqrt(-2 ln u1) * cos(2 pi u2) with u1 in (0, 1].
  double next_gaussian();

  // Fisher-Yates permutation of [0, n).
  std::vector<std::uint32_t> permutation(std::uint32_t n);

  // k distinct values from [0, n), in draw order (partial Fisher-Yates).
  std::vector<std::uint32_t> sample_without_replacement(std::uint32_t n,
                                                        std::uint32_t k);

  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace codedtof
