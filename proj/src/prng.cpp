#include "codedtof/prng.hpp"

#include <cmath>

#include "codedtof/errors.hpp"

namespace codedtof {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

}  // namespace

Prng Prng::derive(std::string_view tag) const {
  return Prng(mix64(key_ ^ fnv1a64(tag)));
}

std::uint64_t Prng::next() { return mix64(key_ + (++counter_) * kGolden); }

double Prng::next_double() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

std::uint64_t Prng::next_below(std::uint64_t bound) {
  if (bound == 0) throw ConfigError("next_below: bound must be positive");
  const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
  for (;;) {
    const std::uint64_t r = next();
    if (r >= threshold) return r % bound;
  }
}

double Prng::next_gaussian() {
  // u1 in (0, 1]: shift the 53-bit integer by one so log never sees zero.
  const double u1 =
      (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = next_double();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * 3.14159265358979323846 * u2);
}

std::vector<std::uint32_t> Prng::permutation(std::uint32_t n) {
  std::vector<std::uint32_t> p(n);
  for (std::uint32_t i = 0; i < n; ++i) p[i] = i;
  for (std::uint32_t i = n; i > 1; --i) {
    const std::uint32_t j =
        static_cast<std::uint32_t>(next_below(i));
    std::swap(p[i - 1], p[j]);
  }
  return p;
}

std::vector<std::uint32_t> Prng::sample_without_replacement(std::uint32_t n,
                                                            std::uint32_t k) {
  if (k > n)
    throw ConfigError("sample_without_replacement: k exceeds population");
  std::vector<std::uint32_t> p(n);
  for (std::uint32_t i = 0; i < n; ++i) p[i] = i;
  std::vector<std::uint32_t> out;
  out.reserve(k);
  for (std::uint32_t i = 0; i < k; ++i) {
    const std::uint32_t j =
        i + static_cast<std::uint32_t>(next_below(n - i));
    std::swap(p[i], p[j]);
    out.push_back(p[i]);
  }
  return out;
}

}  // namespace codedtof
