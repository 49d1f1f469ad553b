#pragma once

#include <cstdint>

namespace perclab {

// Stateless counter-based generator. Every variate is a pure function of
// (seed, stream tags), so replicate r / element (x,y) always sees the same
// uniform no matter how work is split across threads. The mixer is the
// splitmix64 finalizer, applied to a chain of tagged words.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : key_(mix64(seed ^ 0x9e3779b97f4a7c15ULL)) {}

  // Independent child stream, e.g. one per replicate.
  CounterRng substream(std::uint64_t idx) const {
    CounterRng r(0);
    r.key_ = mix64(key_ ^ mix64(idx + 0xd1b54a32d192ed03ULL));
    return r;
  }

  std::uint64_t bits(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) const {
    std::uint64_t h = key_;
    h = mix64(h ^ (a + 0x8cb92ba72f3d8dd7ULL));
    h = mix64(h ^ (b + 0xda942042e4dd58b5ULL));
    h = mix64(h ^ (c + 0xca5a826395121157ULL));
    return h;
  }

  // Uniform in [0,1) with 53 random bits.
  double uniform(std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) const {
    return static_cast<double>(bits(a, b, c) >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p, std::uint64_t a, std::uint64_t b = 0, std::uint64_t c = 0) const {
    return uniform(a, b, c) < p;
  }

  std::uint64_t key() const { return key_; }

 private:
  std::uint64_t key_;
};

// Fixed tags keep the per-element streams of different fields disjoint.
namespace tag {
inline constexpr std::uint64_t env_h = 0x11;
inline constexpr std::uint64_t env_v = 0x12;
inline constexpr std::uint64_t bond_h = 0x21;
inline constexpr std::uint64_t bond_v = 0x22;
inline constexpr std::uint64_t site = 0x23;
inline constexpr std::uint64_t word = 0x31;
inline constexpr std::uint64_t field = 0x32;
}  // namespace tag

}  // namespace perclab
