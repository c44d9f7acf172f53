#pragma once

#include <cstdint>

namespace motifcc {

// Counter-based random stream: RandomStream(master, i) yields a fixed sequence
// that depends only on (master, i), never on how many other streams exist or
// which thread runs it. Monte-Carlo loops give trial t the stream index t and
// reduce results in index order, so outputs are bit-identical for any worker
// count. Generator is xoshiro256** with splitmix64 state expansion.
class RandomStream {
public:
  RandomStream(std::uint64_t master_seed, std::uint64_t stream_index) {
    // splitmix64 walks a distinct odd-offset trajectory per stream index.
    std::uint64_t x = master_seed + 0x9e3779b97f4a7c15ULL * (2 * stream_index + 1);
    for (auto& w : s_) w = splitmix64(x);
    // All-zero state is invalid for xoshiro; splitmix64 makes it astronomically
    // unlikely, but guard anyway.
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 0x9e3779b97f4a7c15ULL;
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Unbiased integer in [0, n), n > 0 (rejection sampling).
  std::uint64_t uniform_below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform_double() < p; }

private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  static std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t s_[4];
};

// Stable seed derivation for independent sub-experiments (e.g. one per sweep
// point) so they never share trial streams.
inline std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t salt) {
  std::uint64_t x = master_seed ^ (0xd1b54a32d192ed03ULL * (salt + 1));
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace motifcc
