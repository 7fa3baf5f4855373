#pragma once

// Counter-based random stream built on Philox4x32-10 (Salmon et al.,
// "Parallel Random Numbers: As Easy as 1, 2, 3", SC'11).
//
// A stream is identified by (seed, stream id). The seed keys the Philox
// permutation; the stream id occupies the upper half of the 128-bit counter,
// so streams with distinct ids under the same seed draw from disjoint counter
// blocks and never overlap. Draw sequences are reproducible bit-for-bit
// across runs and platforms. substream() derives child ids for hierarchical
// use (per trial, per anchor) without coordination.

#include <cmath>
#include <cstdint>
#include <numbers>

namespace rssiloc {

class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed), stream_(stream) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  // Child stream for index `child`; deterministic in (stream, child).
  RngStream substream(std::uint64_t child) const {
    return RngStream(seed_, split_mix(stream_ + 0x9E3779B97F4A7C15ULL * (child + 1)));
  }

  std::uint64_t next_u64() {
    if (word_pos_ >= 4) refill();
    std::uint64_t lo = words_[word_pos_++];
    std::uint64_t hi = words_[word_pos_++];
    return lo | (hi << 32);
  }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller; consumes two uniforms per pair.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // u1 in (0, 1] keeps the log finite.
    double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    double u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  // One Philox4x32-10 block; exposed for known-answer tests.
  static void philox4x32_10(std::uint32_t c0, std::uint32_t c1, std::uint32_t c2,
                            std::uint32_t c3, std::uint32_t k0, std::uint32_t k1,
                            std::uint32_t out[4]) {
    constexpr std::uint32_t kMul0 = 0xD2511F53u;
    constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
    constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
    for (int round = 0; round < 10; ++round) {
      std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c0;
      std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c2;
      std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
      std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
      std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
      std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
      c0 = hi1 ^ c1 ^ k0;
      c1 = lo1;
      c2 = hi0 ^ c3 ^ k1;
      c3 = lo0;
      k0 += kWeyl0;
      k1 += kWeyl1;
    }
    out[0] = c0;
    out[1] = c1;
    out[2] = c2;
    out[3] = c3;
  }

 private:
  static std::uint64_t split_mix(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
  }

  void refill() {
    philox4x32_10(static_cast<std::uint32_t>(counter_),
                  static_cast<std::uint32_t>(counter_ >> 32),
                  static_cast<std::uint32_t>(stream_),
                  static_cast<std::uint32_t>(stream_ >> 32),
                  static_cast<std::uint32_t>(seed_),
                  static_cast<std::uint32_t>(seed_ >> 32), words_);
    ++counter_;
    word_pos_ = 0;
  }

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  std::uint32_t words_[4] = {};
  int word_pos_ = 4;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace rssiloc
