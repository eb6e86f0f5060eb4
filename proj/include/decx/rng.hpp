#pragma once

// Portable counter-based random numbers.
//
// A draw is a pure function of (seed, stream, counter):
//   key  = mix64(seed * 0x9E3779B97F4A7C15 ^ mix64(stream + 0xD1B54A32D192ED03))
//   bits = mix64(key + (counter + 1) * 0x9E3779B97F4A7C15)
// where mix64 is the SplitMix64 finalizer. Uniform doubles take the top 53
// bits. Nothing depends on the standard library's distributions, so
// outputs are bit-identical across platforms and compilers.

#include <cstdint>
#include <span>

namespace decx {

std::uint64_t mix64(std::uint64_t x);

class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  /// Bits at an explicit counter position; does not advance the state.
  std::uint64_t bits_at(std::uint64_t counter) const;
  double uniform_at(std::uint64_t counter) const;

  std::uint64_t next_bits() { return bits_at(counter_++); }
  /// Uniform in [0, 1).
  double uniform() { return uniform_at(counter_++); }
  /// Standard exponential via inversion.
  double exponential();
  /// Inverse-CDF sample from a probability vector; falls back to the last
  /// index with positive mass when round-off leaves u above the total.
  std::size_t categorical(std::span<const double> probs);

  std::uint64_t counter() const { return counter_; }
  void seek(std::uint64_t counter) { counter_ = counter; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Inverse-CDF sample for a given uniform draw.
std::size_t sample_categorical(std::span<const double> probs, double u);

}  // namespace decx
