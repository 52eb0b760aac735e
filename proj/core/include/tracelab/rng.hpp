#pragma once

#include <complex>
#include <cstdint>

namespace tcl {

// Splittable counter-based generator. Every draw is a pure function of
// (key, counter), and split() derives a child key from (key, stream), so
// independent subsystems can consume randomness without sharing state.
// Draw sequences are reproducible bit-for-bit across platforms.
class SplitRng {
 public:
  explicit SplitRng(std::uint64_t seed);

  // Child generator for a named stream. Children with distinct stream ids
  // are statistically independent of each other and of the parent.
  [[nodiscard]] SplitRng split(std::uint64_t stream) const;

  std::uint64_t next_u64();

  // Uniform on [0, 1) with 53 random bits.
  double next_unit();

  // Standard normal via Box-Muller. Hand-rolled rather than
  // std::normal_distribution so the byte stream is platform-independent.
  double next_gaussian();

  // Standard complex normal: E z = 0, E |z|^2 = 1.
  std::complex<double> next_complex_gaussian();

  [[nodiscard]] std::uint64_t key() const { return key_; }

 private:
  struct FromKey {};
  SplitRng(FromKey, std::uint64_t key) : key_(key) {}

  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
};

}  // namespace tcl
