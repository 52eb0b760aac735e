#include "tracelab/rng.hpp"

#include <cmath>

namespace tcl {
namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kSeedSalt = 0x5CA1AB1E0DDBA11ULL;
constexpr std::uint64_t kSplitSalt = 0xB5297A4D3C2F9E6BULL;

// 64-bit finalizer (splitmix64 style): bijective, avalanching.
std::uint64_t mix(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace

SplitRng::SplitRng(std::uint64_t seed) : key_(mix(seed ^ kSeedSalt)) {}

SplitRng SplitRng::split(std::uint64_t stream) const {
  return SplitRng(FromKey{}, mix(key_ ^ mix(stream + kSplitSalt)));
}

std::uint64_t SplitRng::next_u64() {
  counter_ += 1;
  return mix(key_ + kGamma * counter_);
}

double SplitRng::next_unit() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double SplitRng::next_gaussian() {
  // u1 in (0, 1] so the log is finite.
  const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  const double u2 = next_unit();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

std::complex<double> SplitRng::next_complex_gaussian() {
  const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  const double u2 = next_unit();
  const double r = std::sqrt(-std::log(u1));  // radius for variance 1/2 parts
  return {r * std::cos(kTwoPi * u2), r * std::sin(kTwoPi * u2)};
}

}  // namespace tcl
