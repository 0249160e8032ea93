#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace qbolo {

/// Seeded random stream with platform-independent output.
///
/// Engine: std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Streams are split by hashing (seed, stream id) with SplitMix64.
/// Doubles take the top 53 bits; normals use the Marsaglia polar method.
/// The std:: distributions are avoided because their algorithms are
/// implementation-defined.
class Rng {
 public:
  static constexpr std::string_view kAlgorithm = "mt19937_64+splitmix64-streams";

  Rng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform on [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  /// +1 or -1 with equal probability.
  double sign() { return (engine_() >> 63) != 0 ? 1.0 : -1.0; }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace qbolo
