#pragma once

#include <cstdint>
#include <random>

namespace nvdrift {

/// Seedable generator with a fixed, documented algorithm so that simulated
/// datasets are identical across platforms and standard libraries.
///
/// Engine: std::mt19937_64 (its output sequence is fixed by the C++ standard),
/// seeded with splitmix64(seed) xor splitmix64(stream). Uniforms take the top
/// 53 bits of one draw; normals use the Box-Muller transform and cache the
/// second variate. The std distributions are avoided on purpose because their
/// algorithms are implementation-defined.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1).
  double uniform();

  /// Standard normal variate.
  double normal();

  double normal(double mean, double sigma) { return mean + sigma * normal(); }

 private:
  std::mt19937_64 engine_;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

}  // namespace nvdrift
