#pragma once

#include <cstdint>

#include "compass/types.hpp"

namespace compass {

/// Deterministic splitmix64 stream. Substreams are derived by hashing
/// (seed, index...) so a sample's randomness depends only on its index,
/// never on how samples are distributed over workers.
class Rng {
 public:
  explicit Rng(std::uint64_t state) : state_(state) {}

  static Rng substream(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                       std::uint64_t c = 0);

  std::uint64_t next_u64();

  /// Uniform double in [0, 1).
  double uniform();
  /// Uniform double in (0, 1].
  double uniform_open();
  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi);
  /// Uniform integer in [lo, hi] inclusive.
  int uniform_int(int lo, int hi);
  /// Standard normal via Box-Muller (two uniforms per draw, no caching).
  double normal();

  Vec gaussian_vector(int n);
  /// Uniform draw from the Euclidean unit sphere in R^n.
  Vec unit_sphere(int n);

 private:
  std::uint64_t state_;
};

/// splitmix64 finalizer; also used to mix substream indices.
std::uint64_t mix64(std::uint64_t x);

/// Purpose tags for the last substream slot, so different consumers of the
/// same user seed never share a stream.
namespace stream {
inline constexpr std::uint64_t kSphere = 1;
inline constexpr std::uint64_t kRepresentative = 2;
inline constexpr std::uint64_t kAtom = 3;
inline constexpr std::uint64_t kRestart = 4;
inline constexpr std::uint64_t kMatrix = 5;
inline constexpr std::uint64_t kSignal = 6;
inline constexpr std::uint64_t kSearch = 7;
inline constexpr std::uint64_t kWeights = 8;
}  // namespace stream

}  // namespace compass
