#pragma once

#include <cmath>
#include <cstdint>

namespace rst {

/// Deterministic 64-bit generator (splitmix64). All randomness in the
/// library flows through this class so that results are reproducible
/// across platforms and standard-library versions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform integer in the inclusive range [lo, hi].
  int next_int(int lo, int hi) {
    std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1ull;
    return lo + static_cast<int>(next_u64() % span);
  }

  /// Uniform double strictly inside (0, 1).
  double next_open01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) *
           (1.0 / 9007199254740992.0);
  }

  /// Uniform double in the open interval (lo, hi).
  double next_real(double lo, double hi) {
    return lo + next_open01() * (hi - lo);
  }

  /// Standard normal via Box-Muller. Consumes exactly two uniforms per
  /// call (no caching) so draw sequences replay exactly.
  double next_gaussian() {
    double u1 = next_open01();
    double u2 = next_open01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

 private:
  std::uint64_t state_;
};

/// Stable per-stream seed derivation: mixes a master seed with a stream
/// index so that stream t always gets the same substream regardless of
/// scheduling order.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  Rng mixer(master ^ (0xd1342543de82ef95ull * (stream + 1)));
  mixer.next_u64();
  return mixer.next_u64();
}

}  // namespace rst
