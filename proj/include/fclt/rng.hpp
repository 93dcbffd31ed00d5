#pragma once

#include <cstdint>
#include <cmath>
#include <numbers>

namespace fclt {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Counter-based stream: the output at counter c is a pure function of
/// (key, c), and the key is a pure function of (master seed, stream id).
/// Distinct stream ids therefore give independent streams no matter in
/// which order they are derived, which keeps parallel replications
/// reproducible bit for bit.
class RngStream {
 public:
  static RngStream derive(std::uint64_t master_seed, std::uint64_t stream_id) {
    std::uint64_t key =
        splitmix64(splitmix64(master_seed) ^ (splitmix64(stream_id) + 0x632be59bd9b4e019ULL));
    return RngStream(key);
  }

  std::uint64_t next_u64() { return splitmix64(key_ + counter_++ * 0xd1342543de82ef95ULL); }

  /// Uniform on [0,1) with 53 bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Standard normal via Box-Muller (fixed two draws per pair, fully
  /// deterministic across platforms).
  double next_normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = next_double();
    double u2 = next_double();
    while (u1 <= 0.0) u1 = next_double();
    double r = std::sqrt(-2.0 * std::log(u1));
    double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

 private:
  explicit RngStream(std::uint64_t key) : key_(key) {}

  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
  double spare_ = 0;
  bool have_spare_ = false;
};

}  // namespace fclt
