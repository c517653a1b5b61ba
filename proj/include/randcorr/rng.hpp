#ifndef RANDCORR_RNG_HPP
#define RANDCORR_RNG_HPP

#include <cmath>
#include <cstdint>
#include <initializer_list>

#include <Eigen/Dense>

#include "randcorr/common.hpp"

namespace randcorr {

// SplitMix64 finalizer (Vigna 2015). Used both as the sequential generator
// step and as the key-derivation mix for counter-based streams.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * UINT64_C(0xBF58476D1CE4E5B9);
  z = (z ^ (z >> 27)) * UINT64_C(0x94D049BB133111EB);
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGolden = UINT64_C(0x9E3779B97F4A7C15);

// Folds a list of words into one stream key. Any subset of the work keyed by
// (seed, tag, indices...) can be regenerated independently, which keeps
// results bitwise independent of how the work is partitioned across threads.
inline std::uint64_t derive_key(std::initializer_list<std::uint64_t> words) {
  std::uint64_t h = UINT64_C(0x7C0FFEE1234ABCDE);
  for (std::uint64_t w : words) h = mix64(h + kGolden + w);
  return h;
}

// Stream tags keep random numbers drawn for different purposes disjoint.
namespace stream_tag {
inline constexpr std::uint64_t kSetting = 1;
inline constexpr std::uint64_t kShot = 2;
inline constexpr std::uint64_t kHaar = 3;
inline constexpr std::uint64_t kRotation = 4;
inline constexpr std::uint64_t kRepetition = 5;
inline constexpr std::uint64_t kSweep = 6;
}  // namespace stream_tag

class RngStream {
 public:
  explicit RngStream(std::uint64_t key) : state_(key) {}

  static RngStream keyed(std::uint64_t seed, std::uint64_t tag,
                         std::uint64_t a = 0, std::uint64_t b = 0) {
    return RngStream(derive_key({seed, tag, a, b}));
  }

  std::uint64_t next_u64() {
    state_ += kGolden;
    return mix64(state_);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller; pairs are cached.
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    // avoid log(0)
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * kPi * u2);
    have_spare_ = true;
    return r * std::cos(2.0 * kPi * u2);
  }

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Sphere-uniform direction: cos(theta) uniform on [-1, 1], phi uniform on
// [0, 2*pi). Matches the measure sin(theta) dtheta dphi.
inline Eigen::Vector3d sample_unit_vector(RngStream& rng) {
  double ct = rng.uniform(-1.0, 1.0);
  double phi = rng.uniform(0.0, 2.0 * kPi);
  double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
  return {st * std::cos(phi), st * std::sin(phi), ct};
}

// The direction used by setting index i for party n under master seed `seed`.
inline Eigen::Vector3d setting_direction(std::uint64_t seed, std::uint64_t setting_index,
                                         std::uint64_t party) {
  RngStream rng = RngStream::keyed(seed, stream_tag::kSetting, setting_index, party);
  return sample_unit_vector(rng);
}

}  // namespace randcorr

#endif
