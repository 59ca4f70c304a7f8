#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace sparsemd {

// Counter-based splittable generator in the SplitMix64 family: the i-th
// output is a bijective mix of key + i*gamma, so a stream is a pure function
// of (seed, stream_id, counter). Identical (seed, stream_id) pairs replay the
// same sequence; distinct stream ids hash to unrelated keys, which is what
// lets replicas run concurrently with reproducible, order-independent draws.
// Streams must not be shared across threads; derive one per worker instead.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id)
      : key_(mix(mix(seed + kGolden) ^ mix(stream_id + kSalt))) {}

  // Independent child stream; children of distinct ids never collide.
  RngStream substream(std::uint64_t id) const {
    return RngStream(FromKey{}, mix(key_ ^ mix(id + kSalt)));
  }

  std::uint64_t seed_key() const { return key_; }

  std::uint64_t next_u64() {
    counter_ += kGolden;
    return mix(key_ ^ counter_);
  }

  // Uniform on [0, 1) with 53 random bits.
  double next_uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double next_gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // Marsaglia polar method.
    double u, v, s;
    do {
      u = 2.0 * next_uniform() - 1.0;
      v = 2.0 * next_uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

  // Student t with integer dof >= 1 (unnormalized variance dof/(dof-2)).
  double next_student_t(int dof) {
    if (dof < 1) throw std::invalid_argument("student t requires dof >= 1");
    double chi2 = 0.0;
    for (int i = 0; i < dof; ++i) {
      const double g = next_gaussian();
      chi2 += g * g;
    }
    return next_gaussian() / std::sqrt(chi2 / dof);
  }

  double next_exponential(double lambda) {
    if (lambda <= 0.0) throw std::invalid_argument("exponential rate must be positive");
    return -std::log1p(-next_uniform()) / lambda;
  }

  // Chi-square with integer dof (sum of squared gaussians).
  double next_chi2(int dof) {
    double s = 0.0;
    for (int i = 0; i < dof; ++i) {
      const double g = next_gaussian();
      s += g * g;
    }
    return s;
  }

  double next_sign() { return (next_u64() >> 63) ? 1.0 : -1.0; }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  static constexpr std::uint64_t kSalt = 0xd1b54a32d192ed03ULL;

  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  }

  struct FromKey {};
  RngStream(FromKey, std::uint64_t key) : key_(key) {}

  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace sparsemd
