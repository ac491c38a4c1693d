#pragma once

#include <cmath>
#include <cstdint>

#include <Eigen/Core>

namespace sgdab {

// Counter-based, splittable pseudo-random stream.
//
// Each (seed, stream id) pair names an independent stream; draws are a pure
// function of (seed, stream, counter), so any value can be re-derived later
// from the same keys.  Substreams are keyed by 64-bit ids, which lets solver
// code hand out one stream per (backtracking iteration, run, inner iteration,
// axis) and replay a past iteration's noise without storing it.
class RngStream {
 public:
  RngStream() : RngStream(0, 0) {}
  RngStream(std::uint64_t seed, std::uint64_t stream)
      : key_(mix(mix(seed + 0x9e3779b97f4a7c15ULL) ^
                 mix(stream + 0xbf58476d1ce4e5b9ULL))),
        counter_(0) {}

  // Independent stream derived from this one; pure in (this->key, id).
  RngStream substream(std::uint64_t id) const {
    RngStream s;
    s.key_ = mix(key_ ^ mix(id + 0x94d049bb133111ebULL));
    s.counter_ = 0;
    return s;
  }

  std::uint64_t next_u64() {
    counter_ += 0x9e3779b97f4a7c15ULL;
    return mix(key_ + counter_);
  }

  // Uniform on [0, 1).
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform on {0, ..., n-1}.
  std::uint64_t next_below(std::uint64_t n) {
    using u128 = unsigned __int128;
    std::uint64_t x = next_u64();
    u128 m = static_cast<u128>(x) * static_cast<u128>(n);
    std::uint64_t lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
      std::uint64_t t = -n % n;
      while (lo < t) {
        x = next_u64();
        m = static_cast<u128>(x) * static_cast<u128>(n);
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  // Standard normal via Box-Muller; draws two uniforms per call.
  double next_normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    double u2 = next_double();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  // Vector of i.i.d. N(0, sd^2) entries.
  Eigen::VectorXd normal_vector(Eigen::Index n, double sd) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = sd * next_normal();
    return v;
  }

  std::uint64_t key() const { return key_; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t key_;
  std::uint64_t counter_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace sgdab
