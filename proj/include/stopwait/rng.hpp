#pragma once

#include <cmath>
#include <cstdint>

namespace stopwait {

// Counter-based generator built on splitmix64.  A stream is keyed by
// (seed, stream_index), so independent streams (one per question, one per
// simulated path) can be derived without sharing state.  Output is
// deterministic for a fixed key within this implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : state_(mix(seed ^ 0x9e3779b97f4a7c15ULL, stream)) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return finalize(state_);
  }

  // [0, 1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // (0, 1), safe under log()
  double uniform_open() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform_open()));
    const double theta = 2.0 * pi() * uniform();
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  double normal(double mean, double sd) { return mean + sd * normal(); }

  double exponential(double rate) { return -std::log(uniform_open()) / rate; }

  // Standard type 1 extreme value (Gumbel), via inverse CDF.
  double gumbel() { return -std::log(-std::log(uniform_open())); }

  // Michael-Schucany-Haas transform.
  double inverse_gaussian(double mu, double lambda) {
    const double nu = normal();
    const double y = nu * nu;
    const double x = mu + mu * mu * y / (2.0 * lambda) -
                     mu / (2.0 * lambda) *
                         std::sqrt(4.0 * mu * lambda * y + mu * mu * y * y);
    if (uniform() <= mu / (mu + x)) return x;
    return mu * mu / x;
  }

  static constexpr double pi() { return 3.141592653589793238462643383279502884; }

 private:
  static std::uint64_t finalize(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  }

  static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    return finalize(a + 0x9e3779b97f4a7c15ULL * (b + 1));
  }

  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace stopwait
