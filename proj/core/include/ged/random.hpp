#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace ged {

// splitmix64 step; advances the state and returns the next output.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Independent sub-stream seed for (master, index). Used to give every
// Monte Carlo trial its own generator, so results do not depend on how
// trials are scheduled across threads.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t s = master ^ (0x632BE59BD9B4E019ull * (index + 1));
  (void)splitmix64(s);
  return splitmix64(s);
}

// mt19937_64 engine plus fixed transforms. The engine's output sequence is
// specified by the standard and the transforms below avoid the library
// distributions (whose output is implementation-defined), so streams are
// bit-identical across platforms for a given seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on (0, 1), 53-bit resolution; never returns 0 or 1.
  double uniform() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Standard normal via the polar method; caches the paired deviate.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

  // Circularly symmetric complex Gaussian with E|z|^2 = total_variance.
  std::complex<double> complex_normal(double total_variance) {
    const double c = std::sqrt(total_variance / 2.0);
    return {c * normal(), c * normal()};
  }

  // Gamma(shape, scale 1) by Marsaglia-Tsang rejection; exact for every
  // shape > 0 (shape < 1 goes through the boost G_{a+1} * U^{1/a}).
  double gamma(double shape);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace ged
