#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "ged/random.hpp"

namespace ged {

// Rician fast-fading channel: h = alpha e^{i theta} + CN(0, scatter_variance),
// redrawn independently every sample. K = alpha^2 / scatter_variance;
// alpha = 0 is Rayleigh fading.
struct RicianChannel {
  double los_amplitude;     // alpha >= 0
  double los_phase;         // theta, radians
  double scatter_variance;  // sigma_h^2 > 0

  RicianChannel(double los_amplitude, double los_phase, double scatter_variance);

  static RicianChannel from_k_factor(double k_factor, double scatter_variance = 1.0,
                                     double los_phase = 0.0);

  double k_factor() const { return los_amplitude * los_amplitude / scatter_variance; }
};

// i.i.d. channel coefficients; bit-identical for identical inputs.
std::vector<std::complex<double>> sample_h(const RicianChannel& channel,
                                           std::size_t count, std::uint64_t seed);

void fill_h(Rng& rng, const RicianChannel& channel,
            std::span<std::complex<double>> out);

// n-th absolute moment of the unit-power Rice variable z0 = CN(m, s2) with
// |m|^2 = alpha^2/(1+alpha^2), s2 = 1/(1+alpha^2) (so E|z0|^2 = 1):
// Gamma(n/2+1) / (1+alpha^2)^(n/2) * 1F1(-n/2, 1; -alpha^2). Needs n > -2.
double unit_rice_abs_moment(double n, double alpha);

}  // namespace ged
