#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "ged/random.hpp"

namespace ged {

// Complex McLeish noise: the Gaussian scale mixture w = sqrt(G) * X with
// G ~ Gamma(shape v, rate v) and X circularly symmetric complex Gaussian,
// E|X|^2 = variance. Smaller v is heavier-tailed; v -> infinity is Gaussian.
struct McLeishNoise {
  double variance;          // sigma_w^2, the (estimated) noise power
  double non_gaussianity;   // v; capped at kMaxV wherever it is used
  double uncertainty_db;    // rho in dB; 0 means perfect power estimation
  bool gaussian_limit;      // exact v -> infinity mode: G is identically 1

  static constexpr double kMaxV = 1e8;

  McLeishNoise(double variance, double non_gaussianity, double uncertainty_db = 0.0);

  // Exact Gaussian noise of the given power (the v -> infinity limit).
  static McLeishNoise gaussian(double variance, double uncertainty_db = 0.0);

  double capped_v() const;
  // Linear uncertainty factor rho = 10^(rho_dB/10) >= 1.
  double uncertainty_factor() const;
};

// Copy with variance inflated by the linear uncertainty factor and
// uncertainty_db reset to 0 (the worst case for detection).
McLeishNoise worst_case(const McLeishNoise& noise);

// Radial density over the complex plane, as a function of |w|. For
// w_abs = 0 the density is +infinity when v <= 1 (integrable singularity,
// reported as the infinity marker) and v/(pi (v-1) sigma_w^2) when v > 1.
double mcleish_pdf(double w_abs, const McLeishNoise& noise);

// i.i.d. samples; bit-identical for identical (noise, count, seed).
std::vector<std::complex<double>> sample_mcleish(const McLeishNoise& noise,
                                                 std::size_t count,
                                                 std::uint64_t seed);

// Same per-sample recipe writing into out, consuming rng. The Monte Carlo
// engine uses this form to keep per-trial sub-streams.
void fill_mcleish(Rng& rng, const McLeishNoise& noise,
                  std::span<std::complex<double>> out);

// E|w|^n for n > -2 (fractional n allowed):
// Gamma(n/2+v) Gamma(n/2+1) / (Gamma(v) v^(n/2)) * sigma_w^n,
// or Gamma(n/2+1) sigma_w^n in the Gaussian limit.
double abs_moment_h0(double n, const McLeishNoise& noise);

}  // namespace ged
