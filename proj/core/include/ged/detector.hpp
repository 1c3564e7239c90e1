#pragma once

#include <complex>
#include <cstddef>
#include <span>

#include "ged/mcleish.hpp"
#include "ged/rician.hpp"

namespace ged {

// Operating point of the p-norm detector T = sum |y[u]|^p compared against
// a threshold. p = 2 is the classical energy detector, p = 1 the absolute
// value detector, 0 < p < 2 the fractional low-order detector.
struct DetectorConfig {
  double exponent;     // p in (0, kMaxExponent]
  std::size_t samples; // N >= 1
  double target_pf;    // desired false-alarm probability, in (0, 1)

  static constexpr double kMaxExponent = 8.0;

  DetectorConfig(double exponent, std::size_t samples, double target_pf);

  // The Gaussian approximation of T is unquantified for small N; flag it.
  bool clt_warning() const { return samples < 64; }
};

// Per-sample mean and variance of |y|^p under one hypothesis; with N
// samples, T is approximately Normal(N * mean, N * variance).
struct GaussianApprox {
  double mean;
  double variance;
};

double test_statistic(std::span<const std::complex<double>> samples, double p);

// Moments of |y|^p with noise only: mean = E|w|^p, variance = E|w|^2p - mean^2.
GaussianApprox h0_approx(const DetectorConfig& cfg, const McLeishNoise& noise);

// Threshold holding the false-alarm probability at cfg.target_pf:
// lambda = Qinv(target_pf) sqrt(N var0) + N mean0.
double threshold(const DetectorConfig& cfg, const McLeishNoise& noise);

double false_alarm_prob(double lambda, const DetectorConfig& cfg,
                        const McLeishNoise& noise);

// E|y|^n under signal presence, snr = s^2/sigma_w^2 (linear, >= 0):
// unit_rice_abs_moment(n, alpha) * E_G[(s^2 sigma_h^2 + G sigma_w^2)^(n/2)].
// Positive even integer n uses the exact binomial expansion (and the
// quadrature path must agree with it); snr = 0 returns the noise-only moment.
double abs_moment_h1(double n, double snr, const RicianChannel& channel,
                     const McLeishNoise& noise);

GaussianApprox h1_approx(const DetectorConfig& cfg, double snr,
                         const RicianChannel& channel, const McLeishNoise& noise);

double detection_prob(double lambda_star, const DetectorConfig& cfg, double snr,
                      const RicianChannel& channel, const McLeishNoise& noise);

// Threshold inflated for worst-case noise power over-estimation:
// lambda * rho^(p/2) with rho = 10^(rho_db/10). Equals the threshold
// recomputed from scratch under the inflated variance.
double worst_case_threshold(double lambda_star, double p, double rho_db);

// Detection probability at the CFAR operating point defined by cfg.target_pf.
// With noise.uncertainty_db > 0 the worst case is evaluated: the threshold
// and both hypotheses use the inflated variance while the absolute signal
// power s^2 = snr * variance is held at its nominal value.
double cfar_detection_prob(const DetectorConfig& cfg, double snr,
                           const RicianChannel& channel, const McLeishNoise& noise);

struct OptimizeResult {
  double p_star;
  double pd_star;
};

// Line search for the exponent maximizing cfar_detection_prob at fixed N and
// target_pf: grid scan with the given step, then golden-section refinement.
// Each candidate p gets its own CFAR threshold. Ties go to the smaller p.
OptimizeResult optimize_p(double p_min, double p_max, std::size_t samples,
                          double target_pf, double snr,
                          const RicianChannel& channel, const McLeishNoise& noise,
                          double grid_step = 0.05);

}  // namespace ged
