#include "ged/detector.hpp"

#include <cmath>
#include <functional>
#include <vector>

#include "ged/errors.hpp"
#include "ged/special_functions.hpp"

namespace ged {

DetectorConfig::DetectorConfig(double exponent_, std::size_t samples_, double target_pf_)
    : exponent(exponent_), samples(samples_), target_pf(target_pf_) {
  if (!(exponent > 0.0) || !(exponent <= kMaxExponent))
    throw domain_error("DetectorConfig: exponent must lie in (0, 8]");
  if (samples < 1) throw domain_error("DetectorConfig: sample count must be >= 1");
  if (!(target_pf > 0.0) || !(target_pf < 1.0))
    throw domain_error("DetectorConfig: target_pf must lie in (0, 1)");
}

namespace {

// |z|^p from |z|^2; the p = 2 and p = 1 cases dominate simulation time.
inline double abs_pow(double norm_sq, double p) {
  if (p == 2.0) return norm_sq;
  if (p == 1.0) return std::sqrt(norm_sq);
  return std::pow(norm_sq, 0.5 * p);
}

}  // namespace

double test_statistic(std::span<const std::complex<double>> samples, double p) {
  if (samples.empty()) throw domain_error("test_statistic: sample list is empty");
  if (!(p > 0.0)) throw domain_error("test_statistic: exponent must be positive");
  double t = 0.0;
  for (const auto& y : samples) t += abs_pow(std::norm(y), p);
  return t;
}

GaussianApprox h0_approx(const DetectorConfig& cfg, const McLeishNoise& noise) {
  const double m = abs_moment_h0(cfg.exponent, noise);
  const double m2 = abs_moment_h0(2.0 * cfg.exponent, noise);
  const double var = m2 - m * m;
  if (!(var > 0.0))
    throw numeric_failure("h0_approx: nonpositive variance", m, m2);
  return {m, var};
}

double threshold(const DetectorConfig& cfg, const McLeishNoise& noise) {
  const GaussianApprox a = h0_approx(cfg, noise);
  const double n = static_cast<double>(cfg.samples);
  return inverse_gaussian_q(cfg.target_pf) * std::sqrt(n * a.variance) + n * a.mean;
}

double false_alarm_prob(double lambda, const DetectorConfig& cfg,
                        const McLeishNoise& noise) {
  const GaussianApprox a = h0_approx(cfg, noise);
  const double n = static_cast<double>(cfg.samples);
  return gaussian_q((lambda - n * a.mean) / std::sqrt(n * a.variance));
}

namespace {

bool is_positive_even_integer(double n) {
  const double r = std::round(n);
  return std::abs(n - r) <= 1e-9 && r >= 2.0 &&
         std::fmod(r, 2.0) == 0.0;
}

// E_G[(A + g B)^{n/2}], G ~ Gamma(v, rate v), by the exact binomial sum for
// even n: sum_k C(m,k) A^{m-k} B^k E[G^k], E[G^k] = prod_{j<k} (v+j)/v.
double even_moment_sum(int m, double A, double B, double v, bool gaussian_limit) {
  double sum = 0.0;
  double binom = 1.0;       // C(m, k)
  double apow = std::pow(A, m);
  double gk = 1.0;          // E[G^k]
  double bpow = 1.0;        // B^k
  for (int k = 0; k <= m; ++k) {
    sum += binom * apow * bpow * gk;
    if (k == m) break;
    binom *= static_cast<double>(m - k) / (k + 1);
    apow = (A == 0.0) ? ((m - k - 1) == 0 ? 1.0 : 0.0) : apow / A;
    bpow *= B;
    if (!gaussian_limit) gk *= (v + k) / v;
  }
  return sum;
}

double signal_mixture_moment(double n, double A, double B, const McLeishNoise& noise,
                             bool force_refined) {
  if (noise.gaussian_limit) return std::pow(A + B, 0.5 * n);
  const double v = noise.capped_v();
  if (is_positive_even_integer(n))
    return even_moment_sum(static_cast<int>(std::round(n)) / 2, A, B, v, false);
  const std::function<double(double)> f = [A, B, n](double g) {
    return std::pow(A + g * B, 0.5 * n);
  };
  return force_refined ? detail::gamma_expectation_refined(f, v)
                       : gamma_expectation(f, v);
}

double abs_moment_h1_impl(double n, double snr, const RicianChannel& channel,
                          const McLeishNoise& noise, bool force_refined) {
  if (!(n > -2.0)) throw domain_error("abs_moment_h1: moment order must exceed -2");
  if (!(snr >= 0.0)) throw domain_error("abs_moment_h1: snr must be nonnegative");
  if (snr == 0.0) return abs_moment_h0(n, noise);
  const double s2 = snr * noise.variance;
  const double A = s2 * channel.scatter_variance;
  const double B = noise.variance;
  return unit_rice_abs_moment(n, channel.los_amplitude) *
         signal_mixture_moment(n, A, B, noise, force_refined);
}

}  // namespace

double abs_moment_h1(double n, double snr, const RicianChannel& channel,
                     const McLeishNoise& noise) {
  return abs_moment_h1_impl(n, snr, channel, noise, false);
}

GaussianApprox h1_approx(const DetectorConfig& cfg, double snr,
                         const RicianChannel& channel, const McLeishNoise& noise) {
  double m = abs_moment_h1(cfg.exponent, snr, channel, noise);
  double m2 = abs_moment_h1(2.0 * cfg.exponent, snr, channel, noise);
  double var = m2 - m * m;
  if (!(var > 0.0)) {
    // One refinement retry: the variance is a difference of near-equal
    // moments at small snr, and the fixed rules may not carry 16 digits.
    m = abs_moment_h1_impl(cfg.exponent, snr, channel, noise, true);
    m2 = abs_moment_h1_impl(2.0 * cfg.exponent, snr, channel, noise, true);
    var = m2 - m * m;
    if (!(var > 0.0))
      throw numeric_failure("h1_approx: nonpositive variance after refinement", m, m2);
  }
  return {m, var};
}

double detection_prob(double lambda_star, const DetectorConfig& cfg, double snr,
                      const RicianChannel& channel, const McLeishNoise& noise) {
  const GaussianApprox a = h1_approx(cfg, snr, channel, noise);
  const double n = static_cast<double>(cfg.samples);
  return gaussian_q((lambda_star - n * a.mean) / std::sqrt(n * a.variance));
}

double worst_case_threshold(double lambda_star, double p, double rho_db) {
  if (!(lambda_star > 0.0))
    throw domain_error("worst_case_threshold: threshold must be positive");
  if (!(p > 0.0)) throw domain_error("worst_case_threshold: exponent must be positive");
  if (!(rho_db >= 0.0))
    throw domain_error("worst_case_threshold: rho_db must be nonnegative");
  return lambda_star * std::pow(10.0, rho_db * p / 20.0);
}

double cfar_detection_prob(const DetectorConfig& cfg, double snr,
                           const RicianChannel& channel, const McLeishNoise& noise) {
  if (noise.uncertainty_db > 0.0) {
    // Worst case: the threshold guards the inflated noise power while the
    // absolute signal power snr * variance is what it nominally was.
    const McLeishNoise wc = worst_case(noise);
    const double snr_wc = snr / noise.uncertainty_factor();
    return detection_prob(threshold(cfg, wc), cfg, snr_wc, channel, wc);
  }
  return detection_prob(threshold(cfg, noise), cfg, snr, channel, noise);
}

OptimizeResult optimize_p(double p_min, double p_max, std::size_t samples,
                          double target_pf, double snr,
                          const RicianChannel& channel, const McLeishNoise& noise,
                          double grid_step) {
  if (!(p_min > 0.0) || !(p_min <= p_max) || !(p_max <= DetectorConfig::kMaxExponent))
    throw domain_error("optimize_p: need 0 < p_min <= p_max <= 8");
  if (!(grid_step > 0.0)) throw domain_error("optimize_p: grid step must be positive");
  const auto pd_at = [&](double p) {
    return cfar_detection_prob(DetectorConfig(p, samples, target_pf), snr, channel,
                               noise);
  };
  double best_p = p_min;
  double best_pd = pd_at(p_min);
  for (double p = p_min + grid_step; p < p_max + 0.5 * grid_step; p += grid_step) {
    const double pc = std::min(p, p_max);
    const double pd = pd_at(pc);
    if (pd > best_pd) {  // strict: ties stay with the smaller exponent
      best_pd = pd;
      best_p = pc;
    }
  }
  if (p_min == p_max) return {p_min, best_pd};
  // Golden-section refinement inside the bracketing grid cells.
  double lo = std::max(p_min, best_p - grid_step);
  double hi = std::min(p_max, best_p + grid_step);
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - gr * (hi - lo);
  double x2 = lo + gr * (hi - lo);
  double f1 = pd_at(x1), f2 = pd_at(x2);
  for (int i = 0; i < 80 && (hi - lo) > 1e-6; ++i) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = pd_at(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = pd_at(x1);
    }
  }
  const double p_ref = 0.5 * (lo + hi);
  const double pd_ref = pd_at(p_ref);
  if (pd_ref > best_pd) return {p_ref, pd_ref};
  return {best_p, best_pd};
}

}  // namespace ged
