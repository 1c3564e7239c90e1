#include "ged/mcleish.hpp"

#include <cmath>
#include <limits>

#include "ged/errors.hpp"
#include "ged/special_functions.hpp"

namespace ged {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kEulerGamma = 0.577215664901532860606512090082402431;
}  // namespace

McLeishNoise::McLeishNoise(double variance_, double non_gaussianity_, double uncertainty_db_)
    : variance(variance_),
      non_gaussianity(non_gaussianity_),
      uncertainty_db(uncertainty_db_),
      gaussian_limit(false) {
  if (!(variance > 0.0)) throw domain_error("McLeishNoise: variance must be positive");
  if (!(non_gaussianity > 0.0))
    throw domain_error("McLeishNoise: non-Gaussianity must be positive");
  if (!(uncertainty_db >= 0.0))
    throw domain_error("McLeishNoise: uncertainty_db must be nonnegative");
}

McLeishNoise McLeishNoise::gaussian(double variance_, double uncertainty_db_) {
  McLeishNoise n(variance_, kMaxV, uncertainty_db_);
  n.gaussian_limit = true;
  return n;
}

double McLeishNoise::capped_v() const { return std::min(non_gaussianity, kMaxV); }

double McLeishNoise::uncertainty_factor() const {
  return std::pow(10.0, uncertainty_db / 10.0);
}

McLeishNoise worst_case(const McLeishNoise& noise) {
  McLeishNoise out = noise;
  out.variance *= noise.uncertainty_factor();
  out.uncertainty_db = 0.0;
  return out;
}

namespace {

// ln K_nu(z) for z -> 0 (leading term; relative error O(z^2) at z <= 1e-6).
double ln_bessel_k_small_arg(double nu, double z) {
  if (nu > 1e-8)
    return std::log(0.5) + ln_gamma(nu) + nu * std::log(2.0 / z);
  return std::log(-std::log(0.5 * z) - kEulerGamma);
}

}  // namespace

double mcleish_pdf(double w_abs, const McLeishNoise& noise) {
  if (!(w_abs >= 0.0)) throw domain_error("mcleish_pdf: |w| must be nonnegative");
  const double s2 = noise.variance;
  if (noise.gaussian_limit) return std::exp(-w_abs * w_abs / s2) / (kPi * s2);
  const double v = noise.capped_v();
  if (w_abs == 0.0) {
    if (v <= 1.0) return std::numeric_limits<double>::infinity();
    return v / (kPi * (v - 1.0) * s2);
  }
  if (v <= 51.0) {
    // Closed form from the Gamma-Gaussian mixture, assembled in log space:
    // 2 v^{(v+1)/2} r^{v-1} / (pi Gamma(v) sigma^{v+1}) K_{v-1}(2 sqrt(v) r / sigma)
    const double sigma = std::sqrt(s2);
    const double arg = 2.0 * std::sqrt(v) * w_abs / sigma;
    double ln_k;
    if (arg < 1e-6) {
      ln_k = ln_bessel_k_small_arg(std::abs(v - 1.0), arg);
    } else {
      const double ks = bessel_k_scaled(v - 1.0, arg);
      ln_k = std::log(ks) - arg;
    }
    const double ln_f = std::log(2.0) + 0.5 * (v + 1.0) * std::log(v) +
                        (v - 1.0) * std::log(w_abs) - std::log(kPi) - ln_gamma(v) -
                        (v + 1.0) * std::log(sigma) + ln_k;
    return std::exp(ln_f);
  }
  // Large v: evaluate the defining mixture directly; the conditional
  // Gaussian density is a smooth function of the mixing variable there.
  const double r2 = w_abs * w_abs;
  return gamma_expectation(
      [&](double g) { return std::exp(-r2 / (g * s2)) / (kPi * g * s2); }, v);
}

void fill_mcleish(Rng& rng, const McLeishNoise& noise,
                  std::span<std::complex<double>> out) {
  const double v = noise.capped_v();
  for (auto& w : out) {
    const double g = noise.gaussian_limit ? 1.0 : rng.gamma(v) / v;
    w = std::sqrt(g) * rng.complex_normal(noise.variance);
  }
}

std::vector<std::complex<double>> sample_mcleish(const McLeishNoise& noise,
                                                 std::size_t count,
                                                 std::uint64_t seed) {
  if (count < 1) throw domain_error("sample_mcleish: count must be >= 1");
  std::vector<std::complex<double>> out(count);
  Rng rng(seed);
  fill_mcleish(rng, noise, out);
  return out;
}

double abs_moment_h0(double n, const McLeishNoise& noise) {
  if (!(n > -2.0)) throw domain_error("abs_moment_h0: moment order must exceed -2");
  const double half_log_power = 0.5 * n * std::log(noise.variance);
  if (noise.gaussian_limit)
    return std::exp(ln_gamma(0.5 * n + 1.0) + half_log_power);
  const double v = noise.capped_v();
  if (!(0.5 * n + v > 0.0))
    throw domain_error("abs_moment_h0: moment diverges for this non-Gaussianity");
  return std::exp(detail::ln_gamma_ratio(v, 0.5 * n) + ln_gamma(0.5 * n + 1.0) -
                  0.5 * n * std::log(v) + half_log_power);
}

}  // namespace ged
