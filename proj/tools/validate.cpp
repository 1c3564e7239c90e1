#include "validate.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>

#include "ged/detector.hpp"
#include "ged/monte_carlo.hpp"
#include "ged/random.hpp"
#include "ged/special_functions.hpp"

namespace ged::cli {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

std::string fmt(const char* pattern, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), pattern, a, b);
  return buf;
}

// Plain adaptive Simpson, independent of the quadrature used by the library.
double simpson(const std::function<double(double)>& f, double a, double b) {
  const double m = 0.5 * (a + b);
  return (b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b));
}

double adaptive(const std::function<double(double)>& f, double a, double b,
                double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double left = simpson(f, a, m);
  const double right = simpson(f, m, b);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive(f, a, m, left, 0.5 * tol, depth - 1) +
         adaptive(f, m, b, right, 0.5 * tol, depth - 1);
}

double integrate_to_inf(const std::function<double(double)>& f, double a,
                        double tol) {
  double total = 0.0, lo = a, width = 1.0;
  for (int block = 0; block < 120; ++block) {
    const double part = adaptive(f, lo, lo + width, simpson(f, lo, lo + width), tol, 44);
    total += part;
    if (block > 2 && std::abs(part) < tol * std::max(1.0, std::abs(total))) break;
    lo += width;
    width *= 1.5;
  }
  return total;
}

struct Welford {
  double mean = 0.0, m2 = 0.0;
  std::size_t count = 0;
  void add(double x) {
    ++count;
    const double d = x - mean;
    mean += d / static_cast<double>(count);
    m2 += d * (x - mean);
  }
  double std_error() const {
    return std::sqrt(m2 / static_cast<double>(count - 1) /
                     static_cast<double>(count));
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

CheckResult check_moment_identities() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (const double v : {0.25, 1.0, 4.0, 64.0})
    for (const double s2 : {0.5, 1.0, 2.0})
      worst = std::max(worst, rel_err(abs_moment_h0(2.0, McLeishNoise(s2, v)), s2));
  for (const double a : {0.0, 1.0, 3.0, 10.0})
    worst = std::max(worst, rel_err(unit_rice_abs_moment(2.0, a), 1.0));
  return {"moment-identities", worst < 1e-12,
          fmt("max rel err %.2e (tol 1e-12), %.1f s", worst, seconds_since(t0))};
}

// One effective-model received sample |y|^n with A = B = 1 (unit snr, unit
// noise power, unit scatter).
double draw_abs_moment(Rng& rng, double n, double v, double alpha,
                       bool gaussian_limit) {
  const double a2 = alpha * alpha;
  const double zr0 = alpha / std::sqrt(1.0 + a2);
  const double zc = std::sqrt(0.5 / (1.0 + a2));
  const double g = gaussian_limit ? 1.0 : rng.gamma(v) / v;
  const double zr = zr0 + zc * rng.normal();
  const double zi = zc * rng.normal();
  return std::pow((1.0 + g) * (zr * zr + zi * zi), 0.5 * n);
}

CheckResult check_signal_moments(bool quick, std::size_t draws) {
  const auto t0 = Clock::now();
  double worst_even = 0.0, worst_lap = 0.0, worst_z = 0.0;
  std::uint64_t cell = 0;
  bool mc_ok = true;

  for (const double n : {2.0, 4.0, 6.0}) {
    for (const double v : {0.5, 1.0, 5.0}) {
      for (const double alpha : {0.0, 1.0, 3.0}) {
        const RicianChannel ch(alpha, 0.0, 1.0);
        const McLeishNoise noise(1.0, v);
        const double closed = abs_moment_h1(n, 1.0, ch, noise);
        const double quad =
            unit_rice_abs_moment(n, alpha) *
            gamma_expectation([n](double g) { return std::pow(1.0 + g, 0.5 * n); }, v);
        worst_even = std::max(worst_even, rel_err(closed, quad));

        Welford w;
        Rng rng(derive_seed(0xC0FFEEull, cell++));
        for (std::size_t i = 0; i < draws; ++i)
          w.add(draw_abs_moment(rng, n, v, alpha, false));
        const double z = std::abs(w.mean - closed) / w.std_error();
        worst_z = std::max(worst_z, z);
        mc_ok = mc_ok && (z <= 4.0);
      }
    }
  }

  // v = 1: the quadrature path must match the exponential-mixture closed
  // form B^{n/2} e^{A/B} Gamma(n/2+1, A/B) at fractional orders.
  for (const double n : {0.5, 1.0, 3.0}) {
    for (const double alpha : {0.0, 1.0, 3.0}) {
      const RicianChannel ch(alpha, 0.0, 1.0);
      const McLeishNoise noise(1.0, 1.0);
      const double through_lib = abs_moment_h1(n, 1.0, ch, noise);
      const double lap = unit_rice_abs_moment(n, alpha) *
                         upper_incomplete_gamma_scaled(0.5 * n + 1.0, 1.0);
      worst_lap = std::max(worst_lap, rel_err(through_lib, lap));

      Welford w;
      Rng rng(derive_seed(0xC0FFEEull, cell++));
      for (std::size_t i = 0; i < draws; ++i)
        w.add(draw_abs_moment(rng, n, 1.0, alpha, false));
      const double z = std::abs(w.mean - through_lib) / w.std_error();
      worst_z = std::max(worst_z, z);
      mc_ok = mc_ok && (z <= 4.0);
    }
  }

  const bool pass = worst_even < 1e-6 && worst_lap < 1e-6 && mc_ok;
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "even rel %.2e, exp-mixture rel %.2e (tol 1e-6), max |z| %.2f "
                "(%zu draws%s), %.1f s",
                worst_even, worst_lap, worst_z, draws, quick ? ", quick" : "",
                seconds_since(t0));
  return {"signal-moment-consistency", pass, buf};
}

CheckResult check_cfar_calibration(bool quick, unsigned threads) {
  const auto t0 = Clock::now();
  const std::size_t trials = quick ? 10000 : 100000;
  const std::vector<double> ps = quick ? std::vector<double>{1.0, 2.0}
                                       : std::vector<double>{0.1, 1.0, 2.0};
  const std::vector<double> pfs =
      quick ? std::vector<double>{0.1} : std::vector<double>{0.01, 0.1};
  std::vector<McLeishNoise> noises;
  if (!quick) noises.push_back(McLeishNoise(1.0, 0.5));
  noises.push_back(McLeishNoise(1.0, 1.0));
  noises.push_back(McLeishNoise::gaussian(1.0));

  bool ok = true;
  double worst_excess = -1e9;
  std::uint64_t seed = 0;
  for (const double p : ps) {
    for (const auto& noise : noises) {
      for (const double pf : pfs) {
        const DetectorConfig cfg(p, 1024, pf);
        const Estimate e = estimate_pf(cfg, noise, threshold(cfg, noise), trials,
                                       derive_seed(0xFA1Aull, seed++), threads);
        const double tol = std::max(0.01, 4.0 * e.std_error);
        const double excess = std::abs(e.value - pf) - tol;
        worst_excess = std::max(worst_excess, excess);
        ok = ok && (excess <= 0.0);
      }
    }
  }
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "worst |empirical-target|-tol %+.4f (%zu trials%s), %.1f s",
                worst_excess, trials, quick ? ", quick" : "", seconds_since(t0));
  return {"cfar-calibration", ok, buf};
}

CheckResult check_detection_fidelity(bool quick, unsigned threads) {
  const auto t0 = Clock::now();
  const std::size_t trials = quick ? 2000 : 10000;
  const double tol = quick ? 0.05 : 0.02;
  // Quick mode keeps the -10 dB column: at -5 dB and above every cell
  // saturates near Pd = 1 and the comparison loses its power to fail.
  const std::vector<double> snrs_db =
      quick ? std::vector<double>{-10.0} : std::vector<double>{-10.0, -5.0, 0.0};
  const RicianChannel rayleigh = RicianChannel::from_k_factor(0.0);
  std::vector<McLeishNoise> noises = {McLeishNoise(1.0, 1.0),
                                      McLeishNoise::gaussian(1.0)};
  bool ok = true;
  double worst = 0.0;
  std::uint64_t seed = 0;
  for (const double snr_db : snrs_db) {
    const double snr = std::pow(10.0, snr_db / 10.0);
    for (const double p : {1.0, 2.0}) {
      for (const auto& noise : noises) {
        const DetectorConfig cfg(p, 1024, 0.1);
        const double lam = threshold(cfg, noise);
        const double analytic = detection_prob(lam, cfg, snr, rayleigh, noise);
        const Estimate e =
            estimate_pd(cfg, snr, rayleigh, noise, lam, trials,
                        derive_seed(0xDE7EC7ull, seed++), H1Model::physical, threads);
        worst = std::max(worst, std::abs(e.value - analytic));
        ok = ok && (std::abs(e.value - analytic) <= tol);
      }
    }
  }
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "max |analytic-empirical| %.4f (tol %.2f, %zu trials%s), %.1f s",
                worst, tol, trials, quick ? ", quick" : "", seconds_since(t0));
  return {"detection-fidelity", ok, buf};
}

CheckResult check_threshold_scaling() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (const double p : {0.1, 1.0, 2.0}) {
    for (const double rho_db : {0.1, 1.0, 3.0}) {
      const DetectorConfig cfg(p, 1024, 0.1);
      for (const bool gaussian : {false, true}) {
        const McLeishNoise noise = gaussian ? McLeishNoise::gaussian(1.3, rho_db)
                                            : McLeishNoise(1.3, 1.0, rho_db);
        const double lam = threshold(cfg, noise);
        worst = std::max(worst, rel_err(worst_case_threshold(lam, p, rho_db),
                                        threshold(cfg, worst_case(noise))));
      }
    }
  }
  return {"threshold-scaling", worst < 1e-12,
          fmt("max rel err %.2e (tol 1e-12), %.1f s", worst, seconds_since(t0))};
}

CheckResult check_noise_density(bool quick) {
  const auto t0 = Clock::now();
  const std::vector<double> vs =
      quick ? std::vector<double>{0.5, 8.0} : std::vector<double>{0.5, 1.0, 2.0, 8.0};
  const int radii = quick ? 8 : 20;
  double worst_norm = 0.0, worst_pdf = 0.0;
  for (const double v : vs) {
    const McLeishNoise noise(1.0, v);
    const double mass = 2.0 * kPi *
                        integrate_to_inf(
                            [&](double r) {
                              return r > 0.0 ? r * mcleish_pdf(r, noise) : 0.0;
                            },
                            0.0, 1e-10);
    worst_norm = std::max(worst_norm, std::abs(mass - 1.0));
    for (int i = 1; i <= radii; ++i) {
      const double r = 4.0 * i / radii;
      // Mixture oracle: average the conditional Gaussian density over the
      // mixing variable (never the code path the closed form takes).
      const double oracle = gamma_expectation(
          [&](double g) { return std::exp(-r * r / g) / (kPi * g); }, v);
      worst_pdf = std::max(worst_pdf, rel_err(mcleish_pdf(r, noise), oracle));
    }
  }
  const bool pass = worst_norm < 1e-6 && worst_pdf < 1e-8;
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "normalization abs %.2e (tol 1e-6), oracle rel %.2e (tol 1e-8)%s, "
                "%.1f s",
                worst_norm, worst_pdf, quick ? ", quick" : "", seconds_since(t0));
  return {"noise-density", pass, buf};
}

}  // namespace

std::vector<CheckResult> run_validation(bool quick, unsigned threads) {
  std::vector<CheckResult> out;
  out.push_back(check_moment_identities());
  out.push_back(check_signal_moments(quick, quick ? 100000 : 1000000));
  out.push_back(check_cfar_calibration(quick, threads));
  out.push_back(check_detection_fidelity(quick, threads));
  out.push_back(check_threshold_scaling());
  out.push_back(check_noise_density(quick));
  return out;
}

}  // namespace ged::cli
