#include "ged/monte_carlo.hpp"

#include <cmath>
#include <future>
#include <limits>
#include <sstream>
#include <thread>

#include "ged/errors.hpp"
#include "ged/random.hpp"

namespace ged {

namespace {

inline double abs_pow(double norm_sq, double p) {
  if (p == 2.0) return norm_sq;
  if (p == 1.0) return std::sqrt(norm_sq);
  return std::pow(norm_sq, 0.5 * p);
}

// One noise-only statistic: T = sum |w|^p over N fresh draws. Draw order
// per sample is fixed (G, then the two Gaussian components) and is part of
// the reproducibility contract.
double h0_statistic(Rng& rng, const DetectorConfig& cfg, const McLeishNoise& noise) {
  const double v = noise.capped_v();
  const double p = cfg.exponent;
  double t = 0.0;
  for (std::size_t u = 0; u < cfg.samples; ++u) {
    const double g = noise.gaussian_limit ? 1.0 : rng.gamma(v) / v;
    const auto w = rng.complex_normal(noise.variance);
    t += abs_pow(g * std::norm(w), p);
  }
  return t;
}

// y = h s + w per sample; h then w within a sample.
double h1_statistic_physical(Rng& rng, const DetectorConfig& cfg, double snr,
                             const RicianChannel& ch, const McLeishNoise& noise) {
  const double v = noise.capped_v();
  const double p = cfg.exponent;
  const double s = std::sqrt(snr * noise.variance);
  const double mr = ch.los_amplitude * std::cos(ch.los_phase);
  const double mi = ch.los_amplitude * std::sin(ch.los_phase);
  const double hc = std::sqrt(ch.scatter_variance / 2.0);
  double t = 0.0;
  for (std::size_t u = 0; u < cfg.samples; ++u) {
    const double hr = mr + hc * rng.normal();
    const double hi = mi + hc * rng.normal();
    const double g = noise.gaussian_limit ? 1.0 : rng.gamma(v) / v;
    const auto w = std::sqrt(g) * rng.complex_normal(noise.variance);
    const double yr = hr * s + w.real();
    const double yi = hi * s + w.imag();
    t += abs_pow(yr * yr + yi * yi, p);
  }
  return t;
}

// y = sqrt(s^2 sigma_h^2 + G sigma_w^2) z0 per sample; G then z0.
double h1_statistic_effective(Rng& rng, const DetectorConfig& cfg, double snr,
                              const RicianChannel& ch, const McLeishNoise& noise) {
  const double v = noise.capped_v();
  const double p = cfg.exponent;
  const double s2 = snr * noise.variance;
  const double A = s2 * ch.scatter_variance;
  const double B = noise.variance;
  const double a2 = ch.los_amplitude * ch.los_amplitude;
  const double zr0 = ch.los_amplitude * std::cos(ch.los_phase) / std::sqrt(1.0 + a2);
  const double zi0 = ch.los_amplitude * std::sin(ch.los_phase) / std::sqrt(1.0 + a2);
  const double zc = std::sqrt(0.5 / (1.0 + a2));
  double t = 0.0;
  for (std::size_t u = 0; u < cfg.samples; ++u) {
    const double g = noise.gaussian_limit ? 1.0 : rng.gamma(v) / v;
    const double scale2 = A + g * B;
    const double zr = zr0 + zc * rng.normal();
    const double zi = zi0 + zc * rng.normal();
    t += abs_pow(scale2 * (zr * zr + zi * zi), p);
  }
  return t;
}

// Counts trials whose statistic exceeds lambda. Trial i always runs on the
// sub-stream derive_seed(seed, i), so the count is independent of the
// thread partition.
template <class TrialFn>
std::size_t count_exceedances(std::size_t trials, std::uint64_t seed, double lambda,
                              unsigned threads, const TrialFn& trial) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  auto run_range = [&](std::size_t lo, std::size_t hi) {
    std::size_t c = 0;
    for (std::size_t i = lo; i < hi; ++i) {
      Rng rng(derive_seed(seed, i));
      if (trial(rng) > lambda) ++c;
    }
    return c;
  };
  if (threads <= 1 || trials < 256) return run_range(0, trials);
  const std::size_t chunk = (trials + threads - 1) / threads;
  std::vector<std::future<std::size_t>> parts;
  for (std::size_t lo = 0; lo < trials; lo += chunk) {
    const std::size_t hi = std::min(lo + chunk, trials);
    parts.push_back(std::async(std::launch::async, run_range, lo, hi));
  }
  std::size_t total = 0;
  for (auto& f : parts) total += f.get();
  return total;
}

Estimate to_estimate(std::size_t count, std::size_t trials) {
  const double p = static_cast<double>(count) / static_cast<double>(trials);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(trials))};
}

}  // namespace

Estimate estimate_pf(const DetectorConfig& cfg, const McLeishNoise& noise,
                     double lambda, std::size_t trials, std::uint64_t seed,
                     unsigned threads) {
  if (trials < 100) throw domain_error("estimate_pf: need at least 100 trials");
  const std::size_t c = count_exceedances(
      trials, seed, lambda, threads,
      [&](Rng& rng) { return h0_statistic(rng, cfg, noise); });
  return to_estimate(c, trials);
}

Estimate estimate_pd(const DetectorConfig& cfg, double snr,
                     const RicianChannel& channel, const McLeishNoise& noise,
                     double lambda, std::size_t trials, std::uint64_t seed,
                     H1Model model, unsigned threads) {
  if (trials < 100) throw domain_error("estimate_pd: need at least 100 trials");
  if (!(snr >= 0.0)) throw domain_error("estimate_pd: snr must be nonnegative");
  auto trial = [&](Rng& rng) {
    return model == H1Model::physical
               ? h1_statistic_physical(rng, cfg, snr, channel, noise)
               : h1_statistic_effective(rng, cfg, snr, channel, noise);
  };
  const std::size_t c = count_exceedances(trials, seed, lambda, threads, trial);
  return to_estimate(c, trials);
}

namespace {

struct OperatingPoint {
  DetectorConfig cfg;
  McLeishNoise sim_noise;
  double sim_snr;
  double lambda;
};

// Resolves the CFAR operating point, applying the worst-case uncertainty
// policy identically to the analytic and simulated sides: inflated noise
// power everywhere, absolute signal power held nominal.
OperatingPoint resolve_point(const DetectorConfig& cfg, const McLeishNoise& noise,
                             double snr) {
  if (noise.uncertainty_db > 0.0) {
    const McLeishNoise wc = worst_case(noise);
    return {cfg, wc, snr / noise.uncertainty_factor(), threshold(cfg, wc)};
  }
  return {cfg, noise, snr, threshold(cfg, noise)};
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

}  // namespace

SweepResult sweep(SweepKind kind, std::span<const double> grid,
                  const DetectorConfig& cfg, double snr_db,
                  const RicianChannel& channel, const McLeishNoise& noise,
                  std::size_t trials, std::uint64_t seed, H1Model model,
                  std::size_t mc_stride, unsigned threads) {
  if (grid.empty()) throw domain_error("sweep: grid is empty");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] >= grid[i - 1])) throw domain_error("sweep: grid must be sorted");
  if (mc_stride < 1) mc_stride = 1;

  SweepResult out;
  switch (kind) {
    case SweepKind::roc: out.abscissa_name = "target_pf"; break;
    case SweepKind::pd_vs_snr: out.abscissa_name = "snr_db"; break;
    case SweepKind::pd_vs_p: out.abscissa_name = "p"; break;
  }
  const double nan = std::numeric_limits<double>::quiet_NaN();
  out.rows.reserve(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid[i];
    DetectorConfig point_cfg = cfg;
    double point_snr_db = snr_db;
    switch (kind) {
      case SweepKind::roc:
        point_cfg = DetectorConfig(cfg.exponent, cfg.samples, x);
        break;
      case SweepKind::pd_vs_snr:
        point_snr_db = x;
        break;
      case SweepKind::pd_vs_p:
        point_cfg = DetectorConfig(x, cfg.samples, cfg.target_pf);
        break;
    }
    const double snr = std::pow(10.0, point_snr_db / 10.0);
    const OperatingPoint op = resolve_point(point_cfg, noise, snr);
    const double analytic =
        detection_prob(op.lambda, op.cfg, op.sim_snr, channel, op.sim_noise);
    double empirical = nan, std_error = nan;
    if (trials > 0 && i % mc_stride == 0) {
      const Estimate est =
          estimate_pd(op.cfg, op.sim_snr, channel, op.sim_noise, op.lambda, trials,
                      derive_seed(seed, 0x53574545u + i), model, threads);
      empirical = est.value;
      std_error = est.std_error;
    }
    out.rows.push_back({x, analytic, empirical, std_error});
  }

  out.metadata["kind"] = out.abscissa_name;
  out.metadata["p"] = fmt(cfg.exponent);
  out.metadata["n_samples"] = std::to_string(cfg.samples);
  out.metadata["target_pf"] = fmt(cfg.target_pf);
  out.metadata["snr_db"] = fmt(snr_db);
  out.metadata["noise_variance"] = fmt(noise.variance);
  out.metadata["noise_v"] = noise.gaussian_limit ? "inf" : fmt(noise.non_gaussianity);
  out.metadata["rho_db"] = fmt(noise.uncertainty_db);
  out.metadata["alpha"] = fmt(channel.los_amplitude);
  out.metadata["theta"] = fmt(channel.los_phase);
  out.metadata["scatter_variance"] = fmt(channel.scatter_variance);
  out.metadata["k_factor"] = fmt(channel.k_factor());
  out.metadata["trials"] = std::to_string(trials);
  out.metadata["seed"] = std::to_string(seed);
  out.metadata["mc_stride"] = std::to_string(mc_stride);
  out.metadata["model"] = (model == H1Model::physical) ? "physical" : "effective";
  // The abscissa varies per row; a fixed entry for it would contradict the
  // x column, so the record keeps only the parameters that actually held.
  out.metadata.erase(out.abscissa_name);
  return out;
}

}  // namespace ged
