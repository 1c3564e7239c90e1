#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "ged/detector.hpp"

namespace ged {

struct Estimate {
  double value;      // fraction of trials exceeding the threshold
  double std_error;  // sqrt(value (1-value) / trials)
};

// Which H1 generative model to simulate. They coincide exactly for
// alpha = 0; for alpha > 0 the closed-form analytics describe the
// effective model only.
enum class H1Model {
  physical,   // y = h s + w, fresh h and w every sample
  effective,  // y = sqrt(s^2 sigma_h^2 + G sigma_w^2) z0, fresh G and z0
};

// Empirical false-alarm probability over independent trials of N noise-only
// samples. Every trial runs on its own sub-stream derived from (seed, trial),
// so the result is identical under any parallel schedule. threads = 0 picks
// hardware concurrency.
Estimate estimate_pf(const DetectorConfig& cfg, const McLeishNoise& noise,
                     double lambda, std::size_t trials, std::uint64_t seed,
                     unsigned threads = 0);

// Empirical detection probability; same determinism contract.
Estimate estimate_pd(const DetectorConfig& cfg, double snr,
                     const RicianChannel& channel, const McLeishNoise& noise,
                     double lambda, std::size_t trials, std::uint64_t seed,
                     H1Model model, unsigned threads = 0);

enum class SweepKind {
  roc,        // x = target false-alarm probability, y = Pd at the CFAR threshold
  pd_vs_snr,  // x = SNR in dB
  pd_vs_p,    // x = exponent p, per-point CFAR threshold
};

struct SweepRow {
  double x;
  double analytic;
  double empirical;  // NaN when Monte Carlo was skipped for this row
  double std_error;
};

struct SweepResult {
  std::string abscissa_name;
  std::vector<SweepRow> rows;                    // sorted by x
  std::map<std::string, std::string> metadata;   // full parameter record + seed
};

// One figure curve: per grid point, the closed-form value and the Monte
// Carlo estimate under identical parameters. snr_db is the nominal SNR in
// dB (ignored by the abscissa being swept). trials = 0 skips Monte Carlo;
// mc_stride > 1 simulates every mc_stride-th grid point only (sparse
// validation marks), leaving NaN elsewhere. Uncertainty in `noise` applies
// the worst-case policy to analytic and empirical values alike.
SweepResult sweep(SweepKind kind, std::span<const double> grid,
                  const DetectorConfig& cfg, double snr_db,
                  const RicianChannel& channel, const McLeishNoise& noise,
                  std::size_t trials, std::uint64_t seed, H1Model model,
                  std::size_t mc_stride = 1, unsigned threads = 0);

}  // namespace ged
