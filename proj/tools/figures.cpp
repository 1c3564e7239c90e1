#include "figures.hpp"

#include <cmath>
#include <filesystem>
#include <stdexcept>

#include "ged/monte_carlo.hpp"
#include "output.hpp"

namespace ged::cli {

namespace {

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i)
    g[i] = lo + (hi - lo) * i / (n - 1);
  return g;
}

// 0.1 -> "0p1" for file names.
std::string tag(double x) {
  std::string s = fmt12(x);
  for (char& c : s)
    if (c == '.') c = 'p';
  return s;
}

struct Emitter {
  const FigureOptions& opt;
  std::vector<std::string> written;

  void emit(SweepResult r, const std::string& stem, const std::string& figure,
            const std::string& note) {
    r.metadata["figure"] = figure;
    if (!note.empty()) r.metadata["note"] = note;
    const std::string ext = opt.format == "json" ? ".json" : ".csv";
    const std::string path =
        (std::filesystem::path(opt.out_dir) / (stem + ext)).string();
    OutputTarget target(path);
    if (opt.format == "json")
      write_sweep_json(target.stream(), r);
    else
      write_sweep_csv(target.stream(), r);
    written.push_back(path);
  }
};

McLeishNoise make_noise(bool gaussian, double v, double rho_db) {
  return gaussian ? McLeishNoise::gaussian(1.0, rho_db)
                  : McLeishNoise(1.0, v, rho_db);
}

constexpr std::size_t kSamples = 1024;

std::vector<std::string> figure1(const FigureOptions& opt) {
  Emitter em{opt, {}};
  const RicianChannel rayleigh = RicianChannel::from_k_factor(0.0);
  const std::size_t roc_stride = opt.mc_stride ? opt.mc_stride : 2;
  const std::size_t snr_stride = opt.mc_stride ? opt.mc_stride : 3;

  // Operating characteristic, Laplacian-type vs Gaussian noise, at a fixed
  // SNR (the source figure does not state it; -13 dB keeps every curve off
  // its Pd = 1 ceiling, see the note field).
  const std::vector<double> pf_grid = linspace(0.01, 0.99, 25);
  const double roc_snr_db = -13.0;
  for (const bool gaussian : {false, true}) {
    for (const double p : {1.0, 2.0}) {
      const DetectorConfig cfg(p, kSamples, 0.1);
      SweepResult r = sweep(SweepKind::roc, pf_grid, cfg, roc_snr_db, rayleigh,
                            make_noise(gaussian, 1.0, 0.0), opt.trials, opt.seed,
                            H1Model::physical, roc_stride, opt.threads);
      em.emit(std::move(r),
              std::string("fig1_roc_") + (gaussian ? "awgn" : "awln") + "_p" + tag(p),
              "fig1", "snr_db assumed -13");
    }
  }

  // Impact of the non-Gaussianity parameter: detection vs SNR for light and
  // heavy tails at a low and the classical exponent.
  const std::vector<double> snr_grid = linspace(-20.0, 5.0, 26);
  for (const double v : {0.2, 1.0, 5.0}) {
    for (const double p : {0.5, 2.0}) {
      const DetectorConfig cfg(p, kSamples, opt.target_pf);
      SweepResult r = sweep(SweepKind::pd_vs_snr, snr_grid, cfg, 0.0, rayleigh,
                            make_noise(false, v, 0.0), opt.trials, opt.seed,
                            H1Model::physical, snr_stride, opt.threads);
      em.emit(std::move(r), "fig1_pdsnr_v" + tag(v) + "_p" + tag(p), "fig1", "");
    }
  }
  return em.written;
}

std::vector<std::string> figure2(const FigureOptions& opt) {
  Emitter em{opt, {}};
  const RicianChannel rayleigh = RicianChannel::from_k_factor(0.0);
  const std::size_t stride = opt.mc_stride ? opt.mc_stride : 3;
  const std::vector<double> snr_grid = linspace(-25.0, 10.0, 36);
  for (const bool gaussian : {false, true}) {
    for (const double p : {0.1, 1.0, 2.0}) {
      for (const double rho_db : {0.0, 0.1}) {
        const DetectorConfig cfg(p, kSamples, opt.target_pf);
        SweepResult r = sweep(SweepKind::pd_vs_snr, snr_grid, cfg, 0.0, rayleigh,
                              make_noise(gaussian, 1.0, rho_db), opt.trials,
                              opt.seed, H1Model::physical, stride, opt.threads);
        em.emit(std::move(r),
                std::string("fig2_") + (gaussian ? "awgn" : "awln") + "_p" + tag(p) +
                    "_rho" + tag(rho_db),
                "fig2", "worst-case policy when rho_db > 0");
      }
    }
  }
  return em.written;
}

std::vector<std::string> figure3(const FigureOptions& opt) {
  Emitter em{opt, {}};
  const std::size_t stride = opt.mc_stride ? opt.mc_stride : 5;
  const std::vector<double> p_grid = linspace(0.1, 5.0, 50);
  const double snr_db = -10.0;
  for (const bool gaussian : {false, true}) {
    for (const double k : {0.0, 10.0}) {
      for (const double rho_db : {0.0, 0.1}) {
        const RicianChannel ch = RicianChannel::from_k_factor(k);
        const H1Model model =
            ch.los_amplitude > 0.0 ? H1Model::effective : H1Model::physical;
        const DetectorConfig cfg(2.0, kSamples, opt.target_pf);
        SweepResult r = sweep(SweepKind::pd_vs_p, p_grid, cfg, snr_db, ch,
                              make_noise(gaussian, 1.0, rho_db), opt.trials,
                              opt.seed, model, stride, opt.threads);
        em.emit(std::move(r),
                std::string("fig3_") + (gaussian ? "awgn" : "awln") + "_k" + tag(k) +
                    "_rho" + tag(rho_db),
                "fig3", "snr_db assumed -10");
      }
    }
  }
  return em.written;
}

}  // namespace

std::vector<std::string> run_figure(int which, const FigureOptions& opt) {
  std::filesystem::create_directories(opt.out_dir);
  switch (which) {
    case 1: return figure1(opt);
    case 2: return figure2(opt);
    case 3: return figure3(opt);
  }
  throw std::logic_error("run_figure: unknown figure");
}

}  // namespace ged::cli
