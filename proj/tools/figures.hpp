#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ged::cli {

struct FigureOptions {
  std::string out_dir;     // already resolved against GED_OUT_DIR
  std::string format;      // "csv" or "json"
  std::size_t trials;      // 0 skips the Monte Carlo columns
  std::uint64_t seed;
  std::size_t mc_stride;   // 0 picks the per-figure default
  unsigned threads;
  double target_pf;
};

// Writes the preset sweep family for figure 1, 2, or 3 and returns the paths
// written. Presets fix N = 1024 samples and unit-scale channels; grid and
// Monte Carlo density are documented in each file's metadata.
std::vector<std::string> run_figure(int which, const FigureOptions& opt);

}  // namespace ged::cli
