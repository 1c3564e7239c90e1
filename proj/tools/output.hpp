#pragma once

#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "ged/monte_carlo.hpp"

namespace ged::cli {

// Scalar results (threshold, moments, optimized exponent) share the sweep
// metadata header but carry named values instead of grid rows.
struct ScalarReport {
  std::map<std::string, std::string> metadata;
  std::vector<std::pair<std::string, double>> values;
};

// %.12g with canonical spellings "nan", "inf", "-inf" regardless of libc.
std::string fmt12(double x);

void write_sweep_csv(std::ostream& os, const SweepResult& r);
void write_sweep_json(std::ostream& os, const SweepResult& r);
void write_scalar_csv(std::ostream& os, const ScalarReport& r);
void write_scalar_json(std::ostream& os, const ScalarReport& r);

// "-" means stdout; a relative path lands in $GED_OUT_DIR when that is set.
std::string resolve_out_path(const std::string& path);

// Stream handle for resolve_out_path targets. Throws std::runtime_error if
// the file cannot be opened.
class OutputTarget {
 public:
  explicit OutputTarget(const std::string& resolved_path);
  ~OutputTarget();
  std::ostream& stream();
  OutputTarget(const OutputTarget&) = delete;
  OutputTarget& operator=(const OutputTarget&) = delete;

 private:
  struct Impl;
  Impl* impl_;
};

}  // namespace ged::cli
