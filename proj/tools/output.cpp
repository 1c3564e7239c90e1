#include "output.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>

#include "json.hpp"

namespace ged::cli {

std::string fmt12(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

namespace {

void write_metadata_comments(std::ostream& os,
                             const std::map<std::string, std::string>& meta) {
  for (const auto& [k, v] : meta) os << "# " << k << "=" << v << "\n";
}

nlohmann::ordered_json metadata_json(const std::map<std::string, std::string>& meta) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [k, v] : meta) j[k] = v;
  return j;
}

}  // namespace

void write_sweep_csv(std::ostream& os, const SweepResult& r) {
  write_metadata_comments(os, r.metadata);
  os << "x,analytic,empirical,std_error\n";
  for (const SweepRow& row : r.rows) {
    os << fmt12(row.x) << ',' << fmt12(row.analytic) << ',' << fmt12(row.empirical)
       << ',' << fmt12(row.std_error) << "\n";
  }
}

void write_sweep_json(std::ostream& os, const SweepResult& r) {
  nlohmann::ordered_json j;
  j["metadata"] = metadata_json(r.metadata);
  j["columns"] = {"x", "analytic", "empirical", "std_error"};
  auto rows = nlohmann::ordered_json::array();
  for (const SweepRow& row : r.rows)
    rows.push_back({row.x, row.analytic, row.empirical, row.std_error});
  j["rows"] = std::move(rows);  // non-finite values serialize as null
  os << j.dump(2) << "\n";
}

void write_scalar_csv(std::ostream& os, const ScalarReport& r) {
  write_metadata_comments(os, r.metadata);
  os << "name,value\n";
  for (const auto& [name, value] : r.values) os << name << ',' << fmt12(value) << "\n";
}

void write_scalar_json(std::ostream& os, const ScalarReport& r) {
  nlohmann::ordered_json j;
  j["metadata"] = metadata_json(r.metadata);
  auto values = nlohmann::ordered_json::object();
  for (const auto& [name, value] : r.values) values[name] = value;
  j["values"] = std::move(values);
  os << j.dump(2) << "\n";
}

std::string resolve_out_path(const std::string& path) {
  if (path == "-") return path;
  const std::filesystem::path p(path);
  if (p.is_relative()) {
    if (const char* dir = std::getenv("GED_OUT_DIR"); dir && *dir)
      return (std::filesystem::path(dir) / p).string();
  }
  return path;
}

struct OutputTarget::Impl {
  std::ofstream file;
  bool to_stdout = false;
};

OutputTarget::OutputTarget(const std::string& resolved_path) : impl_(new Impl) {
  if (resolved_path == "-") {
    impl_->to_stdout = true;
    return;
  }
  const std::filesystem::path parent =
      std::filesystem::path(resolved_path).parent_path();
  if (!parent.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(parent, ec);
  }
  impl_->file.open(resolved_path);
  if (!impl_->file)
    throw std::runtime_error("cannot open output file: " + resolved_path);
}

OutputTarget::~OutputTarget() { delete impl_; }

std::ostream& OutputTarget::stream() { return impl_->to_stdout ? std::cout : impl_->file; }

}  // namespace ged::cli
