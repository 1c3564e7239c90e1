#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "figures.hpp"
#include "ged/detector.hpp"
#include "ged/errors.hpp"
#include "ged/monte_carlo.hpp"
#include "output.hpp"
#include "validate.hpp"

namespace {

using namespace ged;
using namespace ged::cli;

struct Params {
  // noise
  double noise_var = 1.0;
  double v = 1.0;
  bool gaussian = false;
  double rho_db = 0.0;
  // channel
  double rician_k = 0.0;
  double scatter_var = 1.0;
  double theta = 0.0;
  // detector
  double p = 2.0;
  std::size_t n = 1024;
  double target_pf = 0.1;
  // signal
  double snr_db = 0.0;
  // simulation
  std::size_t trials = 10000;
  std::uint64_t seed = 42;
  unsigned threads = 0;
  std::size_t mc_stride = 1;
  std::string model = "auto";
  // output
  std::string format = "csv";
  std::string out = "-";
  // grids and extras
  double grid_min = 0.0;
  double grid_max = 0.0;
  int grid_points = 0;
  double lambda = 0.0;
  bool have_lambda = false;
  double order = 2.0;
  double r_max = 0.0;
  double p_min = 0.1;
  double p_max = 5.0;
  double grid_step = 0.05;
  bool quick = false;
  std::string out_dir = ".";
  std::string config;
};

McLeishNoise make_noise(const Params& P) {
  return P.gaussian ? McLeishNoise::gaussian(P.noise_var, P.rho_db)
                    : McLeishNoise(P.noise_var, P.v, P.rho_db);
}

RicianChannel make_channel(const Params& P) {
  return RicianChannel::from_k_factor(P.rician_k, P.scatter_var, P.theta);
}

DetectorConfig make_config(const Params& P) {
  return DetectorConfig(P.p, P.n, P.target_pf);
}

H1Model pick_model(const Params& P, const RicianChannel& ch) {
  if (P.model == "physical") return H1Model::physical;
  if (P.model == "effective") return H1Model::effective;
  return ch.los_amplitude > 0.0 ? H1Model::effective : H1Model::physical;
}

double snr_linear(const Params& P) { return std::pow(10.0, P.snr_db / 10.0); }

// Records only the parameters the measurement actually consumed: noise keys
// always, detector keys when a threshold is involved, channel and SNR keys
// when a signal is present, trial bookkeeping when simulation ran.
std::map<std::string, std::string> base_metadata(const std::string& kind,
                                                 const Params& P,
                                                 bool with_detector,
                                                 bool with_signal,
                                                 bool with_mc) {
  const RicianChannel ch = make_channel(P);
  std::map<std::string, std::string> m;
  m["kind"] = kind;
  m["noise_variance"] = fmt12(P.noise_var);
  m["noise_v"] = P.gaussian ? "inf" : fmt12(P.v);
  m["rho_db"] = fmt12(P.rho_db);
  if (with_detector) {
    m["p"] = fmt12(P.p);
    m["n_samples"] = std::to_string(P.n);
    m["target_pf"] = fmt12(P.target_pf);
  }
  if (with_signal) {
    m["snr_db"] = fmt12(P.snr_db);
    m["alpha"] = fmt12(ch.los_amplitude);
    m["theta"] = fmt12(P.theta);
    m["scatter_variance"] = fmt12(P.scatter_var);
    m["k_factor"] = fmt12(P.rician_k);
  }
  if (with_mc) {
    m["trials"] = std::to_string(P.trials);
    m["seed"] = std::to_string(P.seed);
    m["model"] = pick_model(P, ch) == H1Model::physical ? "physical" : "effective";
  }
  return m;
}

void write_scalar(const Params& P, const ScalarReport& r) {
  OutputTarget target(resolve_out_path(P.out));
  if (P.format == "json")
    write_scalar_json(target.stream(), r);
  else
    write_scalar_csv(target.stream(), r);
}

void write_sweep(const Params& P, const SweepResult& r) {
  OutputTarget target(resolve_out_path(P.out));
  if (P.format == "json")
    write_sweep_json(target.stream(), r);
  else
    write_sweep_csv(target.stream(), r);
}

std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = lo + (hi - lo) * i / (n - 1);
  return g;
}

// Worst-case operating point shared by pd: with uncertainty the threshold
// guards the inflated noise power and the absolute signal power is nominal.
struct Point {
  McLeishNoise noise;
  double snr;
  double lambda;
};

Point resolve_pd_point(const Params& P) {
  const McLeishNoise nominal = make_noise(P);
  const DetectorConfig cfg = make_config(P);
  if (P.rho_db > 0.0) {
    const McLeishNoise wc = worst_case(nominal);
    const double lam = P.have_lambda ? P.lambda : threshold(cfg, wc);
    return {wc, snr_linear(P) / nominal.uncertainty_factor(), lam};
  }
  const double lam = P.have_lambda ? P.lambda : threshold(cfg, nominal);
  return {nominal, snr_linear(P), lam};
}

int run_pdf(const Params& P) {
  const McLeishNoise noise = make_noise(P);
  const double hi = P.r_max > 0.0 ? P.r_max : 4.0 * std::sqrt(P.noise_var);
  const int points = P.grid_points > 0 ? P.grid_points : 201;
  if (points < 2) throw domain_error("pdf: need at least 2 grid points");
  SweepResult r;
  r.abscissa_name = "r";
  const double nan = std::nan("");
  for (const double x : linspace(0.0, hi, points))
    r.rows.push_back({x, mcleish_pdf(x, noise), nan, nan});
  r.metadata = base_metadata("pdf", P, false, false, false);
  r.metadata["r_max"] = fmt12(hi);
  write_sweep(P, r);
  return 0;
}

int run_moment(const Params& P, bool have_snr) {
  const McLeishNoise noise = make_noise(P);
  ScalarReport rep;
  rep.metadata = base_metadata("moment", P, false, have_snr, false);
  rep.metadata["order"] = fmt12(P.order);
  rep.values.emplace_back("h0_moment", abs_moment_h0(P.order, noise));
  if (have_snr) {
    rep.values.emplace_back(
        "h1_moment", abs_moment_h1(P.order, snr_linear(P), make_channel(P), noise));
  }
  write_scalar(P, rep);
  return 0;
}

int run_threshold(const Params& P) {
  const McLeishNoise noise = make_noise(P);
  const DetectorConfig cfg = make_config(P);
  const double lam = threshold(cfg, noise);
  ScalarReport rep;
  rep.metadata = base_metadata("threshold", P, true, false, false);
  rep.values.emplace_back("threshold", lam);
  if (P.rho_db > 0.0)
    rep.values.emplace_back("worst_case_threshold",
                            worst_case_threshold(lam, P.p, P.rho_db));
  write_scalar(P, rep);
  return 0;
}

int run_pf(const Params& P) {
  const McLeishNoise noise = make_noise(P);
  const DetectorConfig cfg = make_config(P);
  const double lam = P.have_lambda ? P.lambda : threshold(cfg, noise);
  ScalarReport rep;
  rep.metadata = base_metadata("pf", P, true, false, P.trials > 0);
  rep.metadata.erase("model");  // noise-only measurement
  rep.values.emplace_back("lambda", lam);
  rep.values.emplace_back("analytic_pf", false_alarm_prob(lam, cfg, noise));
  if (P.trials > 0) {
    const Estimate e = estimate_pf(cfg, noise, lam, P.trials, P.seed, P.threads);
    rep.values.emplace_back("empirical_pf", e.value);
    rep.values.emplace_back("std_error", e.std_error);
  }
  write_scalar(P, rep);
  return 0;
}

int run_pd(const Params& P) {
  const DetectorConfig cfg = make_config(P);
  const RicianChannel ch = make_channel(P);
  const Point pt = resolve_pd_point(P);
  ScalarReport rep;
  rep.metadata = base_metadata("pd", P, true, true, P.trials > 0);
  rep.values.emplace_back("lambda", pt.lambda);
  rep.values.emplace_back("analytic_pd",
                          detection_prob(pt.lambda, cfg, pt.snr, ch, pt.noise));
  if (P.trials > 0) {
    const Estimate e = estimate_pd(cfg, pt.snr, ch, pt.noise, pt.lambda, P.trials,
                                   P.seed, pick_model(P, ch), P.threads);
    rep.values.emplace_back("empirical_pd", e.value);
    rep.values.emplace_back("std_error", e.std_error);
  }
  write_scalar(P, rep);
  return 0;
}

int run_sweep_cmd(const Params& P, SweepKind kind) {
  const DetectorConfig cfg = make_config(P);
  const RicianChannel ch = make_channel(P);
  const SweepResult r =
      sweep(kind, linspace(P.grid_min, P.grid_max, P.grid_points), cfg, P.snr_db,
            ch, make_noise(P), P.trials, P.seed, pick_model(P, ch), P.mc_stride,
            P.threads);
  write_sweep(P, r);
  return 0;
}

int run_optimize(const Params& P) {
  const RicianChannel ch = make_channel(P);
  const OptimizeResult r = optimize_p(P.p_min, P.p_max, P.n, P.target_pf,
                                      snr_linear(P), ch, make_noise(P), P.grid_step);
  ScalarReport rep;
  rep.metadata = base_metadata("optimize-p", P, true, true, false);
  rep.metadata["p_min"] = fmt12(P.p_min);
  rep.metadata["p_max"] = fmt12(P.p_max);
  rep.metadata["grid_step"] = fmt12(P.grid_step);
  rep.values.emplace_back("p_star", r.p_star);
  rep.values.emplace_back("pd_star", r.pd_star);
  write_scalar(P, rep);
  return 0;
}

int run_validate(const Params& P) {
  const std::vector<CheckResult> results = run_validation(P.quick, P.threads);
  bool all = true;
  for (const CheckResult& r : results) {
    std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << ": " << r.detail
              << "\n";
    all = all && r.pass;
  }
  std::cout << (all ? "validation passed" : "validation FAILED") << " ("
            << results.size() << " checks)\n";
  return all ? 0 : 4;
}

int run_fig(const Params& P, int which) {
  FigureOptions opt;
  opt.out_dir = resolve_out_path(P.out_dir);
  opt.format = P.format;
  opt.trials = P.trials;
  opt.seed = P.seed;
  opt.mc_stride = P.mc_stride;
  opt.threads = P.threads;
  opt.target_pf = P.target_pf;
  for (const std::string& path : run_figure(which, opt))
    std::cout << path << "\n";
  return 0;
}

// Option groups. Every hyphenated flag also accepts the underscore spelling
// so config files can use plain identifier keys.

void add_noise_opts(CLI::App* c, Params& P) {
  c->add_option("--noise-var,--noise_var", P.noise_var,
                "noise power sigma_w^2")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  c->add_option("--v", P.v, "non-Gaussianity shape v; smaller is heavier-tailed")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  c->add_flag("--gaussian", P.gaussian, "exact Gaussian-limit noise (ignores --v)");
  c->add_option("--rho-db,--rho_db", P.rho_db,
                "noise power uncertainty bound in dB; > 0 applies the "
                "worst-case policy where supported")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
}

void add_channel_opts(CLI::App* c, Params& P) {
  c->add_option("--rician-k,--rician_k", P.rician_k,
                "Rician K-factor; 0 is Rayleigh fading")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  c->add_option("--scatter-var,--scatter_var", P.scatter_var,
                "scattered-path power sigma_h^2")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  c->add_option("--theta", P.theta, "line-of-sight phase in radians")
      ->capture_default_str();
}

void add_detector_opts(CLI::App* c, Params& P) {
  c->add_option("--p", P.p, "detector exponent in (0, 8]")->capture_default_str();
  c->add_option("--n", P.n, "samples per decision")->capture_default_str();
  c->add_option("--target-pf,--target_pf", P.target_pf,
                "false-alarm probability target in (0, 1)")
      ->capture_default_str();
}

CLI::Option* add_snr_opt(CLI::App* c, Params& P) {
  return c->add_option("--snr", P.snr_db, "received SNR in dB")
      ->capture_default_str();
}

void add_mc_opts(CLI::App* c, Params& P) {
  c->add_option("--trials", P.trials, "Monte Carlo trials; 0 skips simulation")
      ->capture_default_str();
  c->add_option("--seed", P.seed, "master random seed")->capture_default_str();
  c->add_option("--threads", P.threads, "worker threads; 0 = hardware")
      ->capture_default_str();
  c->add_option("--model", P.model,
                "H1 generative model; auto = effective when the K-factor is "
                "positive, else physical")
      ->capture_default_str()
      ->check(CLI::IsMember({"auto", "physical", "effective"}));
}

void add_output_opts(CLI::App* c, Params& P) {
  c->add_option("--format", P.format, "output format")
      ->capture_default_str()
      ->check(CLI::IsMember({"csv", "json"}));
  c->add_option("--out", P.out,
                "output path; - is stdout, relative paths land in $GED_OUT_DIR "
                "when set")
      ->capture_default_str();
}

void add_grid_opts(CLI::App* c, Params& P, double lo, double hi, int points) {
  P.grid_min = lo;
  P.grid_max = hi;
  P.grid_points = points;
  c->add_option("--grid-min,--grid_min", P.grid_min, "sweep grid lower end")
      ->capture_default_str();
  c->add_option("--grid-max,--grid_max", P.grid_max, "sweep grid upper end")
      ->capture_default_str();
  c->add_option("--grid-points,--grid_points", P.grid_points, "sweep grid size")
      ->capture_default_str()
      ->check(CLI::Range(2, 100000));
  c->add_option("--mc-stride,--mc_stride", P.mc_stride,
                "simulate every k-th grid point only")
      ->capture_default_str();
}

struct SubParams {
  CLI::App* sub;
  Params* params;
};

SubParams make_sub(CLI::App& app, std::vector<std::unique_ptr<Params>>& store,
                   const std::string& name, const std::string& desc) {
  store.push_back(std::make_unique<Params>());
  CLI::App* sub = app.add_subcommand(name, desc);
  sub->add_option("--config", store.back()->config,
                  "key = value configuration file; command-line flags "
                  "override its entries");
  return {sub, store.back().get()};
}

std::string trimmed(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_config_bool(const std::string& v, const std::string& key) {
  std::string low = v;
  std::transform(low.begin(), low.end(), low.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (low == "true" || low == "1" || low == "yes" || low == "on") return true;
  if (low == "false" || low == "0" || low == "no" || low == "off") return false;
  throw domain_error("config: " + key + " expects a boolean, got '" + v + "'");
}

// Turns "--config FILE" into option tokens injected right after the
// subcommand name. Command-line tokens come later and win because every
// option takes the last value it sees. Keys map to long option names, so
// the file can say rician_k = 10 or rician-k = 10 interchangeably.
std::vector<std::string> expand_config(const CLI::App& app,
                                       std::vector<std::string> args) {
  auto sub_it = std::find_if(args.begin(), args.end(), [](const std::string& a) {
    return !a.empty() && a[0] != '-';
  });
  if (sub_it == args.end()) return args;
  const CLI::App* sub = app.get_subcommand_no_throw(*sub_it);
  if (sub == nullptr) return args;

  std::string path;
  for (auto it = sub_it + 1; it != args.end(); ++it) {
    if (*it == "--config") {
      if (it + 1 == args.end())
        throw domain_error("config: --config expects a file path");
      path = *(it + 1);
      break;
    }
    if (it->rfind("--config=", 0) == 0) {
      path = it->substr(9);
      break;
    }
  }
  if (path.empty()) return args;

  std::ifstream in(path);
  if (!in) throw domain_error("config: cannot open " + path);
  std::vector<std::string> injected;
  std::string line;
  while (std::getline(in, line)) {
    const std::string t = trimmed(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw domain_error("config: expected key = value, got '" + t + "'");
    const std::string key = trimmed(t.substr(0, eq));
    std::string value = trimmed(t.substr(eq + 1));
    if (value.size() >= 2 && ((value.front() == '"' && value.back() == '"') ||
                              (value.front() == '\'' && value.back() == '\'')))
      value = value.substr(1, value.size() - 2);
    if (key.empty())
      throw domain_error("config: missing key before '=' in '" + t + "'");
    if (key == "config")
      throw domain_error("config: a config file cannot set config");
    std::string flag = "--" + key;
    const CLI::Option* opt = sub->get_option_no_throw(flag);
    if (opt == nullptr && key.size() == 1) {
      flag = "-" + key;
      opt = sub->get_option_no_throw(flag);
    }
    if (opt == nullptr)
      throw domain_error("config: unknown key '" + key + "' for subcommand " +
                         sub->get_name());
    if (opt->get_expected_min() == 0) {
      if (parse_config_bool(value, key)) injected.push_back(flag);
    } else {
      injected.push_back(flag + "=" + value);
    }
  }
  args.insert(sub_it + 1, injected.begin(), injected.end());
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "p-norm energy detection under heavy-tailed noise and Rician fading:\n"
      "closed-form thresholds and probabilities with a cross-validating\n"
      "Monte Carlo simulator.\n"
      "Exit codes: 0 success, 2 usage error, 3 numeric failure, 4 validation "
      "failure.",
      "ged"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "1.0.0");
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  std::vector<std::unique_ptr<Params>> store;
  int exit_code = 0;

  {
    auto [c, P] = make_sub(app, store, "pdf", "noise envelope density table");
    add_noise_opts(c, *P);
    add_output_opts(c, *P);
    c->add_option("--r-max,--r_max", P->r_max,
                  "table upper radius; 0 = 4 noise standard deviations")
        ->capture_default_str();
    c->add_option("--grid-points,--grid_points", P->grid_points,
                  "table size (default 201)");
    c->callback([&exit_code, P] { exit_code = run_pdf(*P); });
  }
  {
    auto [c, P] = make_sub(app, store, "moment",
                           "absolute moment of a received sample; noise-only, "
                           "plus under-signal when --snr is given");
    add_noise_opts(c, *P);
    add_channel_opts(c, *P);
    add_output_opts(c, *P);
    CLI::Option* snr = add_snr_opt(c, *P);
    c->add_option("--order", P->order, "moment order (> -2, fractional allowed)")
        ->capture_default_str();
    c->callback([&exit_code, P, snr] {
      exit_code = run_moment(*P, snr->count() > 0);
    });
  }
  {
    auto [c, P] = make_sub(app, store, "threshold",
                           "false-alarm-rate-holding detection threshold");
    add_noise_opts(c, *P);
    add_detector_opts(c, *P);
    add_output_opts(c, *P);
    c->callback([&exit_code, P] { exit_code = run_threshold(*P); });
  }
  {
    auto [c, P] = make_sub(app, store, "pf",
                           "false-alarm probability at a threshold (default: "
                           "the calibrated one), analytic and simulated");
    add_noise_opts(c, *P);
    add_detector_opts(c, *P);
    add_mc_opts(c, *P);
    add_output_opts(c, *P);
    CLI::Option* lam = c->add_option("--lambda", P->lambda, "explicit threshold");
    Params* PP = P;
    c->callback([&exit_code, PP, lam] {
      PP->have_lambda = lam->count() > 0;
      exit_code = run_pf(*PP);
    });
  }
  {
    auto [c, P] = make_sub(app, store, "pd",
                           "detection probability at the calibrated threshold "
                           "(worst case when --rho-db > 0)");
    add_noise_opts(c, *P);
    add_channel_opts(c, *P);
    add_detector_opts(c, *P);
    add_mc_opts(c, *P);
    add_output_opts(c, *P);
    add_snr_opt(c, *P)->required();
    CLI::Option* lam = c->add_option("--lambda", P->lambda, "explicit threshold");
    Params* PP = P;
    c->callback([&exit_code, PP, lam] {
      PP->have_lambda = lam->count() > 0;
      exit_code = run_pd(*PP);
    });
  }
  {
    auto [c, P] = make_sub(app, store, "roc",
                           "detection-vs-false-alarm sweep at fixed SNR");
    add_noise_opts(c, *P);
    add_channel_opts(c, *P);
    add_detector_opts(c, *P);
    add_mc_opts(c, *P);
    add_output_opts(c, *P);
    add_snr_opt(c, *P)->required();
    add_grid_opts(c, *P, 0.01, 0.99, 25);
    c->callback([&exit_code, P] { exit_code = run_sweep_cmd(*P, SweepKind::roc); });
  }
  {
    auto [c, P] = make_sub(app, store, "sweep-snr",
                           "detection probability across SNR (dB grid)");
    add_noise_opts(c, *P);
    add_channel_opts(c, *P);
    add_detector_opts(c, *P);
    add_mc_opts(c, *P);
    add_output_opts(c, *P);
    add_grid_opts(c, *P, -20.0, 10.0, 31);
    c->callback(
        [&exit_code, P] { exit_code = run_sweep_cmd(*P, SweepKind::pd_vs_snr); });
  }
  {
    auto [c, P] = make_sub(app, store, "sweep-p",
                           "detection probability across the exponent, with a "
                           "per-point calibrated threshold");
    add_noise_opts(c, *P);
    add_channel_opts(c, *P);
    add_detector_opts(c, *P);
    add_mc_opts(c, *P);
    add_output_opts(c, *P);
    add_snr_opt(c, *P)->required();
    add_grid_opts(c, *P, 0.1, 5.0, 50);
    c->callback(
        [&exit_code, P] { exit_code = run_sweep_cmd(*P, SweepKind::pd_vs_p); });
  }
  {
    auto [c, P] = make_sub(app, store, "optimize-p",
                           "exponent maximizing detection probability at the "
                           "calibrated false-alarm rate");
    add_noise_opts(c, *P);
    add_channel_opts(c, *P);
    add_detector_opts(c, *P);
    add_output_opts(c, *P);
    add_snr_opt(c, *P)->required();
    c->add_option("--p-min,--p_min", P->p_min, "search lower end")
        ->capture_default_str();
    c->add_option("--p-max,--p_max", P->p_max, "search upper end")
        ->capture_default_str();
    c->add_option("--grid-step,--grid_step", P->grid_step, "scan step")
        ->capture_default_str();
    c->callback([&exit_code, P] { exit_code = run_optimize(*P); });
  }
  {
    auto [c, P] = make_sub(app, store, "validate",
                           "run the analytic-vs-simulation invariant grid and "
                           "report pass/fail per check");
    c->add_flag("--quick", P->quick, "reduced grids, finishes in under a minute");
    c->add_option("--threads", P->threads, "worker threads; 0 = hardware")
        ->capture_default_str();
    c->callback([&exit_code, P] { exit_code = run_validate(*P); });
  }
  for (int which = 1; which <= 3; ++which) {
    auto [c, P] = make_sub(app, store, "fig" + std::to_string(which),
                           "preset sweep family " + std::to_string(which) +
                               " (1024 samples, unit-scale channels)");
    c->add_option("--trials", P->trials, "Monte Carlo trials; 0 skips simulation")
        ->capture_default_str();
    c->add_option("--seed", P->seed, "master random seed")->capture_default_str();
    c->add_option("--threads", P->threads, "worker threads; 0 = hardware")
        ->capture_default_str();
    c->add_option("--format", P->format, "output format")
        ->capture_default_str()
        ->check(CLI::IsMember({"csv", "json"}));
    c->add_option("--out-dir,--out_dir", P->out_dir,
                  "output directory; relative paths land in $GED_OUT_DIR when set")
        ->capture_default_str();
    c->add_option("--target-pf,--target_pf", P->target_pf,
                  "false-alarm target used by the presets")
        ->capture_default_str();
    P->mc_stride = 0;
    c->add_option("--mc-stride,--mc_stride", P->mc_stride,
                  "simulate every k-th grid point; 0 = preset default");
    const int w = which;
    c->callback([&exit_code, P, w] { exit_code = run_fig(*P, w); });
  }

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = expand_config(app, std::move(args));
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const ged::domain_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const ged::numeric_failure& e) {
    std::cerr << "numeric failure: " << e.what() << " (estimates "
              << fmt12(e.estimate_a()) << ", " << fmt12(e.estimate_b()) << ")\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return exit_code;
}
