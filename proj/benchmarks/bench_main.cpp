// Microbenchmarks for the hot paths: special-function kernels, sample
// generation, and the closed-form detector analytics.
#include <benchmark/benchmark.h>

#include <cmath>
#include <complex>
#include <vector>

#include "ged/detector.hpp"
#include "ged/mcleish.hpp"
#include "ged/random.hpp"
#include "ged/special_functions.hpp"

namespace {

using namespace ged;

void BM_BesselK(benchmark::State& state) {
  const double order = state.range(0) / 10.0;
  double x = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(bessel_k(order, x));
    x = x < 40.0 ? x + 0.37 : 0.1;
  }
}
BENCHMARK(BM_BesselK)->Arg(5)->Arg(105)->Arg(505);

void BM_Kummer(benchmark::State& state) {
  const double z = -static_cast<double>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(kummer_1f1(-0.75, 1.0, z));
}
BENCHMARK(BM_Kummer)->Arg(1)->Arg(25)->Arg(400);

void BM_GammaExpectation(benchmark::State& state) {
  const double v = state.range(0) / 10.0;
  const auto f = [](double g) { return std::pow(1.0 + g, 0.35); };
  for (auto _ : state)
    benchmark::DoNotOptimize(gamma_expectation(f, v));
}
BENCHMARK(BM_GammaExpectation)->Arg(5)->Arg(10)->Arg(800);

void BM_NoisePdf(benchmark::State& state) {
  const McLeishNoise noise(1.0, state.range(0) / 10.0);
  double r = 0.01;
  for (auto _ : state) {
    benchmark::DoNotOptimize(mcleish_pdf(r, noise));
    r = r < 4.0 ? r + 0.073 : 0.01;
  }
}
BENCHMARK(BM_NoisePdf)->Arg(5)->Arg(10)->Arg(800);

void BM_FillNoise(benchmark::State& state) {
  const McLeishNoise noise(1.0, state.range(0) / 10.0);
  Rng rng(97);
  std::vector<std::complex<double>> buf(1024);
  for (auto _ : state) {
    fill_mcleish(rng, noise, buf);
    benchmark::DoNotOptimize(buf.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(buf.size()));
}
BENCHMARK(BM_FillNoise)->Arg(5)->Arg(10);

void BM_FillNoiseGaussian(benchmark::State& state) {
  const McLeishNoise noise = McLeishNoise::gaussian(1.0);
  Rng rng(97);
  std::vector<std::complex<double>> buf(1024);
  for (auto _ : state) {
    fill_mcleish(rng, noise, buf);
    benchmark::DoNotOptimize(buf.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(buf.size()));
}
BENCHMARK(BM_FillNoiseGaussian);

void BM_TestStatistic(benchmark::State& state) {
  const double p = state.range(0) / 10.0;
  Rng rng(11);
  std::vector<std::complex<double>> buf(1024);
  fill_mcleish(rng, McLeishNoise(1.0, 1.0), buf);
  for (auto _ : state)
    benchmark::DoNotOptimize(test_statistic(buf, p));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(buf.size()));
}
BENCHMARK(BM_TestStatistic)->Arg(1)->Arg(10)->Arg(20);

void BM_Threshold(benchmark::State& state) {
  const McLeishNoise noise(1.0, state.range(0) / 10.0);
  const DetectorConfig cfg(1.3, 1024, 0.1);
  for (auto _ : state)
    benchmark::DoNotOptimize(threshold(cfg, noise));
}
BENCHMARK(BM_Threshold)->Arg(10)->Arg(7);

void BM_CfarDetectionProb(benchmark::State& state) {
  const McLeishNoise noise(1.0, state.range(0) / 10.0);
  const RicianChannel ch(0.0, 0.0, 1.0);
  const DetectorConfig cfg(1.3, 1024, 0.1);
  for (auto _ : state)
    benchmark::DoNotOptimize(cfar_detection_prob(cfg, 0.1, ch, noise));
}
BENCHMARK(BM_CfarDetectionProb)->Arg(10)->Arg(7);

}  // namespace

BENCHMARK_MAIN();
