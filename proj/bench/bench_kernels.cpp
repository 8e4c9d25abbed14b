#include "rppg/capture.hpp"
#include "rppg/hr_window.hpp"
#include "rppg/kernels.hpp"
#include "rppg/phase.hpp"

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

using namespace rppg;

namespace {

struct Knots {
  std::vector<double> t;
  std::vector<double> v;
};

Knots irregular_knots(std::size_t n) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> step(0.02, 0.045);
  Knots k;
  double t = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    k.t.push_back(t);
    k.v.push_back(std::sin(2.0 * std::numbers::pi * 1.2 * t));
    t += step(rng);
  }
  return k;
}

template <bool Parallel>
void BM_Interpolate(benchmark::State& state) {
  const auto k = irregular_knots(static_cast<std::size_t>(state.range(0)));
  const double rate = 44100.0;
  std::vector<double> out(static_cast<std::size_t>((k.t.back() - k.t.front()) * rate));
  for (auto _ : state) {
    if constexpr (Parallel) {
      kernels::interpolate_linear(k.t, k.v, 0.0, rate, out);
    } else {
      kernels::interpolate_linear_serial(k.t, k.v, 0.0, rate, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(out.size()));
}

template <bool Parallel>
void BM_RegionAverage(benchmark::State& state) {
  const auto source = sine(1.2, 1.0, 62.0, kDefaultSourceRate);
  std::vector<double> frames;
  for (int i = 0; i < 1800; ++i) frames.push_back(i / 30.0);
  CameraModel m;
  const auto offsets = region_offsets(m, Rect{0, 0, 640, 240}, static_cast<std::size_t>(state.range(0)));
  std::vector<double> out(frames.size());
  for (auto _ : state) {
    if constexpr (Parallel) {
      kernels::region_average(source.values(), 0.0, source.sample_rate(), frames, offsets, out);
    } else {
      kernels::region_average_serial(source.values(), 0.0, source.sample_rate(), frames, offsets, out);
    }
    benchmark::DoNotOptimize(out.data());
  }
}

BeatSeries long_record(double minutes) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> rr(0.9, 0.06);
  std::vector<double> t{0.0};
  while (t.back() < minutes * 60.0) t.push_back(t.back() + std::max(0.4, rr(rng)));
  return BeatSeries(t);
}

template <bool Parallel>
void BM_WindowMatrix(benchmark::State& state) {
  const auto beats = long_record(static_cast<double>(state.range(0)));
  const WindowSpec spec;
  for (auto _ : state) {
    auto m = Parallel ? window_diff_matrix(beats, spec) : window_diff_matrix_serial(beats, spec);
    benchmark::DoNotOptimize(m.cells.size());
  }
}

template <bool Parallel>
void BM_TrackPhase(benchmark::State& state) {
  const double rate = 240.0;
  std::vector<double> a, b;
  for (int i = 0; i < static_cast<int>(state.range(0) * rate); ++i) {
    const double t = i / rate;
    a.push_back(std::sin(2.0 * std::numbers::pi * 1.2 * t));
    b.push_back(std::sin(2.0 * std::numbers::pi * 1.2 * (t - 0.01 - 0.01 * std::sin(t / 5.0))));
  }
  const UniformSignal sa(0.0, rate, a), sb(0.0, rate, b);
  for (auto _ : state) {
    auto track = Parallel ? track_phase_shift(sa, sb, 10.0, 0.5, Band{})
                          : track_phase_shift_serial(sa, sb, 10.0, 0.5, Band{});
    benchmark::DoNotOptimize(track.data());
  }
}

}  // namespace

BENCHMARK(BM_Interpolate<false>)->Arg(300)->Arg(18000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Interpolate<true>)->Arg(300)->Arg(18000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RegionAverage<false>)->Arg(32)->Arg(240)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RegionAverage<true>)->Arg(32)->Arg(240)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WindowMatrix<false>)->Arg(120)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_WindowMatrix<true>)->Arg(120)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrackPhase<false>)->Arg(300)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrackPhase<true>)->Arg(300)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
