#include "doctest.h"
#include "oracles.hpp"

#include "rppg/capture.hpp"
#include "rppg/kernels.hpp"
#include "rppg/resample.hpp"
#include "rppg/spectrum.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

using namespace rppg;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

TimestampedSignal sampled(const std::vector<double>& t, double freq, double amp = 1.0) {
  std::vector<double> v;
  for (double x : t) v.push_back(amp * std::sin(kTwoPi * freq * x));
  return TimestampedSignal(t, v);
}

std::vector<double> jittered_frames(std::size_t n, double fps, double jitter, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dev(-jitter, jitter);
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = static_cast<double>(i) / fps + (i == 0 ? 0.0 : dev(rng));
  return t;
}

// Zero crossings per second of v over samples [first, last).
double crossing_rate(const UniformSignal& s, std::size_t first, std::size_t last) {
  std::size_t crossings = 0;
  for (std::size_t k = first + 1; k < last; ++k) {
    if ((s.values()[k - 1] < 0.0) != (s.values()[k] < 0.0)) ++crossings;
  }
  return static_cast<double>(crossings) / (static_cast<double>(last - first) / s.sample_rate());
}

}  // namespace

TEST_CASE("signal types enforce their invariants") {
  CHECK_THROWS_AS(TimestampedSignal({0.0}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(TimestampedSignal({0.0, 1.0}, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(TimestampedSignal({0.0, 0.0}, {1.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(TimestampedSignal({0.0, NAN}, {1.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(TimestampedSignal({0.0, 1.0}, {1.0, INFINITY}), std::invalid_argument);
  CHECK_THROWS_AS(UniformSignal(0.0, 0.0, {1.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(UniformSignal(0.0, 10.0, {1.0}), std::invalid_argument);
  const UniformSignal u(2.0, 4.0, {1, 2, 3, 4, 5});
  CHECK(u.time_at(4) == doctest::Approx(3.0));
  CHECK(u.slice(1, 3).start_time() == doctest::Approx(2.25));
  CHECK(u.to_timestamped().timestamps().back() == doctest::Approx(3.0));
}

TEST_CASE("resample_aware") {
  SUBCASE("linear ramp is reproduced exactly") {
    const TimestampedSignal ramp({0.0, 0.5, 1.0}, {0.0, 5.0, 10.0});
    const auto out = resample_aware(ramp, 10.0);
    REQUIRE(out.size() == 11);
    CHECK(out.start_time() == 0.0);
    for (std::size_t k = 0; k < out.size(); ++k) CHECK(out.values()[k] == doctest::Approx(k).epsilon(1e-12));
  }
  SUBCASE("already uniform input at its own rate is returned unchanged") {
    std::vector<double> t, v;
    for (int k = 0; k <= 20; ++k) {
      t.push_back(k / 10.0);
      v.push_back(std::cos(0.7 * k) + 0.1 * k);
    }
    const auto out = resample_aware(TimestampedSignal(t, v), 10.0);
    REQUIRE(out.size() == v.size());
    for (std::size_t k = 0; k < v.size(); ++k) CHECK(out.values()[k] == doctest::Approx(v[k]).epsilon(1e-12));
  }
  SUBCASE("jittered 30 fps sine reconstructs within 1% of amplitude") {
    // Linear interpolation error is bounded by h^2 / 8 * max|f''|; with
    // +-1 ms jitter the longest frame interval is 1/30 + 2 ms.
    const double freq = 1.2;
    const double h = 1.0 / 30.0 + 0.002;
    const double bound = h * h / 8.0 * std::pow(kTwoPi * freq, 2);
    REQUIRE(bound < 0.01);
    const auto sig = sampled(jittered_frames(300, 30.0, 0.001, 7), freq);
    const auto out = resample_aware(sig, 240.0);
    double worst = 0.0;
    for (std::size_t k = 0; k < out.size(); ++k) {
      worst = std::max(worst, std::abs(out.values()[k] - std::sin(kTwoPi * freq * out.time_at(k))));
    }
    CHECK(worst < bound);
    CHECK(out.time_at(out.size() - 1) <= sig.end_time() + 1e-12);
  }
  SUBCASE("affine signals are exact for irregular timestamps") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> gap(0.01, 0.2);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<double> t{gap(rng)}, v;
      for (int i = 0; i < 50; ++i) t.push_back(t.back() + gap(rng));
      for (double x : t) v.push_back(-3.5 + 2.25 * x);
      const auto out = resample_aware(TimestampedSignal(t, v), 97.0);
      for (std::size_t k = 0; k < out.size(); ++k) {
        CHECK(out.values()[k] == doctest::Approx(-3.5 + 2.25 * out.time_at(k)).epsilon(1e-13));
      }
    }
  }
  SUBCASE("errors") {
    const TimestampedSignal ok({0.0, 1.0}, {0.0, 1.0});
    CHECK_THROWS_AS(resample_aware(ok, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(resample_aware(ok, -5.0), std::invalid_argument);
  }
}

TEST_CASE("synthesize_uniform_timestamps") {
  const auto moved = synthesize_uniform_timestamps(TimestampedSignal({0.0, 0.4, 1.0}, {1, 2, 3}));
  CHECK(moved.timestamps() == std::vector<double>{0.0, 0.5, 1.0});
  CHECK(moved.values() == std::vector<double>{1, 2, 3});

  const TimestampedSignal regular({0.0, 0.5, 1.0}, {4, 5, 6});
  CHECK(synthesize_uniform_timestamps(regular) == regular);

  auto t = jittered_frames(300, 29.9, 0.01, 11);
  t.back() = 10.0;
  const auto grid = synthesize_uniform_timestamps(sampled(t, 1.0)).timestamps();
  CHECK(grid.front() == t.front());
  CHECK(grid.back() == 10.0);
  const double mean_step = (grid.back() - grid.front()) / 299.0;
  CHECK(mean_step == doctest::Approx(10.0 / 299.0).epsilon(1e-14));
  for (std::size_t i = 1; i < grid.size(); ++i) CHECK(std::abs(grid[i] - grid[i - 1] - mean_step) < 1e-12);
}

TEST_CASE("resample_naive") {
  SUBCASE("identical to resample_aware on regular timestamps") {
    for (double fps : {24.0, 25.0, 29.97, 30.0, 60.0}) {
      std::vector<double> t;
      for (int i = 0; i < 200; ++i) t.push_back(1.5 + i / fps);
      const auto sig = sampled(t, 1.3);
      CHECK(resample_naive(sig, 240.0) == resample_aware(sig, 240.0));
    }
  }
  SUBCASE("step relocated to the synthesized midpoint") {
    const TimestampedSignal sig({0.0, 0.9, 1.0}, {0.0, 0.0, 1.0});
    const auto out = resample_naive(sig, 10.0);
    const std::vector<double> expected{0, 0, 0, 0, 0, 0, 0.2, 0.4, 0.6, 0.8, 1.0};
    REQUIRE(out.size() == expected.size());
    for (std::size_t k = 0; k < expected.size(); ++k) CHECK(out.values()[k] == doctest::Approx(expected[k]).epsilon(1e-12));
  }
  SUBCASE("drifting frame rate squeezes and stretches the naive signal") {
    // 150 frames at 25 fps (6 s) then 150 frames at 37.5 fps (4 s). The naive
    // grid spaces all 300 frames evenly over the same 10 s, so the first half
    // carries 6 s of content in ~5 s and the second 4 s in ~5 s.
    std::vector<double> t;
    for (int i = 0; i < 150; ++i) t.push_back(i / 25.0);
    for (int i = 1; i <= 150; ++i) t.push_back(149.0 / 25.0 + i / 37.5);
    const double f = 1.2;
    const auto sig = sampled(t, f);
    const auto good = resample_aware(sig, 240.0);
    const auto bad = resample_naive(sig, 240.0);
    const double split = 149.0 * (t.back() / 299.0);  // naive time of frame 149
    const auto mid = static_cast<std::size_t>(split * 240.0);
    const double squeeze = (149.0 / 25.0) / split;
    const double stretch = (t.back() - 149.0 / 25.0) / (t.back() - split);
    CHECK(crossing_rate(bad, 0, mid) / 2.0 == doctest::Approx(f * squeeze).epsilon(0.06));
    CHECK(crossing_rate(bad, mid, bad.size()) / 2.0 == doctest::Approx(f * stretch).epsilon(0.06));
    CHECK(crossing_rate(good, 0, mid) / 2.0 == doctest::Approx(f).epsilon(0.06));
    CHECK(crossing_rate(good, mid, good.size()) / 2.0 == doctest::Approx(f).epsilon(0.06));
  }
}

TEST_CASE("amplitude_difference") {
  const auto a = sine(1.0, 1.0, 4.0, 50.0);
  const auto zero = amplitude_difference(a, a);
  CHECK(zero.max_abs == 0.0);
  CHECK(zero.rms == 0.0);
  CHECK(zero.relative_rms == 0.0);

  std::vector<double> shifted = a.values();
  for (double& v : shifted) v += 0.1;
  const auto m = amplitude_difference(a, UniformSignal(a.start_time(), a.sample_rate(), shifted));
  CHECK(m.max_abs == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(m.rms == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(m.relative_rms == doctest::Approx(0.1 / std::sqrt(0.5) * 100.0).epsilon(1e-9));

  CHECK_THROWS_AS(amplitude_difference(a, sine(1.0, 1.0, 4.0, 60.0)), std::invalid_argument);
  CHECK_THROWS_AS(amplitude_difference(a, sine(1.0, 1.0, 3.0, 50.0)), std::invalid_argument);
}

TEST_CASE("power_spectrum") {
  SUBCASE("exact-bin sine concentrates all power in one bin") {
    const auto s = sine(3.0, 2.0, 4.0, 64.0);  // bin step 0.25 Hz, 3 Hz is bin 12
    const auto spec = power_spectrum(s, Taper::rectangular);
    CHECK(spec.frequency_step == doctest::Approx(0.25));
    REQUIRE(spec.power.size() == 129);
    const double peak = spec.power[12];
    CHECK(peak == doctest::Approx(2.0).epsilon(1e-12));  // A^2 / 2
    for (std::size_t k = 0; k < spec.power.size(); ++k) {
      if (k != 12) CHECK(spec.power[k] < 1e-10 * peak);
    }
  }
  SUBCASE("constant signal has an all-zero spectrum") {
    const UniformSignal c(0.0, 10.0, std::vector<double>(64, 3.7));
    for (Taper taper : {Taper::rectangular, Taper::hann}) {
      for (double p : power_spectrum(c, taper).power) CHECK(p < 1e-25);
    }
  }
  SUBCASE("two tones at 2:1 amplitude carry 4:1 power") {
    const SineComponent parts[] = {{1.0, 2.0, 0.0}, {2.5, 1.0, 0.3}};
    const auto s = sum_of_sines(parts, 24.0, 240.0);
    const auto spec = power_spectrum(s, Taper::rectangular);
    const auto k1 = static_cast<std::size_t>(std::lround(1.0 / spec.frequency_step));
    const auto k2 = static_cast<std::size_t>(std::lround(2.5 / spec.frequency_step));
    CHECK(spec.power[k1] == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(spec.power[k2] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(spec.power[k1] / spec.power[k2] == doctest::Approx(4.0).epsilon(1e-9));
    double total = 0.0;
    for (double p : spec.power) total += p;
    CHECK(total == doctest::Approx(2.5).epsilon(1e-9));  // analytic mean square
    CHECK(dominant_frequency(spec, {0.7, 3.0}) == doctest::Approx(1.0));
  }
  SUBCASE("Parseval on random signals with the rectangular taper") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> noise(0.3, 1.0);
    for (std::size_t n : {16u, 17u, 100u, 255u, 1024u}) {
      std::vector<double> v(n);
      for (double& x : v) x = noise(rng);
      double mean = 0.0;
      for (double x : v) mean += x;
      mean /= static_cast<double>(n);
      double ms = 0.0;
      for (double x : v) ms += (x - mean) * (x - mean);
      ms /= static_cast<double>(n);
      double total = 0.0;
      for (double p : power_spectrum(UniformSignal(0.0, 30.0, v), Taper::rectangular).power) total += p;
      CHECK(total == doctest::Approx(ms).epsilon(1e-9));
    }
  }
  SUBCASE("matches a direct DFT for both tapers") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::size_t n : {16u, 31u, 64u, 99u}) {
      std::vector<double> v(n);
      for (double& x : v) x = u(rng);
      for (bool hann : {false, true}) {
        const auto spec = power_spectrum(UniformSignal(0.0, 8.0, v), hann ? Taper::hann : Taper::rectangular);
        const auto ref = oracle::naive_power(v, hann);
        REQUIRE(spec.power.size() == ref.size());
        for (std::size_t k = 0; k < ref.size(); ++k) CHECK(spec.power[k] == doctest::Approx(ref[k]).epsilon(1e-9).scale(1e-12));
      }
    }
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(power_spectrum(UniformSignal(0.0, 10.0, std::vector<double>(15, 1.0))), std::invalid_argument);
    CHECK_THROWS_AS(parse_taper("blackman"), std::invalid_argument);
    CHECK(parse_taper("hann") == Taper::hann);
    CHECK(taper_name(Taper::rectangular) == "rectangular");
  }
}

TEST_CASE("spectral_difference") {
  const auto s = sine(1.2, 1.0, 10.0, 240.0);
  const auto spec = power_spectrum(s);
  const auto same = spectral_difference(spec, spec);
  CHECK(same.max_abs == 0.0);
  CHECK(same.relative_rms == 0.0);

  std::vector<double> t;
  for (int i = 0; i < 300; ++i) t.push_back(i / 30.0);
  const auto regular = sampled(t, 1.2);
  const auto d = spectral_difference(power_spectrum(resample_aware(regular, 240.0)),
                                     power_spectrum(resample_naive(regular, 240.0)));
  CHECK(d.max_abs == 0.0);
  CHECK(d.rms == 0.0);

  CHECK_THROWS_AS(spectral_difference(spec, power_spectrum(sine(1.2, 1.0, 9.0, 240.0))), std::invalid_argument);
}

TEST_CASE("dominant_frequency") {
  SUBCASE("single peak") {
    const auto spec = power_spectrum(sine(1.2, 1.0, 10.0, 240.0));
    CHECK(std::abs(dominant_frequency(spec, {0.7, 3.0}) - 1.2) <= spec.frequency_step);
  }
  SUBCASE("ties resolve to the lower frequency") {
    PowerSpectrum spec;
    spec.frequency_step = 0.5;
    spec.power = {0, 0, 4, 0, 4, 0, 0};
    CHECK(dominant_frequency(spec, {0.1, 3.0}) == 1.0);
  }
  SUBCASE("pulse-like waveform at 72 bpm") {
    const auto spec = power_spectrum(synthetic_ppg(72.0, 20.0, 240.0));
    CHECK(std::abs(dominant_frequency(spec, {0.7, 3.0}) - 1.2) <= spec.frequency_step);
  }
  SUBCASE("a delayed copy keeps its dominant frequency") {
    const SineComponent parts[] = {{1.1, 1.0, 0.0}, {2.3, 0.6, 0.0}};
    const SineComponent delayed[] = {{1.1, 1.0, -kTwoPi * 1.1 * 0.13}, {2.3, 0.6, -kTwoPi * 2.3 * 0.13}};
    const Band band{0.7, 3.0};
    CHECK(dominant_frequency(power_spectrum(sum_of_sines(parts, 12.0, 240.0)), band) ==
          dominant_frequency(power_spectrum(sum_of_sines(delayed, 12.0, 240.0)), band));
  }
  SUBCASE("errors") {
    const auto spec = power_spectrum(sine(1.2, 1.0, 2.0, 32.0));
    CHECK_THROWS_AS(dominant_frequency(spec, {3.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(dominant_frequency(spec, {1.1, 1.2}), std::invalid_argument);  // no bin inside
    CHECK_THROWS_AS(dominant_frequency(spec, {100.0, 200.0}), std::invalid_argument);
  }
}

TEST_CASE("interpolation kernels agree bitwise with their serial references") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> gap(0.005, 0.05);
  std::normal_distribution<double> val(0.0, 1.0);
  std::vector<double> t{0.25}, v{val(rng)};
  for (int i = 0; i < 2000; ++i) {
    t.push_back(t.back() + gap(rng));
    v.push_back(val(rng));
  }
  const std::size_t count = grid_size(t.front(), t.back(), 333.0);
  std::vector<double> serial(count), parallel(count);
  kernels::interpolate_linear_serial(t, v, t.front(), 333.0, serial);
  kernels::interpolate_linear(t, v, t.front(), 333.0, parallel);
  CHECK(serial == parallel);

  std::vector<double> frames, offsets{0.0, 0.001, 0.0052, 0.011};
  for (int i = 0; i < 500; ++i) frames.push_back(0.3 + i / 30.0 + 0.002 * val(rng) * 0.1);
  std::vector<double> ra(frames.size()), rb(frames.size());
  const std::vector<double> source(v.begin(), v.end());
  kernels::region_average_serial(source, 0.0, 100.0, frames, offsets, ra);
  kernels::region_average(source, 0.0, 100.0, frames, offsets, rb);
  CHECK(ra == rb);
}
