#include "rppg/phase.hpp"

#include "rppg/io.hpp"
#include "rppg/resample.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

namespace rppg {
namespace {

constexpr double kNoPowerFraction = 1e-12;
// Bins on each side of the peak pooled for the coherence estimate (the hann
// main lobe is two bins wide on each side).
constexpr std::size_t kCoherenceHalfWidth = 2;

void check_pair(const UniformSignal& a, const UniformSignal& b) {
  if (a.sample_rate() != b.sample_rate() || a.size() != b.size()) {
    throw std::invalid_argument("phase: signals must share sample rate and length");
  }
}

double wrap_angle(double angle) {
  // atan2 yields [-pi, pi]; the half-period interval is open at -T/2.
  return angle <= -std::numbers::pi ? std::numbers::pi : angle;
}

double median_of(std::vector<double> v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

// Peak frequency refined between bins by a parabola through the log power of
// the peak and its neighbours (near-exact for the Gaussian-like hann lobe).
double refined_peak_frequency(const PowerSpectrum& spec, std::size_t peak) {
  const auto& p = spec.power;
  double offset = 0.0;
  if (peak > 0 && peak + 1 < p.size() && p[peak - 1] > 0.0 && p[peak + 1] > 0.0) {
    const double lm = std::log(p[peak - 1]);
    const double l0 = std::log(p[peak]);
    const double lp = std::log(p[peak + 1]);
    const double curvature = lm - 2.0 * l0 + lp;
    if (curvature < 0.0) offset = std::clamp(0.5 * (lm - lp) / curvature, -0.5, 0.5);
  }
  return (static_cast<double>(peak) + offset) * spec.frequency_step;
}

struct WindowGrid {
  std::size_t width = 0;
  std::size_t step = 0;
  std::size_t count = 0;
};

WindowGrid window_grid(const UniformSignal& a, const UniformSignal& b, double window, double step,
                       Band band) {
  check_pair(a, b);
  if (!(step > 0.0)) throw std::invalid_argument("phase track: step must be positive");
  if (!(band.low > 0.0) || window < 4.0 / band.low) {
    throw std::invalid_argument("phase track: window must cover at least 4 periods of the band's low edge");
  }
  WindowGrid g;
  g.width = static_cast<std::size_t>(std::llround(window * a.sample_rate()));
  g.step = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(step * a.sample_rate())));
  if (g.width > a.size()) throw std::invalid_argument("phase track: window longer than the signal");
  g.count = (a.size() - g.width) / g.step + 1;
  return g;
}

PhaseEstimate estimate_window(const UniformSignal& a, const UniformSignal& b, const WindowGrid& g,
                              std::size_t index, Band band) {
  const std::size_t first = index * g.step;
  PhaseEstimate e = estimate_phase_shift(a.slice(first, g.width), b.slice(first, g.width), band);
  e.time = a.start_time() + (static_cast<double>(first) + 0.5 * static_cast<double>(g.width - 1)) /
                                a.sample_rate();
  return e;
}

}  // namespace

PhaseEstimate estimate_phase_shift(const UniformSignal& a, const UniformSignal& b, Band band) {
  check_pair(a, b);
  if (!(band.low > 0.0) || !(band.low < band.high)) {
    throw std::invalid_argument("phase: band must satisfy 0 < low < high");
  }
  if (a.duration() <= 4.0 / band.low) {
    throw std::invalid_argument("phase: signals must be longer than 4 periods of the band's low edge");
  }
  if (a.size() < kMinSpectrumLength) throw std::invalid_argument("phase: signals too short");

  const auto fa = tapered_dft(a.values(), Taper::hann);
  const auto fb = tapered_dft(b.values(), Taper::hann);

  PowerSpectrum mean_power;
  mean_power.taper = Taper::hann;
  mean_power.frequency_step = a.sample_rate() / static_cast<double>(a.size());
  mean_power.power.resize(fa.size());
  // Each spectrum is normalised to unit total power before averaging, so the
  // peak location does not depend on the relative scale of the inputs.
  double total_a = 0.0;
  double total_b = 0.0;
  for (std::size_t k = 0; k < fa.size(); ++k) {
    total_a += std::norm(fa[k]);
    total_b += std::norm(fb[k]);
  }
  if (!(total_a > 0.0) || !(total_b > 0.0)) {
    throw std::invalid_argument("phase: no power in the band (unpulsed signals)");
  }
  for (std::size_t k = 0; k < fa.size(); ++k) {
    mean_power.power[k] = 0.5 * (std::norm(fa[k]) / total_a + std::norm(fb[k]) / total_b);
  }
  const std::size_t peak = dominant_bin(mean_power, band);
  if (mean_power.power[peak] < kNoPowerFraction) {
    throw std::invalid_argument("phase: no power in the band (unpulsed signals)");
  }

  // a * conj(b), spelled out so that a == b gives an exactly real product.
  auto cross = [&](std::size_t k) {
    const double ar = fa[k].real(), ai = fa[k].imag();
    const double br = fb[k].real(), bi = fb[k].imag();
    return std::complex<double>(ar * br + ai * bi, ai * br - ar * bi);
  };

  PhaseEstimate e;
  e.time = a.start_time() + 0.5 * static_cast<double>(a.size() - 1) / a.sample_rate();
  e.dominant_freq = refined_peak_frequency(mean_power, peak);
  const std::complex<double> c = cross(peak);
  const double angle = wrap_angle(std::atan2(c.imag(), c.real()));
  e.shift_seconds = angle / (2.0 * std::numbers::pi * e.dominant_freq);
  e.shift_degrees = e.shift_seconds * e.dominant_freq * 360.0;

  const std::size_t lo = std::max<std::size_t>(1, peak - std::min(peak, kCoherenceHalfWidth));
  const std::size_t hi = std::min(fa.size() - 1, peak + kCoherenceHalfWidth);
  std::complex<double> sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t k = lo; k <= hi; ++k) {
    sxy += cross(k);
    sxx += std::norm(fa[k]);
    syy += std::norm(fb[k]);
  }
  e.quality = (sxx > 0.0 && syy > 0.0) ? std::min(1.0, std::norm(sxy) / (sxx * syy)) : 0.0;
  return e;
}

std::vector<PhaseEstimate> track_phase_shift_serial(const UniformSignal& a, const UniformSignal& b,
                                                    double window, double step, Band band) {
  const WindowGrid g = window_grid(a, b, window, step, band);
  std::vector<PhaseEstimate> track;
  track.reserve(g.count);
  for (std::size_t i = 0; i < g.count; ++i) track.push_back(estimate_window(a, b, g, i, band));
  return track;
}

std::vector<PhaseEstimate> track_phase_shift(const UniformSignal& a, const UniformSignal& b,
                                             double window, double step, Band band) {
  const WindowGrid g = window_grid(a, b, window, step, band);
  std::vector<PhaseEstimate> track(g.count);
  std::exception_ptr failure;
  const auto n = static_cast<std::ptrdiff_t>(g.count);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      track[static_cast<std::size_t>(i)] = estimate_window(a, b, g, static_cast<std::size_t>(i), band);
    } catch (...) {
#pragma omp critical(rppg_track_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return track;
}

PhaseEstimate median_estimate(const std::vector<PhaseEstimate>& track) {
  if (track.empty()) throw std::invalid_argument("median estimate: empty track");
  std::vector<double> t, shift, freq, quality;
  for (const auto& e : track) {
    t.push_back(e.time);
    shift.push_back(e.shift_seconds);
    freq.push_back(e.dominant_freq);
    quality.push_back(e.quality);
  }
  PhaseEstimate m;
  m.time = median_of(t);
  m.shift_seconds = median_of(shift);
  m.dominant_freq = median_of(freq);
  m.quality = median_of(quality);
  m.shift_degrees = m.shift_seconds * m.dominant_freq * 360.0;
  return m;
}

double seconds_to_degrees(double shift_seconds, double heart_rate_bpm) {
  if (!(heart_rate_bpm > 0.0)) throw std::invalid_argument("heart rate must be positive");
  return shift_seconds * (heart_rate_bpm / 60.0) * 360.0;
}

double degrees_to_seconds(double angle_degrees, double heart_rate_bpm) {
  if (!(heart_rate_bpm > 0.0)) throw std::invalid_argument("heart rate must be positive");
  return angle_degrees / 360.0 / (heart_rate_bpm / 60.0);
}

AxisShiftReport axis_shift_report(const RegionSignals& regions, double rate, Band band) {
  for (Region r : kAllRegions) {
    if (regions.at(r).timestamps() != regions.top.timestamps()) {
      throw std::invalid_argument("axis report: regions must share frame timestamps");
    }
  }
  const UniformSignal top = resample_aware(regions.top, rate);
  const UniformSignal bottom = resample_aware(regions.bottom, rate);
  const UniformSignal left = resample_aware(regions.left, rate);
  const UniformSignal right = resample_aware(regions.right, rate);
  return {estimate_phase_shift(bottom, top, band), estimate_phase_shift(right, left, band)};
}

std::string format_axis_report(const AxisShiftReport& report, double reference_bpm) {
  std::ostringstream out;
  out << "reference_bpm=" << io::format_double(reference_bpm) << '\n';
  auto axis = [&](std::string_view name, const PhaseEstimate& e) {
    out << name << "_shift_seconds=" << io::format_double(e.shift_seconds) << '\n'
        << name << "_shift_degrees=" << io::format_double(seconds_to_degrees(e.shift_seconds, reference_bpm)) << '\n'
        << name << "_dominant_freq_hz=" << io::format_double(e.dominant_freq) << '\n'
        << name << "_coherence=" << io::format_double(e.quality) << '\n'
        << name << "_low_quality=" << (e.low_quality() ? 1 : 0) << '\n';
  };
  axis("vertical", report.vertical);
  axis("horizontal", report.horizontal);
  return out.str();
}

}  // namespace rppg
