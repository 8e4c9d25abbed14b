#include "rppg/capture.hpp"

#include "rppg/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>

namespace rppg {

Waveform::Waveform(UniformSignal source) : source_(std::move(source)) {}

double Waveform::operator()(double t) const {
  // Half a microsample of slack for times computed as sums of offsets.
  const double slack = 1e-6 / source_.sample_rate();
  if (t < domain_start() - slack || t > domain_end() + slack) {
    throw std::out_of_range("waveform: t = " + std::to_string(t) + " s outside [" +
                            std::to_string(domain_start()) + ", " +
                            std::to_string(domain_end()) + "]");
  }
  return kernels::sample_uniform(source_.values(), source_.start_time(), source_.sample_rate(), t);
}

UniformSignal sum_of_sines(std::span<const SineComponent> components, double duration,
                           double rate) {
  if (!(rate > 0.0)) throw std::invalid_argument("sum of sines: rate must be positive");
  if (!(duration > 0.0)) throw std::invalid_argument("sum of sines: duration must be positive");
  if (components.empty()) throw std::invalid_argument("sum of sines: no components");
  for (const auto& c : components) {
    if (!(c.frequency >= 0.0) || !std::isfinite(c.amplitude) || !std::isfinite(c.phase)) {
      throw std::invalid_argument("sum of sines: invalid component");
    }
  }
  const auto n = static_cast<std::size_t>(std::llround(duration * rate));
  if (n < 2) throw std::invalid_argument("sum of sines: duration shorter than two samples");
  std::vector<double> v(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) / rate;
    double s = 0.0;
    for (const auto& c : components) {
      s += c.amplitude * std::sin(2.0 * std::numbers::pi * c.frequency * t + c.phase);
    }
    v[k] = s;
  }
  return UniformSignal(0.0, rate, std::move(v));
}

UniformSignal sine(double frequency, double amplitude, double duration, double rate) {
  const SineComponent c{frequency, amplitude, 0.0};
  return sum_of_sines(std::span(&c, 1), duration, rate);
}

UniformSignal synthetic_ppg(double bpm, double duration, double rate) {
  if (!(bpm > 0.0)) throw std::invalid_argument("synthetic ppg: bpm must be positive");
  const double f0 = bpm / 60.0;
  constexpr double amplitudes[] = {1.0, 0.4, 0.15, 0.05};
  constexpr double phases[] = {0.0, -1.2, -2.4, -3.6};
  std::vector<SineComponent> parts;
  for (std::size_t h = 0; h < std::size(amplitudes); ++h) {
    parts.push_back({f0 * static_cast<double>(h + 1), amplitudes[h], phases[h]});
  }

  // Peak-to-peak over one period on a fine grid.
  double lo = 0.0;
  double hi = 0.0;
  constexpr int probes = 4096;
  for (int i = 0; i < probes; ++i) {
    const double t = static_cast<double>(i) / (probes * f0);
    double s = 0.0;
    for (const auto& p : parts) s += p.amplitude * std::sin(2.0 * std::numbers::pi * p.frequency * t + p.phase);
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  for (auto& p : parts) p.amplitude /= (hi - lo);
  return sum_of_sines(parts, duration, rate);
}

std::string_view jitter_kind_name(const Jitter& jitter) {
  struct Visitor {
    std::string_view operator()(const NoJitter&) const { return "none"; }
    std::string_view operator()(const UniformJitter&) const { return "uniform"; }
    std::string_view operator()(const GaussianJitter&) const { return "gaussian"; }
    std::string_view operator()(const ExplicitTimestamps&) const { return "explicit"; }
  };
  return std::visit(Visitor{}, jitter);
}

ScanAxis parse_scan_axis(std::string_view name) {
  if (name == "vertical") return ScanAxis::vertical;
  if (name == "horizontal") return ScanAxis::horizontal;
  throw std::invalid_argument("unknown scan axis '" + std::string(name) +
                              "' (expected vertical or horizontal)");
}

std::string_view scan_axis_name(ScanAxis axis) {
  return axis == ScanAxis::vertical ? "vertical" : "horizontal";
}

ScanAxis rotated(ScanAxis axis) {
  return axis == ScanAxis::vertical ? ScanAxis::horizontal : ScanAxis::vertical;
}

namespace {

void check_strictly_increasing(const std::vector<double>& t, std::string_view what) {
  if (t.size() < 2) throw std::invalid_argument(std::string(what) + ": need at least 2 timestamps");
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!std::isfinite(t[i]) || (i > 0 && !(t[i] > t[i - 1]))) {
      throw std::invalid_argument(std::string(what) + ": timestamps not strictly increasing at index " +
                                  std::to_string(i));
    }
  }
}

}  // namespace

void CameraModel::validate() const {
  if (!(nominal_fps > 0.0) || !std::isfinite(nominal_fps)) {
    throw std::invalid_argument("camera: fps must be positive");
  }
  if (!(readout_time >= 0.0) || readout_time > frame_interval() * (1.0 + 1e-12)) {
    throw std::invalid_argument("camera: readout_time must lie in [0, 1/fps]");
  }
  if (width < 4 || height < 4) throw std::invalid_argument("camera: resolution must be at least 4x4");

  const double half = 0.5 * frame_interval();
  if (const auto* u = std::get_if<UniformJitter>(&jitter)) {
    if (!(u->half_width >= 0.0) || u->half_width >= half) {
      throw std::invalid_argument("camera: uniform jitter must be in [0, half the frame interval)");
    }
  } else if (const auto* g = std::get_if<GaussianJitter>(&jitter)) {
    if (!(g->sigma >= 0.0) || g->sigma >= half) {
      throw std::invalid_argument("camera: gaussian jitter sigma must be in [0, half the frame interval)");
    }
  } else if (const auto* e = std::get_if<ExplicitTimestamps>(&jitter)) {
    check_strictly_increasing(e->timestamps, "camera: explicit timestamps");
  }
}

std::string_view region_name(Region region) {
  switch (region) {
    case Region::top: return "top";
    case Region::bottom: return "bottom";
    case Region::left: return "left";
    case Region::right: return "right";
  }
  return "unknown";
}

const Rect& RegionLayout::at(Region region) const {
  switch (region) {
    case Region::top: return top;
    case Region::bottom: return bottom;
    case Region::left: return left;
    case Region::right: return right;
  }
  throw std::invalid_argument("unknown region");
}

Rect& RegionLayout::at(Region region) {
  return const_cast<Rect&>(std::as_const(*this).at(region));
}

RegionLayout RegionLayout::halves(int width, int height) {
  const int half_h = height / 2;
  const int half_w = width / 2;
  return {
      .top = {0, 0, width, half_h},
      .bottom = {0, half_h, width, height - half_h},
      .left = {0, 0, half_w, height},
      .right = {half_w, 0, width - half_w, height},
  };
}

void RegionLayout::validate(const CameraModel& model) const {
  for (Region r : kAllRegions) {
    const Rect& rect = at(r);
    if (rect.width <= 0 || rect.height <= 0 || rect.x < 0 || rect.y < 0 ||
        rect.x + rect.width > model.width || rect.y + rect.height > model.height) {
      throw std::invalid_argument("region layout: " + std::string(region_name(r)) +
                                  " rectangle is empty or leaves the frame");
    }
  }
}

const TimestampedSignal& RegionSignals::at(Region region) const {
  switch (region) {
    case Region::top: return top;
    case Region::bottom: return bottom;
    case Region::left: return left;
    case Region::right: return right;
  }
  throw std::invalid_argument("unknown region");
}

std::vector<double> generate_frame_timestamps(const CameraModel& model, double duration,
                                              std::uint64_t seed) {
  model.validate();
  if (const auto* e = std::get_if<ExplicitTimestamps>(&model.jitter)) return e->timestamps;

  const double interval = model.frame_interval();
  if (!(duration > 2.0 * interval)) {
    throw std::invalid_argument("frame timestamps: duration must exceed two frame intervals");
  }
  const auto n = static_cast<std::size_t>(std::ceil(duration * model.nominal_fps - 1e-9));

  std::mt19937_64 rng(seed);
  std::vector<double> dev(n, 0.0);
  if (const auto* u = std::get_if<UniformJitter>(&model.jitter)) {
    std::uniform_real_distribution<double> dist(-u->half_width, u->half_width);
    for (auto& d : dev) d = dist(rng);
  } else if (const auto* g = std::get_if<GaussianJitter>(&model.jitter)) {
    std::normal_distribution<double> dist(0.0, g->sigma);
    const double limit = 0.5 * interval;
    for (auto& d : dev) {
      do {
        d = dist(rng);
      } while (std::abs(d) >= limit);
    }
  }
  dev.front() = 0.0;
  dev.back() = 0.0;

  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = static_cast<double>(i) / model.nominal_fps + dev[i];
  return t;
}

double scan_offset(const CameraModel& model, int row, int col) {
  if (row < 0 || row >= model.height || col < 0 || col >= model.width) {
    throw std::out_of_range("scan offset: pixel (" + std::to_string(row) + ", " +
                            std::to_string(col) + ") outside the frame");
  }
  if (model.scan_axis == ScanAxis::vertical) {
    return model.readout_time * (static_cast<double>(row) / static_cast<double>(model.height - 1));
  }
  return model.readout_time * (static_cast<double>(col) / static_cast<double>(model.width - 1));
}

std::vector<double> region_offsets(const CameraModel& model, const Rect& rect,
                                   std::size_t samples) {
  if (samples == 0) throw std::invalid_argument("region offsets: need at least one sample");
  const bool vertical = model.scan_axis == ScanAxis::vertical;
  const int first = vertical ? rect.y : rect.x;
  const int lines = vertical ? rect.height : rect.width;
  const int extent = vertical ? model.height : model.width;
  const double per_line = model.readout_time / static_cast<double>(extent - 1);

  std::vector<double> offsets;
  if (static_cast<std::size_t>(lines) <= samples) {
    for (int i = 0; i < lines; ++i) offsets.push_back(per_line * static_cast<double>(first + i));
  } else if (samples == 1) {
    offsets.push_back(per_line * (first + 0.5 * (lines - 1)));
  } else {
    const double span = static_cast<double>(lines - 1);
    for (std::size_t j = 0; j < samples; ++j) {
      const double pos = first + span * static_cast<double>(j) / static_cast<double>(samples - 1);
      offsets.push_back(per_line * pos);
    }
  }
  return offsets;
}

RegionSignals capture_region_signals(const Waveform& wave, const CameraModel& model,
                                     const RegionLayout& layout,
                                     const std::vector<double>& timestamps,
                                     std::size_t offset_samples) {
  model.validate();
  layout.validate(model);
  check_strictly_increasing(timestamps, "capture");

  const auto& src = wave.source();
  auto capture = [&](Region region) {
    const auto offsets = region_offsets(model, layout.at(region), offset_samples);
    const auto [lo, hi] = std::minmax_element(offsets.begin(), offsets.end());
    if (!wave.contains(timestamps.front() + *lo) || !wave.contains(timestamps.back() + *hi)) {
      throw std::out_of_range("capture: frames plus readout exceed the waveform domain [" +
                              std::to_string(wave.domain_start()) + ", " +
                              std::to_string(wave.domain_end()) + "] s");
    }
    std::vector<double> values(timestamps.size());
    kernels::region_average(src.values(), src.start_time(), src.sample_rate(), timestamps, offsets,
                            values);
    return TimestampedSignal(timestamps, std::move(values));
  };
  return RegionSignals{capture(Region::top), capture(Region::bottom), capture(Region::left),
                       capture(Region::right)};
}

}  // namespace rppg
