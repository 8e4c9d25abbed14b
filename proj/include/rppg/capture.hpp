#pragma once

#include "rppg/signal.hpp"

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <variant>
#include <vector>

namespace rppg {

inline constexpr double kDefaultSourceRate = 44100.0;

// A spatially uniform light source driven by a sampled waveform. Evaluation
// between source samples is linear; queries outside the sampled span throw
// std::out_of_range.
class Waveform {
public:
  explicit Waveform(UniformSignal source);

  const UniformSignal& source() const { return source_; }
  double domain_start() const { return source_.start_time(); }
  double domain_end() const { return source_.end_time(); }
  bool contains(double t) const { return t >= domain_start() && t <= domain_end(); }
  double operator()(double t) const;

private:
  UniformSignal source_;
};

struct SineComponent {
  double frequency = 1.0;  // Hz
  double amplitude = 1.0;
  double phase = 0.0;  // radians
};

// Samples of sum_i a_i sin(2 pi f_i t + phi_i) on [0, duration) at `rate`.
UniformSignal sum_of_sines(std::span<const SineComponent> components, double duration,
                           double rate);
UniformSignal sine(double frequency, double amplitude, double duration, double rate);

// Pulse-like periodic waveform at a fixed beat rate built from four harmonics
// (relative amplitudes 1, 0.4, 0.15, 0.05, phases 0, -1.2, -2.4, -3.6 rad).
// Fundamental bpm / 60 Hz, unit peak-to-peak.
UniformSignal synthetic_ppg(double bpm, double duration, double rate);

struct NoJitter {};
struct UniformJitter {
  double half_width = 0.0;  // seconds; deviations drawn from [-w, w]
};
struct GaussianJitter {
  double sigma = 0.0;  // seconds; draws truncated to (-T/2, T/2)
};
struct ExplicitTimestamps {
  std::vector<double> timestamps;
};
using Jitter = std::variant<NoJitter, UniformJitter, GaussianJitter, ExplicitTimestamps>;

std::string_view jitter_kind_name(const Jitter& jitter);

enum class ScanAxis { vertical, horizontal };

ScanAxis parse_scan_axis(std::string_view name);
std::string_view scan_axis_name(ScanAxis axis);
ScanAxis rotated(ScanAxis axis);

struct CameraModel {
  double nominal_fps = 30.0;
  Jitter jitter = NoJitter{};
  double readout_time = 1.0 / 30.0;
  ScanAxis scan_axis = ScanAxis::vertical;
  int width = 640;
  int height = 480;

  double frame_interval() const { return 1.0 / nominal_fps; }

  // Throws std::invalid_argument on violated invariants.
  void validate() const;
};

// Half-open pixel rectangle [x, x + width) x [y, y + height).
struct Rect {
  int x = 0;
  int y = 0;
  int width = 0;
  int height = 0;

  bool operator==(const Rect&) const = default;
};

enum class Region { top, bottom, left, right };
inline constexpr Region kAllRegions[] = {Region::top, Region::bottom, Region::left, Region::right};
std::string_view region_name(Region region);

struct RegionLayout {
  Rect top;
  Rect bottom;
  Rect left;
  Rect right;

  const Rect& at(Region region) const;
  Rect& at(Region region);

  // Top/bottom halves and left/right halves of a width x height frame.
  static RegionLayout halves(int width, int height);

  void validate(const CameraModel& model) const;

  bool operator==(const RegionLayout&) const = default;
};

struct RegionSignals {
  TimestampedSignal top;
  TimestampedSignal bottom;
  TimestampedSignal left;
  TimestampedSignal right;

  const TimestampedSignal& at(Region region) const;
};

// Frame presentation times over [0, duration). Frame i sits at i / fps plus an
// independent per-frame deviation; the first and the last frame stay on the
// nominal grid so the mean interval is exactly 1 / fps. Explicit timestamp
// lists are validated and returned as given.
std::vector<double> generate_frame_timestamps(const CameraModel& model, double duration,
                                              std::uint64_t seed);

// Readout delay of a pixel relative to the frame timestamp.
double scan_offset(const CameraModel& model, int row, int col);

inline constexpr std::size_t kDefaultOffsetSamples = 32;

// Scan offsets representing a region: at most `samples` evenly spread
// positions along the scan axis from the first to the last scanned line of the
// rectangle, or every line when the rectangle has fewer. Their mean equals the
// pixel-mean offset of the rectangle.
std::vector<double> region_offsets(const CameraModel& model, const Rect& rect,
                                   std::size_t samples = kDefaultOffsetSamples);

// Average region brightness per frame: mean over the region's scan offsets of
// wave(t + offset). Throws std::out_of_range when a frame plus its readout
// leaves the waveform's domain.
RegionSignals capture_region_signals(const Waveform& wave, const CameraModel& model,
                                     const RegionLayout& layout,
                                     const std::vector<double>& timestamps,
                                     std::size_t offset_samples = kDefaultOffsetSamples);

}  // namespace rppg
