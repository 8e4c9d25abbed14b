#pragma once

#include "rppg/capture.hpp"
#include "rppg/signal.hpp"
#include "rppg/spectrum.hpp"

#include <string>
#include <vector>

namespace rppg {

inline constexpr double kCoherenceFlagThreshold = 0.5;

// Time shift between two signals at their common dominant frequency.
// Positive shift_seconds means the second signal lags the first, i.e.
// b(t) = a(t - shift). shift_seconds lies in (-T/2, T/2] with T = 1 / dominant_freq.
struct PhaseEstimate {
  double time = 0.0;  // window center for tracked estimates, signal center otherwise
  double shift_seconds = 0.0;
  double dominant_freq = 0.0;
  double shift_degrees = 0.0;
  double quality = 0.0;  // magnitude-squared coherence around the peak, [0, 1]

  bool low_quality() const { return quality < kCoherenceFlagThreshold; }
};

// Cross-spectral phase at the peak of the averaged (hann-tapered) power of the
// two signals inside `band`, converted to time with the peak frequency refined
// between bins. Throws std::invalid_argument on mismatched grids,
// too-short inputs, or when the band holds no power.
PhaseEstimate estimate_phase_shift(const UniformSignal& a, const UniformSignal& b, Band band);

// One estimate per window position, windows of `window` seconds advanced by
// `step` seconds; each estimate is stamped with its window center.
std::vector<PhaseEstimate> track_phase_shift(const UniformSignal& a, const UniformSignal& b,
                                             double window, double step, Band band);
std::vector<PhaseEstimate> track_phase_shift_serial(const UniformSignal& a, const UniformSignal& b,
                                                    double window, double step, Band band);

// Median of the shift values of a track (the dominant frequency and quality of
// the result are medians as well).
PhaseEstimate median_estimate(const std::vector<PhaseEstimate>& track);

double seconds_to_degrees(double shift_seconds, double heart_rate_bpm);
double degrees_to_seconds(double angle_degrees, double heart_rate_bpm);

struct AxisShiftReport {
  // vertical = shift of top relative to bottom, horizontal = shift of left
  // relative to right. Both are positive when the second-named region (bottom,
  // right) is read out later, because later readout makes a region lead.
  PhaseEstimate vertical;
  PhaseEstimate horizontal;
};

AxisShiftReport axis_shift_report(const RegionSignals& regions, double rate, Band band);

// Flat key=value text with shifts in seconds, degrees at `reference_bpm`
// and coherence per axis.
std::string format_axis_report(const AxisShiftReport& report, double reference_bpm);

}  // namespace rppg
