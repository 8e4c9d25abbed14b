#pragma once

#include "rppg/signal.hpp"

#include <cstddef>

namespace rppg {

inline constexpr double kDefaultResampleRate = 240.0;

// Number of samples of a `rate` grid anchored at `start` that fit in
// [start, end] (no extrapolation past `end`).
std::size_t grid_size(double start, double end, double rate);

// Linear interpolation of `sig` evaluated on the uniform grid
// start, start + 1/rate, ... over `count` samples. Every grid point must lie
// inside the signal's time span.
UniformSignal resample_on_grid(const TimestampedSignal& sig, double start, double rate,
                               std::size_t count);

// Timestamp-aware ("good") resampling: interpolates using the actual sample
// times. The grid starts at the first timestamp and stops at the last one.
UniformSignal resample_aware(const TimestampedSignal& sig, double rate = kDefaultResampleRate);

// Replaces the timestamps by an equally spaced grid with the same first and
// last entries. Timestamps that already lie on that grid (to 1e-12 relative
// to the span) are returned unchanged.
TimestampedSignal synthesize_uniform_timestamps(const TimestampedSignal& sig);

// Timestamp-ignorant ("bad") resampling: assumes a constant frame rate
// between the first and the last frame.
UniformSignal resample_naive(const TimestampedSignal& sig, double rate = kDefaultResampleRate);

// Element-wise difference of two signals on the same grid. relative_rms is
// taken against `a` with its mean removed.
DiffMetrics amplitude_difference(const UniformSignal& a, const UniformSignal& b);

}  // namespace rppg
