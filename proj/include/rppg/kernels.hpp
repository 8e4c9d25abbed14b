#pragma once

// Data-parallel inner loops. Every kernel has a straightforward serial
// reference next to the OpenMP version; both produce bitwise identical output
// and the serial one is kept for tests and benchmarks.

#include <cstddef>
#include <span>

namespace rppg::kernels {

// Piecewise-linear interpolation of (knot_t, knot_v) at start + k / rate for
// k in [0, out.size()). Knot times must be strictly increasing and every query
// must lie in [knot_t.front(), knot_t.back()] up to rounding; queries that
// overshoot by rounding are clamped onto the end knots.
void interpolate_linear_serial(std::span<const double> knot_t, std::span<const double> knot_v,
                               double start, double rate, std::span<double> out);
void interpolate_linear(std::span<const double> knot_t, std::span<const double> knot_v,
                        double start, double rate, std::span<double> out);

// out[i] = mean_j interp(frame_t[i] + offsets[j]) over the uniformly sampled
// source (source_start, source_rate, source_v).
void region_average_serial(std::span<const double> source_v, double source_start,
                           double source_rate, std::span<const double> frame_t,
                           std::span<const double> offsets, std::span<double> out);
void region_average(std::span<const double> source_v, double source_start, double source_rate,
                    std::span<const double> frame_t, std::span<const double> offsets,
                    std::span<double> out);

// Evaluates a uniformly sampled source by linear interpolation at time t.
// t must lie within the source span (clamped for rounding).
double sample_uniform(std::span<const double> source_v, double source_start, double source_rate,
                      double t);

}  // namespace rppg::kernels
