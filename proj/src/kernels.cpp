#include "rppg/kernels.hpp"

#include <algorithm>
#include <cmath>

#include <omp.h>

namespace rppg::kernels {
namespace {

double lerp_segment(std::span<const double> knot_t, std::span<const double> knot_v,
                    std::size_t j, double t) {
  double w = (t - knot_t[j]) / (knot_t[j + 1] - knot_t[j]);
  w = std::clamp(w, 0.0, 1.0);
  return (1.0 - w) * knot_v[j] + w * knot_v[j + 1];
}

// Last segment index j with knot_t[j] <= t, limited to [0, n - 2].
std::size_t find_segment(std::span<const double> knot_t, double t) {
  const auto it = std::upper_bound(knot_t.begin(), knot_t.end(), t);
  const std::size_t after = static_cast<std::size_t>(it - knot_t.begin());
  if (after == 0) return 0;
  return std::min(after - 1, knot_t.size() - 2);
}

}  // namespace

void interpolate_linear_serial(std::span<const double> knot_t, std::span<const double> knot_v,
                               double start, double rate, std::span<double> out) {
  const std::size_t last_segment = knot_t.size() - 2;
  std::size_t j = 0;
  for (std::size_t k = 0; k < out.size(); ++k) {
    const double t = start + static_cast<double>(k) / rate;
    while (j < last_segment && knot_t[j + 1] <= t) ++j;
    out[k] = lerp_segment(knot_t, knot_v, j, t);
  }
}

void interpolate_linear(std::span<const double> knot_t, std::span<const double> knot_v,
                        double start, double rate, std::span<double> out) {
  const std::size_t last_segment = knot_t.size() - 2;
  const std::size_t n = out.size();
#pragma omp parallel
  {
    // Contiguous chunk per thread: one search at its first point, then the
    // same forward walk as the serial kernel.
    const auto threads = static_cast<std::size_t>(omp_get_num_threads());
    const auto id = static_cast<std::size_t>(omp_get_thread_num());
    const std::size_t lo = n * id / threads;
    const std::size_t hi = n * (id + 1) / threads;
    if (lo < hi) {
      std::size_t j = find_segment(knot_t, start + static_cast<double>(lo) / rate);
      for (std::size_t k = lo; k < hi; ++k) {
        const double t = start + static_cast<double>(k) / rate;
        while (j < last_segment && knot_t[j + 1] <= t) ++j;
        out[k] = lerp_segment(knot_t, knot_v, j, t);
      }
    }
  }
}

double sample_uniform(std::span<const double> source_v, double source_start, double source_rate,
                      double t) {
  const double last = static_cast<double>(source_v.size() - 1);
  const double p = std::clamp((t - source_start) * source_rate, 0.0, last);
  const auto i = std::min(static_cast<std::size_t>(p), source_v.size() - 2);
  const double f = p - static_cast<double>(i);
  return (1.0 - f) * source_v[i] + f * source_v[i + 1];
}

void region_average_serial(std::span<const double> source_v, double source_start,
                           double source_rate, std::span<const double> frame_t,
                           std::span<const double> offsets, std::span<double> out) {
  const double m = static_cast<double>(offsets.size());
  for (std::size_t i = 0; i < frame_t.size(); ++i) {
    double sum = 0.0;
    for (double off : offsets) {
      sum += sample_uniform(source_v, source_start, source_rate, frame_t[i] + off);
    }
    out[i] = sum / m;
  }
}

void region_average(std::span<const double> source_v, double source_start, double source_rate,
                    std::span<const double> frame_t, std::span<const double> offsets,
                    std::span<double> out) {
  const double m = static_cast<double>(offsets.size());
  const auto n = static_cast<std::ptrdiff_t>(frame_t.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    double sum = 0.0;
    for (double off : offsets) {
      sum += sample_uniform(source_v, source_start, source_rate, frame_t[ui] + off);
    }
    out[ui] = sum / m;
  }
}

}  // namespace rppg::kernels
