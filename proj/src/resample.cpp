#include "rppg/resample.hpp"

#include "rppg/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace rppg {
namespace {

void check_rate(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw std::invalid_argument("resample: rate must be positive, got " + std::to_string(rate));
  }
}

}  // namespace

std::size_t grid_size(double start, double end, double rate) {
  check_rate(rate);
  if (end < start) return 0;
  // The slack absorbs rounding in spans that are an exact multiple of 1/rate.
  return static_cast<std::size_t>(std::floor((end - start) * rate + 1e-9)) + 1;
}

UniformSignal resample_on_grid(const TimestampedSignal& sig, double start, double rate,
                               std::size_t count) {
  check_rate(rate);
  if (count < 2) throw std::invalid_argument("resample: output grid needs at least 2 samples");
  const double last = start + static_cast<double>(count - 1) / rate;
  const double slack = 1e-9 * std::max(1.0, sig.end_time() - sig.start_time());
  if (start < sig.start_time() - slack || last > sig.end_time() + slack) {
    throw std::invalid_argument("resample: output grid leaves the signal's time span");
  }
  std::vector<double> out(count);
  kernels::interpolate_linear(sig.timestamps(), sig.values(), start, rate, out);
  return UniformSignal(start, rate, std::move(out));
}

UniformSignal resample_aware(const TimestampedSignal& sig, double rate) {
  const std::size_t count = grid_size(sig.start_time(), sig.end_time(), rate);
  return resample_on_grid(sig, sig.start_time(), rate, count);
}

TimestampedSignal synthesize_uniform_timestamps(const TimestampedSignal& sig) {
  const auto& t = sig.timestamps();
  const std::size_t n = t.size();
  const double first = t.front();
  const double span = t.back() - first;
  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) {
    grid[i] = first + span * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  grid.back() = t.back();

  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(grid[i] - t[i]));
  if (worst <= 1e-12 * span) return sig;
  return TimestampedSignal(std::move(grid), sig.values());
}

UniformSignal resample_naive(const TimestampedSignal& sig, double rate) {
  return resample_aware(synthesize_uniform_timestamps(sig), rate);
}

DiffMetrics amplitude_difference(const UniformSignal& a, const UniformSignal& b) {
  if (a.sample_rate() != b.sample_rate()) {
    throw std::invalid_argument("amplitude difference: sample rates differ");
  }
  if (a.size() != b.size()) {
    throw std::invalid_argument("amplitude difference: lengths differ (" +
                                std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
  }
  return diff_metrics(a.values(), b.values());
}

}  // namespace rppg
