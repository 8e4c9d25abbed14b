#include "rppg/signal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace rppg {

TimestampedSignal::TimestampedSignal(std::vector<double> timestamps, std::vector<double> values)
    : timestamps_(std::move(timestamps)), values_(std::move(values)) {
  if (timestamps_.size() != values_.size()) {
    throw std::invalid_argument("timestamped signal: " + std::to_string(timestamps_.size()) +
                                " timestamps but " + std::to_string(values_.size()) + " values");
  }
  if (timestamps_.size() < 2) {
    throw std::invalid_argument("timestamped signal: need at least 2 samples");
  }
  for (std::size_t i = 0; i < timestamps_.size(); ++i) {
    if (!std::isfinite(timestamps_[i]) || !std::isfinite(values_[i])) {
      throw std::invalid_argument("timestamped signal: non-finite sample at index " +
                                  std::to_string(i));
    }
    if (i > 0 && !(timestamps_[i] > timestamps_[i - 1])) {
      throw std::invalid_argument("timestamped signal: timestamps not strictly increasing at index " +
                                  std::to_string(i));
    }
  }
}

UniformSignal::UniformSignal(double start_time, double sample_rate, std::vector<double> values)
    : start_time_(start_time), sample_rate_(sample_rate), values_(std::move(values)) {
  if (!(sample_rate_ > 0.0) || !std::isfinite(sample_rate_)) {
    throw std::invalid_argument("uniform signal: sample rate must be positive");
  }
  if (!std::isfinite(start_time_)) {
    throw std::invalid_argument("uniform signal: start time must be finite");
  }
  if (values_.size() < 2) {
    throw std::invalid_argument("uniform signal: need at least 2 samples");
  }
  if (!std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); })) {
    throw std::invalid_argument("uniform signal: non-finite value");
  }
}

UniformSignal UniformSignal::slice(std::size_t first, std::size_t count) const {
  if (first + count > values_.size()) {
    throw std::out_of_range("uniform signal: slice past the end");
  }
  std::vector<double> part(values_.begin() + static_cast<std::ptrdiff_t>(first),
                           values_.begin() + static_cast<std::ptrdiff_t>(first + count));
  return UniformSignal(time_at(first), sample_rate_, std::move(part));
}

TimestampedSignal UniformSignal::to_timestamped() const {
  std::vector<double> t(values_.size());
  for (std::size_t k = 0; k < t.size(); ++k) t[k] = time_at(k);
  return TimestampedSignal(std::move(t), values_);
}

Taper parse_taper(std::string_view name) {
  if (name == "rectangular") return Taper::rectangular;
  if (name == "hann") return Taper::hann;
  throw std::invalid_argument("unknown taper '" + std::string(name) +
                              "' (expected rectangular or hann)");
}

std::string_view taper_name(Taper taper) {
  switch (taper) {
    case Taper::rectangular: return "rectangular";
    case Taper::hann: return "hann";
  }
  return "unknown";
}

DiffMetrics diff_metrics(std::span<const double> reference, std::span<const double> other) {
  if (reference.size() != other.size()) {
    throw std::invalid_argument("diff metrics: length mismatch (" +
                                std::to_string(reference.size()) + " vs " +
                                std::to_string(other.size()) + ")");
  }
  if (reference.empty()) throw std::invalid_argument("diff metrics: empty input");

  const double n = static_cast<double>(reference.size());
  double mean = 0.0;
  for (double v : reference) mean += v;
  mean /= n;

  DiffMetrics m;
  double diff_sq = 0.0;
  double ref_sq = 0.0;
  for (std::size_t i = 0; i < reference.size(); ++i) {
    const double d = reference[i] - other[i];
    m.max_abs = std::max(m.max_abs, std::abs(d));
    diff_sq += d * d;
    const double r = reference[i] - mean;
    ref_sq += r * r;
  }
  m.rms = std::sqrt(diff_sq / n);
  const double ref_rms = std::sqrt(ref_sq / n);
  if (m.rms == 0.0) {
    m.relative_rms = 0.0;
  } else if (ref_rms == 0.0) {
    m.relative_rms = std::numeric_limits<double>::infinity();
  } else {
    m.relative_rms = m.rms / ref_rms * 100.0;
  }
  return m;
}

}  // namespace rppg
