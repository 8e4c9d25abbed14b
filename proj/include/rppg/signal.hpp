#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace rppg {

// Intensity samples stored together with their (possibly irregular) capture
// times. Timestamps are finite and strictly increasing; at least two samples.
class TimestampedSignal {
public:
  TimestampedSignal(std::vector<double> timestamps, std::vector<double> values);

  const std::vector<double>& timestamps() const { return timestamps_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double start_time() const { return timestamps_.front(); }
  double end_time() const { return timestamps_.back(); }

  bool operator==(const TimestampedSignal&) const = default;

private:
  std::vector<double> timestamps_;
  std::vector<double> values_;
};

// Regularly sampled signal. Sample k sits at start_time + k / sample_rate.
class UniformSignal {
public:
  UniformSignal(double start_time, double sample_rate, std::vector<double> values);

  double start_time() const { return start_time_; }
  double sample_rate() const { return sample_rate_; }
  const std::vector<double>& values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  double time_at(std::size_t k) const {
    return start_time_ + static_cast<double>(k) / sample_rate_;
  }
  double end_time() const { return time_at(values_.size() - 1); }
  double duration() const { return static_cast<double>(values_.size()) / sample_rate_; }

  // Samples [first, first + count) as a new signal with the shifted start time.
  UniformSignal slice(std::size_t first, std::size_t count) const;

  TimestampedSignal to_timestamped() const;

  bool operator==(const UniformSignal&) const = default;

private:
  double start_time_;
  double sample_rate_;
  std::vector<double> values_;
};

enum class Taper { rectangular, hann };

Taper parse_taper(std::string_view name);
std::string_view taper_name(Taper taper);

// One-sided power spectrum. Bin k is at frequency k * frequency_step.
struct PowerSpectrum {
  double frequency_step = 0.0;
  std::vector<double> power;
  Taper taper = Taper::rectangular;

  double frequency_at(std::size_t k) const { return static_cast<double>(k) * frequency_step; }
  double max_frequency() const { return frequency_at(power.empty() ? 0 : power.size() - 1); }
};

struct DiffMetrics {
  double max_abs = 0.0;
  double rms = 0.0;
  double relative_rms = 0.0;  // percent of the mean-removed reference RMS
};

// Element-wise difference metrics of two equally long series. The reference
// for relative_rms is `reference` with its mean removed. A zero reference with
// a nonzero difference yields +inf.
DiffMetrics diff_metrics(std::span<const double> reference, std::span<const double> other);

}  // namespace rppg
