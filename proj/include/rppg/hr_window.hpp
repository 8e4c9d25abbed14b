#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace rppg {

// Annotated heartbeat times in seconds, strictly increasing, at least two.
class BeatSeries {
public:
  explicit BeatSeries(std::vector<double> beat_times);

  const std::vector<double>& times() const { return times_; }
  std::size_t size() const { return times_.size(); }
  double start() const { return times_.front(); }
  double end() const { return times_.back(); }

  BeatSeries shifted(double offset) const;

private:
  std::vector<double> times_;
};

std::vector<double> rr_intervals(const BeatSeries& beats);

struct WindowSpec {
  std::vector<double> sizes{0, 5, 10, 15, 20, 25, 30, 35, 40, 45, 50, 55, 60};
  double step = 5.0;

  void validate() const;
};

struct WindowHr {
  double bpm = 0.0;
  std::size_t beats = 0;
};

// Mean heart rate over the beats inside [start, start + size): 60 (N - 1) / sum RR
// over the N - 1 intervals between consecutive in-window beats. Empty when the
// window holds fewer than two beats.
std::optional<WindowHr> hr_of_window(const BeatSeries& beats, double window_start, double size);

// The zero-size window: a single RR interval.
double hr_of_interval(double rr_seconds);

// |outer - inner| / outer * 100.
double relative_difference(double hr_outer, double hr_inner);

struct Quartiles {
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
};

// Linear-interpolation quantile (the "type 7" definition) of unsorted data.
double quantile(std::vector<double> values, double p);
Quartiles quartiles(const std::vector<double>& values);

struct CellStats {
  double mean = 0.0;
  std::size_t count = 0;
  Quartiles quartiles;
  std::vector<double> samples;  // d-values in window order
};

struct CellKey {
  double outer = 0.0;
  double inner = 0.0;
  auto operator<=>(const CellKey&) const = default;
};

struct SkipTally {
  std::size_t outer_windows = 0;  // outer windows with fewer than two beats
  std::size_t inner_windows = 0;  // inner windows with fewer than two beats
  std::size_t total() const { return outer_windows + inner_windows; }
};

// Lower-triangular table of relative HR differences: one cell per size pair
// (outer > inner) that produced at least one d-value.
struct DiffMatrix {
  std::vector<double> sizes;
  std::map<CellKey, CellStats> cells;
  SkipTally skipped;

  const CellStats* find(double outer, double inner) const;
};

// Outer windows of each size partition the record from its first beat on;
// inner windows slide by spec.step inside each outer window; size 0 compares
// every single RR interval of the outer window.
DiffMatrix window_diff_matrix(const BeatSeries& beats, const WindowSpec& spec);
DiffMatrix window_diff_matrix_serial(const BeatSeries& beats, const WindowSpec& spec);

// Concatenates per-record matrices in the given order; means are therefore
// count-weighted.
DiffMatrix merge_matrices(std::span<const DiffMatrix> matrices);

enum class Grouping { by_pair, by_size_gap };

struct BoxSummary {
  double outer = 0.0;  // by_pair only
  double inner = 0.0;  // by_pair only
  double gap = 0.0;
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  std::size_t count = 0;
};

std::vector<BoxSummary> boxplot_stats(const DiffMatrix& matrix, Grouping grouping);

}  // namespace rppg
