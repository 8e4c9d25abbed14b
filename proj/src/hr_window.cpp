#include "rppg/hr_window.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <string>

namespace rppg {
namespace {

// Slack when deciding whether an inner window still fits its outer window.
constexpr double kFitSlack = 1e-9;

struct PairResult {
  std::vector<double> d;
  SkipTally skipped;
};

// d-values of one (outer, inner) size pair, in window order.
PairResult evaluate_pair(const BeatSeries& beats, const std::vector<double>& rr, double outer,
                         double inner, double step) {
  PairResult result;
  const auto& t = beats.times();
  const double origin = beats.start();
  for (std::size_t k = 0;; ++k) {
    const double start = origin + static_cast<double>(k) * outer;
    if (origin + static_cast<double>(k + 1) * outer > beats.end()) break;
    const auto hr_outer = hr_of_window(beats, start, outer);
    if (!hr_outer) {
      ++result.skipped.outer_windows;
      continue;
    }
    if (inner == 0.0) {
      const double end = start + outer;
      const auto lo = static_cast<std::size_t>(std::lower_bound(t.begin(), t.end(), start) - t.begin());
      const auto hi = static_cast<std::size_t>(std::lower_bound(t.begin(), t.end(), end) - t.begin());
      for (std::size_t j = lo; j + 1 < hi; ++j) {
        result.d.push_back(relative_difference(hr_outer->bpm, hr_of_interval(rr[j])));
      }
      continue;
    }
    for (std::size_t i = 0; static_cast<double>(i) * step + inner <= outer + kFitSlack; ++i) {
      const auto hr_inner = hr_of_window(beats, start + static_cast<double>(i) * step, inner);
      if (!hr_inner) {
        ++result.skipped.inner_windows;
        continue;
      }
      result.d.push_back(relative_difference(hr_outer->bpm, hr_inner->bpm));
    }
  }
  return result;
}

std::vector<CellKey> size_pairs(const WindowSpec& spec) {
  std::vector<CellKey> pairs;
  for (double outer : spec.sizes) {
    for (double inner : spec.sizes) {
      if (outer > inner) pairs.push_back({outer, inner});
    }
  }
  return pairs;
}

void check_record(const BeatSeries& beats, const WindowSpec& spec) {
  spec.validate();
  if (beats.end() - beats.start() < spec.sizes.back()) {
    throw std::invalid_argument("window matrix: record shorter than the largest window");
  }
}

CellStats make_cell(std::vector<double> samples) {
  CellStats cell;
  double sum = 0.0;
  for (double d : samples) sum += d;
  cell.count = samples.size();
  cell.mean = sum / static_cast<double>(samples.size());
  cell.quartiles = quartiles(samples);
  cell.samples = std::move(samples);
  return cell;
}

DiffMatrix assemble(const WindowSpec& spec, const std::vector<CellKey>& pairs,
                    std::vector<PairResult>& results) {
  DiffMatrix m;
  m.sizes = spec.sizes;
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    m.skipped.outer_windows += results[p].skipped.outer_windows;
    m.skipped.inner_windows += results[p].skipped.inner_windows;
    if (!results[p].d.empty()) m.cells.emplace(pairs[p], make_cell(std::move(results[p].d)));
  }
  if (m.cells.empty()) throw std::invalid_argument("window matrix: every window is degenerate");
  return m;
}

}  // namespace

BeatSeries::BeatSeries(std::vector<double> beat_times) : times_(std::move(beat_times)) {
  if (times_.size() < 2) throw std::invalid_argument("beat series: need at least 2 beats");
  for (std::size_t i = 0; i < times_.size(); ++i) {
    if (!std::isfinite(times_[i]) || (i > 0 && !(times_[i] > times_[i - 1]))) {
      throw std::invalid_argument("beat series: beats not strictly increasing at index " +
                                  std::to_string(i));
    }
  }
}

BeatSeries BeatSeries::shifted(double offset) const {
  std::vector<double> t = times_;
  for (double& v : t) v += offset;
  return BeatSeries(std::move(t));
}

std::vector<double> rr_intervals(const BeatSeries& beats) {
  const auto& t = beats.times();
  std::vector<double> rr(t.size() - 1);
  for (std::size_t i = 0; i + 1 < t.size(); ++i) rr[i] = t[i + 1] - t[i];
  return rr;
}

void WindowSpec::validate() const {
  if (sizes.size() < 2) throw std::invalid_argument("window spec: need at least two sizes");
  if (!(step > 0.0)) throw std::invalid_argument("window spec: step must be positive");
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (!(sizes[i] >= 0.0) || !std::isfinite(sizes[i])) {
      throw std::invalid_argument("window spec: sizes must be finite and nonnegative");
    }
    if (i > 0 && !(sizes[i] > sizes[i - 1])) {
      throw std::invalid_argument("window spec: sizes must be strictly ascending");
    }
  }
}

std::optional<WindowHr> hr_of_window(const BeatSeries& beats, double window_start, double size) {
  if (!(size > 0.0)) {
    throw std::invalid_argument("hr of window: size must be positive (use hr_of_interval for 0)");
  }
  const auto& t = beats.times();
  const double end = window_start + size;
  const auto lo = static_cast<std::size_t>(std::lower_bound(t.begin(), t.end(), window_start) - t.begin());
  const auto hi = static_cast<std::size_t>(std::lower_bound(t.begin(), t.end(), end) - t.begin());
  const std::size_t n = hi - lo;
  if (n < 2) return std::nullopt;
  double rr_sum = 0.0;
  for (std::size_t j = lo; j + 1 < hi; ++j) rr_sum += t[j + 1] - t[j];
  return WindowHr{60.0 * static_cast<double>(n - 1) / rr_sum, n};
}

double hr_of_interval(double rr_seconds) {
  if (!(rr_seconds > 0.0)) throw std::invalid_argument("hr of interval: RR must be positive");
  return 60.0 / rr_seconds;
}

double relative_difference(double hr_outer, double hr_inner) {
  if (!(hr_outer > 0.0)) throw std::invalid_argument("relative difference: outer HR must be positive");
  return std::abs(hr_outer - hr_inner) / hr_outer * 100.0;
}

double quantile(std::vector<double> values, double p) {
  if (values.empty()) throw std::invalid_argument("quantile: empty input");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("quantile: p outside [0, 1]");
  std::sort(values.begin(), values.end());
  const double h = static_cast<double>(values.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= values.size()) return values.back();
  return values[lo] + (h - static_cast<double>(lo)) * (values[lo + 1] - values[lo]);
}

Quartiles quartiles(const std::vector<double>& values) {
  return {quantile(values, 0.25), quantile(values, 0.5), quantile(values, 0.75)};
}

const CellStats* DiffMatrix::find(double outer, double inner) const {
  const auto it = cells.find({outer, inner});
  return it == cells.end() ? nullptr : &it->second;
}

DiffMatrix window_diff_matrix_serial(const BeatSeries& beats, const WindowSpec& spec) {
  check_record(beats, spec);
  const auto rr = rr_intervals(beats);
  const auto pairs = size_pairs(spec);
  std::vector<PairResult> results;
  results.reserve(pairs.size());
  for (const auto& p : pairs) results.push_back(evaluate_pair(beats, rr, p.outer, p.inner, spec.step));
  return assemble(spec, pairs, results);
}

DiffMatrix window_diff_matrix(const BeatSeries& beats, const WindowSpec& spec) {
  check_record(beats, spec);
  const auto rr = rr_intervals(beats);
  const auto pairs = size_pairs(spec);
  std::vector<PairResult> results(pairs.size());
  std::exception_ptr failure;
  const auto n = static_cast<std::ptrdiff_t>(pairs.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto p = static_cast<std::size_t>(i);
    try {
      results[p] = evaluate_pair(beats, rr, pairs[p].outer, pairs[p].inner, spec.step);
    } catch (...) {
#pragma omp critical(rppg_matrix_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return assemble(spec, pairs, results);
}

DiffMatrix merge_matrices(std::span<const DiffMatrix> matrices) {
  if (matrices.empty()) throw std::invalid_argument("merge matrices: nothing to merge");
  std::map<CellKey, std::vector<double>> pooled;
  DiffMatrix merged;
  merged.sizes = matrices.front().sizes;
  for (const auto& m : matrices) {
    if (m.sizes != merged.sizes) throw std::invalid_argument("merge matrices: window sizes differ");
    merged.skipped.outer_windows += m.skipped.outer_windows;
    merged.skipped.inner_windows += m.skipped.inner_windows;
    for (const auto& [key, cell] : m.cells) {
      auto& dst = pooled[key];
      dst.insert(dst.end(), cell.samples.begin(), cell.samples.end());
    }
  }
  for (auto& [key, samples] : pooled) merged.cells.emplace(key, make_cell(std::move(samples)));
  return merged;
}

std::vector<BoxSummary> boxplot_stats(const DiffMatrix& matrix, Grouping grouping) {
  if (matrix.cells.empty()) throw std::invalid_argument("boxplot stats: empty matrix");

  auto summarize = [](const std::vector<double>& samples) {
    BoxSummary s;
    const auto q = quartiles(samples);
    const auto [lo, hi] = std::minmax_element(samples.begin(), samples.end());
    s.min = *lo;
    s.max = *hi;
    s.q1 = q.q1;
    s.median = q.median;
    s.q3 = q.q3;
    s.count = samples.size();
    return s;
  };

  std::vector<BoxSummary> rows;
  if (grouping == Grouping::by_pair) {
    for (const auto& [key, cell] : matrix.cells) {
      BoxSummary s = summarize(cell.samples);
      s.outer = key.outer;
      s.inner = key.inner;
      s.gap = key.outer - key.inner;
      rows.push_back(s);
    }
    return rows;
  }

  std::map<double, std::vector<double>> by_gap;
  for (const auto& [key, cell] : matrix.cells) {
    auto& dst = by_gap[key.outer - key.inner];
    dst.insert(dst.end(), cell.samples.begin(), cell.samples.end());
  }
  for (const auto& [gap, samples] : by_gap) {
    BoxSummary s = summarize(samples);
    s.gap = gap;
    rows.push_back(s);
  }
  return rows;
}

}  // namespace rppg
