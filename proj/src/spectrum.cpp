#include "rppg/spectrum.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace rppg {
namespace {

// FFTW planning is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class RealForwardPlan {
public:
  explicit RealForwardPlan(std::size_t n)
      : n_(n),
        in_(static_cast<double*>(fftw_malloc(sizeof(double) * n))),
        out_(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1)))) {
    if (in_ == nullptr || out_ == nullptr) {
      release();
      throw std::bad_alloc();
    }
    std::lock_guard lock(planner_mutex());
    plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), in_, out_, FFTW_ESTIMATE);
  }
  RealForwardPlan(const RealForwardPlan&) = delete;
  RealForwardPlan& operator=(const RealForwardPlan&) = delete;
  ~RealForwardPlan() { release(); }

  std::vector<std::complex<double>> execute(const std::vector<double>& input) {
    std::copy(input.begin(), input.end(), in_);
    fftw_execute(plan_);
    std::vector<std::complex<double>> bins(n_ / 2 + 1);
    for (std::size_t k = 0; k < bins.size(); ++k) bins[k] = {out_[k][0], out_[k][1]};
    return bins;
  }

private:
  void release() {
    std::lock_guard lock(planner_mutex());
    if (plan_ != nullptr) fftw_destroy_plan(plan_);
    fftw_free(in_);
    fftw_free(out_);
    plan_ = nullptr;
    in_ = nullptr;
    out_ = nullptr;
  }

  std::size_t n_;
  double* in_;
  fftw_complex* out_;
  fftw_plan plan_ = nullptr;
};

}  // namespace

std::vector<double> taper_weights(Taper taper, std::size_t n) {
  std::vector<double> w(n, 1.0);
  if (taper == Taper::hann && n > 1) {
    const double denom = static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
      w[i] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / denom));
    }
  }
  return w;
}

std::vector<std::complex<double>> tapered_dft(const std::vector<double>& values, Taper taper) {
  const std::size_t n = values.size();
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);

  const auto w = taper_weights(taper, n);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = (values[i] - mean) * w[i];

  RealForwardPlan plan(n);
  return plan.execute(x);
}

PowerSpectrum power_spectrum(const UniformSignal& sig, Taper taper) {
  const std::size_t n = sig.size();
  if (n < kMinSpectrumLength) {
    throw std::invalid_argument("power spectrum: need at least " +
                                std::to_string(kMinSpectrumLength) + " samples, got " +
                                std::to_string(n));
  }
  const auto bins = tapered_dft(sig.values(), taper);
  const auto w = taper_weights(taper, n);
  double w_sq = 0.0;
  for (double v : w) w_sq += v * v;
  const double scale = 1.0 / (static_cast<double>(n) * w_sq);

  PowerSpectrum spec;
  spec.taper = taper;
  spec.frequency_step = sig.sample_rate() / static_cast<double>(n);
  spec.power.resize(bins.size());
  for (std::size_t k = 0; k < bins.size(); ++k) {
    const bool unpaired = k == 0 || (n % 2 == 0 && k == n / 2);
    spec.power[k] = std::norm(bins[k]) * scale * (unpaired ? 1.0 : 2.0);
  }
  return spec;
}

DiffMetrics spectral_difference(const PowerSpectrum& a, const PowerSpectrum& b) {
  const double step_tol = 1e-12 * std::max(a.frequency_step, b.frequency_step);
  if (std::abs(a.frequency_step - b.frequency_step) > step_tol || a.power.size() != b.power.size()) {
    throw std::invalid_argument("spectral difference: frequency grids differ");
  }
  return diff_metrics(a.power, b.power);
}

std::size_t dominant_bin(const PowerSpectrum& spec, Band band) {
  if (!(band.low < band.high)) {
    throw std::invalid_argument("dominant frequency: band low must be below band high");
  }
  if (band.low < 0.0 || band.low > spec.max_frequency()) {
    throw std::invalid_argument("dominant frequency: band [" + std::to_string(band.low) + ", " +
                                std::to_string(band.high) + "] Hz outside the spectrum range");
  }
  std::size_t best = spec.power.size();
  for (std::size_t k = 0; k < spec.power.size(); ++k) {
    const double f = spec.frequency_at(k);
    if (f < band.low || f > band.high) continue;
    if (best == spec.power.size() || spec.power[k] > spec.power[best]) best = k;
  }
  if (best == spec.power.size()) {
    throw std::invalid_argument("dominant frequency: no spectral bin inside the band");
  }
  return best;
}

double dominant_frequency(const PowerSpectrum& spec, Band band) {
  return spec.frequency_at(dominant_bin(spec, band));
}

}  // namespace rppg
