#pragma once

#include "rppg/signal.hpp"

#include <complex>
#include <vector>

namespace rppg {

struct Band {
  double low = 0.7;
  double high = 3.0;
};

inline constexpr std::size_t kMinSpectrumLength = 16;

// Mean-removed, tapered, one-sided DFT power. With taper weights w and
// mean-removed samples x, bin k holds c * |X_k|^2 with c = 1 / (N * sum w^2),
// doubled for every bin except DC and (even N) Nyquist. The bins therefore
// sum to the mean square of x for the rectangular taper.
PowerSpectrum power_spectrum(const UniformSignal& sig, Taper taper = Taper::hann);

DiffMetrics spectral_difference(const PowerSpectrum& a, const PowerSpectrum& b);

// Frequency of the strongest bin whose frequency lies in [band.low, band.high].
// Ties resolve to the lower frequency.
double dominant_frequency(const PowerSpectrum& spec, Band band);
std::size_t dominant_bin(const PowerSpectrum& spec, Band band);

// Taper weights of length n.
std::vector<double> taper_weights(Taper taper, std::size_t n);

// Mean-removed, tapered one-sided DFT coefficients (bins 0..n/2), unscaled.
std::vector<std::complex<double>> tapered_dft(const std::vector<double>& values, Taper taper);

}  // namespace rppg
