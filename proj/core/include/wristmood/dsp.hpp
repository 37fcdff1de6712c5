#pragma once

#include <complex>
#include <span>
#include <vector>

namespace wristmood::dsp {

/// Direct-form-II-transposed biquad, a0 normalised to 1. A first-order
/// section has b2 = a2 = 0.
struct Biquad {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0;
  double a1 = 0.0, a2 = 0.0;
};

enum class FilterKind { kLowpass, kBandpass };

/// Butterworth filter as a cascade of second-order sections.
struct IirFilter {
  std::vector<Biquad> sections;
  FilterKind kind = FilterKind::kLowpass;
  int prototype_order = 0;
  double low_hz = 0.0;   // bandpass only
  double high_hz = 0.0;  // lowpass cutoff or bandpass upper edge
  double design_rate = 0.0;

  /// Total number of poles (6 for a bandpass built from a 3rd order prototype).
  int order() const;
  std::complex<double> response(double freq_hz) const;
  double gain(double freq_hz) const { return std::abs(response(freq_hz)); }
  std::vector<std::complex<double>> poles() const;
};

/// Bilinear-transform Butterworth design with frequency prewarping, so the
/// single-pass gain at every cutoff is exactly 1/sqrt(2). `cutoffs_hz` holds
/// one value for a lowpass and {low, high} for a bandpass. A bandpass of
/// prototype order N has 2N poles.
IirFilter design_butterworth(FilterKind kind, int prototype_order,
                             std::span<const double> cutoffs_hz, double rate_hz);

inline IirFilter butter_lowpass(int order, double cutoff_hz, double rate_hz) {
  const double c[] = {cutoff_hz};
  return design_butterworth(FilterKind::kLowpass, order, c, rate_hz);
}

inline IirFilter butter_bandpass(int order, double low_hz, double high_hz, double rate_hz) {
  const double c[] = {low_hz, high_hz};
  return design_butterworth(FilterKind::kBandpass, order, c, rate_hz);
}

/// Single causal pass with zero initial state.
std::vector<double> filter_forward(const IirFilter& filter, std::span<const double> signal);

/// Forward-backward filtering. The signal is extended by odd reflection of
/// length 3 * order() at both ends and each pass starts from the steady
/// state of its first sample, so constants pass through without edge
/// transients. Requires signal.size() > 3 * order().
std::vector<double> apply_zero_phase(const IirFilter& filter, std::span<const double> signal);

/// One-sided power spectral density. freqs[k] = k * rate / N for k = 0..N/2.
struct Psd {
  std::vector<double> freqs;
  std::vector<double> power;
  double df = 0.0;

  double nyquist() const { return freqs.empty() ? 0.0 : freqs.back(); }
};

/// Rectangular-window periodogram: power[k] = scale / (rate * N) * |X_k|^2
/// with scale 2 except at DC and (even N) Nyquist, so that
/// sum(power) * df equals the mean square of the input.
Psd periodogram(std::span<const double> signal, double rate_hz);

struct BandPower {
  double power = 0.0;
  bool empty = false;  // no bin fell inside the band
};

/// Sum of power * df over bins with lo <= f < hi; the Nyquist bin counts
/// when hi equals Nyquist.
BandPower band_power(const Psd& psd, double lo_hz, double hi_hz);

/// Smallest bin frequency whose cumulative non-DC power reaches
/// `fraction` of the total non-DC power. Throws kDegenerateSpectrum when
/// that total is zero.
double spectral_edge(const Psd& psd, double fraction);

/// Centered moving average over indices [i - (w-1)/2, i + w/2], truncated at
/// the edges.
std::vector<double> moving_average(std::span<const double> signal, std::size_t width);

struct LineFit {
  double slope = 0.0;      // per second
  double intercept = 0.0;  // value at the first sample
};

/// Ordinary least squares of value against time since the first sample.
LineFit linfit(std::span<const double> signal, double rate_hz);

}  // namespace wristmood::dsp
