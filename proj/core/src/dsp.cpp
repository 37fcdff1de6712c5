#include "wristmood/dsp.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>

#include "wristmood/error.hpp"

namespace wristmood::dsp {

using cd = std::complex<double>;

int IirFilter::order() const {
  int n = 0;
  for (const auto& s : sections) n += (s.a2 == 0.0 && s.b2 == 0.0) ? 1 : 2;
  return n;
}

std::complex<double> IirFilter::response(double freq_hz) const {
  const double w = 2.0 * std::numbers::pi * freq_hz / design_rate;
  const cd z1 = std::polar(1.0, -w);
  const cd z2 = z1 * z1;
  cd h{1.0, 0.0};
  for (const auto& s : sections) h *= (s.b0 + s.b1 * z1 + s.b2 * z2) / (1.0 + s.a1 * z1 + s.a2 * z2);
  return h;
}

std::vector<std::complex<double>> IirFilter::poles() const {
  std::vector<cd> out;
  for (const auto& s : sections) {
    if (s.a2 == 0.0 && s.b2 == 0.0) {
      out.emplace_back(-s.a1, 0.0);
      continue;
    }
    const cd disc = std::sqrt(cd{s.a1 * s.a1 - 4.0 * s.a2, 0.0});
    out.push_back((-s.a1 + disc) / 2.0);
    out.push_back((-s.a1 - disc) / 2.0);
  }
  return out;
}

namespace {

// Analog Butterworth prototype poles on the unit circle, left half-plane.
std::vector<cd> prototype_poles(int n) {
  std::vector<cd> p;
  for (int m = -n + 1; m < n; m += 2)
    p.push_back(-std::exp(cd{0.0, std::numbers::pi * m / (2.0 * n)}));
  return p;
}

double prewarp(double hz, double rate) { return 2.0 * rate * std::tan(std::numbers::pi * hz / rate); }

// Groups poles into conjugate pairs (or pairs of reals) and builds sections.
// zeros are consumed two per second-order section, one per first-order.
std::vector<Biquad> to_sections(const std::vector<cd>& poles, std::vector<double> zeros,
                                double gain) {
  std::vector<cd> complex_upper;
  std::vector<double> reals;
  for (const auto& p : poles) {
    if (std::abs(p.imag()) <= 1e-12 * std::max(1.0, std::abs(p)))
      reals.push_back(p.real());
    else if (p.imag() > 0.0)
      complex_upper.push_back(p);
  }
  std::vector<Biquad> out;
  std::size_t zi = 0;
  auto take_zero = [&]() { return zi < zeros.size() ? zeros[zi++] : 0.0; };
  auto two_zero_numerator = [&](Biquad& s) {
    const double za = take_zero(), zb = take_zero();
    s.b0 = 1.0;
    s.b1 = -(za + zb);
    s.b2 = za * zb;
  };
  for (const auto& p : complex_upper) {
    Biquad s;
    s.a1 = -2.0 * p.real();
    s.a2 = std::norm(p);
    two_zero_numerator(s);
    out.push_back(s);
  }
  std::sort(reals.begin(), reals.end());
  std::size_t r = 0;
  for (; r + 1 < reals.size(); r += 2) {
    Biquad s;
    s.a1 = -(reals[r] + reals[r + 1]);
    s.a2 = reals[r] * reals[r + 1];
    two_zero_numerator(s);
    out.push_back(s);
  }
  if (r < reals.size()) {
    Biquad s;
    s.a1 = -reals[r];
    s.b0 = 1.0;
    s.b1 = -take_zero();
    out.push_back(s);
  }
  out.front().b0 *= gain;
  out.front().b1 *= gain;
  out.front().b2 *= gain;
  return out;
}

}  // namespace

IirFilter design_butterworth(FilterKind kind, int prototype_order,
                             std::span<const double> cutoffs_hz, double rate_hz) {
  if (prototype_order <= 0)
    fail(ErrorCode::kInvalidArgument, "filter order must be positive");
  if (!(rate_hz > 0.0)) fail(ErrorCode::kInvalidArgument, "sample rate must be positive");
  const double nyquist = rate_hz / 2.0;
  const std::size_t expected = kind == FilterKind::kLowpass ? 1 : 2;
  if (cutoffs_hz.size() != expected)
    fail(ErrorCode::kInvalidArgument, "expected " + std::to_string(expected) + " cutoff(s)");
  for (double c : cutoffs_hz)
    if (!(c > 0.0 && c < nyquist))
      fail(ErrorCode::kInvalidArgument, "cutoff " + std::to_string(c) +
                                            " Hz must lie strictly between 0 and Nyquist " +
                                            std::to_string(nyquist) + " Hz");

  IirFilter f;
  f.kind = kind;
  f.prototype_order = prototype_order;
  f.design_rate = rate_hz;
  const double fs2 = 2.0 * rate_hz;
  const auto proto = prototype_poles(prototype_order);
  const auto bilinear = [fs2](cd s) { return (fs2 + s) / (fs2 - s); };

  if (kind == FilterKind::kLowpass) {
    f.high_hz = cutoffs_hz[0];
    const double wc = prewarp(cutoffs_hz[0], rate_hz);
    std::vector<cd> poles;
    cd denom{1.0, 0.0};
    for (const auto& p : proto) {
      const cd pa = wc * p;
      denom *= fs2 - pa;
      poles.push_back(bilinear(pa));
    }
    const double gain = std::pow(wc, prototype_order) / denom.real();
    f.sections = to_sections(poles, std::vector<double>(prototype_order, -1.0), gain);
    return f;
  }

  if (!(cutoffs_hz[0] < cutoffs_hz[1]))
    fail(ErrorCode::kInvalidArgument, "bandpass requires low < high");
  f.low_hz = cutoffs_hz[0];
  f.high_hz = cutoffs_hz[1];
  const double wl = prewarp(f.low_hz, rate_hz);
  const double wh = prewarp(f.high_hz, rate_hz);
  const double bw = wh - wl;
  const double w0 = std::sqrt(wl * wh);
  std::vector<cd> poles;
  cd denom{1.0, 0.0};
  for (const auto& p : proto) {
    const cd lp = p * (bw / 2.0);
    const cd root = std::sqrt(lp * lp - w0 * w0);
    for (const cd pa : {lp + root, lp - root}) {
      denom *= fs2 - pa;
      poles.push_back(bilinear(pa));
    }
  }
  // N analog zeros at s = 0 map to z = +1; the remaining N go to z = -1.
  const double gain = std::pow(bw * fs2, prototype_order) / denom.real();
  std::vector<double> zeros;
  for (int i = 0; i < prototype_order; ++i) {
    zeros.push_back(1.0);
    zeros.push_back(-1.0);
  }
  f.sections = to_sections(poles, zeros, gain);
  return f;
}

namespace {

struct SectionState {
  double z1 = 0.0, z2 = 0.0;
};

void run_cascade(const IirFilter& filter, std::vector<double>& x, std::vector<SectionState> state) {
  for (std::size_t s = 0; s < filter.sections.size(); ++s) {
    const Biquad& q = filter.sections[s];
    double z1 = state[s].z1, z2 = state[s].z2;
    for (double& v : x) {
      const double in = v;
      const double out = q.b0 * in + z1;
      z1 = q.b1 * in - q.a1 * out + z2;
      z2 = q.b2 * in - q.a2 * out;
      v = out;
    }
  }
}

// Steady-state section states for a unit step input.
std::vector<SectionState> step_states(const IirFilter& filter) {
  std::vector<SectionState> zi;
  double scale = 1.0;
  for (const auto& q : filter.sections) {
    const double g = (q.b0 + q.b1 + q.b2) / (1.0 + q.a1 + q.a2);
    SectionState s;
    s.z2 = scale * (q.b2 - q.a2 * g);
    s.z1 = scale * (q.b1 - q.a1 * g) + s.z2;
    zi.push_back(s);
    scale *= g;
  }
  return zi;
}

std::vector<SectionState> scaled(std::vector<SectionState> zi, double x0) {
  for (auto& s : zi) {
    s.z1 *= x0;
    s.z2 *= x0;
  }
  return zi;
}

}  // namespace

std::vector<double> filter_forward(const IirFilter& filter, std::span<const double> signal) {
  std::vector<double> y(signal.begin(), signal.end());
  run_cascade(filter, y, std::vector<SectionState>(filter.sections.size()));
  return y;
}

std::vector<double> apply_zero_phase(const IirFilter& filter, std::span<const double> signal) {
  const std::size_t n = signal.size();
  const std::size_t pad = 3 * static_cast<std::size_t>(filter.order());
  if (n <= pad)
    fail(ErrorCode::kSignalTooShort, "zero-phase filtering needs more than " +
                                         std::to_string(pad) + " samples, got " +
                                         std::to_string(n));
  std::vector<double> ext;
  ext.reserve(n + 2 * pad);
  for (std::size_t i = pad; i >= 1; --i) ext.push_back(2.0 * signal[0] - signal[i]);
  ext.insert(ext.end(), signal.begin(), signal.end());
  for (std::size_t i = 1; i <= pad; ++i) ext.push_back(2.0 * signal[n - 1] - signal[n - 1 - i]);

  const auto zi = step_states(filter);
  run_cascade(filter, ext, scaled(zi, ext.front()));
  std::reverse(ext.begin(), ext.end());
  run_cascade(filter, ext, scaled(zi, ext.front()));
  std::reverse(ext.begin(), ext.end());
  return std::vector<double>(ext.begin() + static_cast<std::ptrdiff_t>(pad),
                             ext.begin() + static_cast<std::ptrdiff_t>(pad + n));
}

namespace {

// FFTW planning is not thread-safe; execution of an existing plan on new
// arrays is.
class R2cPlans {
 public:
  ~R2cPlans() {
    for (auto& [n, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(int n) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    std::vector<double> in(static_cast<std::size_t>(n));
    std::vector<fftw_complex> out(static_cast<std::size_t>(n / 2 + 1));
    fftw_plan plan = fftw_plan_dft_r2c_1d(n, in.data(), out.data(), FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(n, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<int, fftw_plan> plans_;
};

R2cPlans& plans() {
  static R2cPlans instance;
  return instance;
}

}  // namespace

Psd periodogram(std::span<const double> signal, double rate_hz) {
  const std::size_t n = signal.size();
  if (n < 8) fail(ErrorCode::kSignalTooShort, "periodogram needs at least 8 samples");
  if (!(rate_hz > 0.0)) fail(ErrorCode::kInvalidArgument, "sample rate must be positive");
  const std::size_t bins = n / 2 + 1;
  std::vector<double> in(signal.begin(), signal.end());
  std::vector<fftw_complex> out(bins);
  fftw_execute_dft_r2c(plans().get(static_cast<int>(n)), in.data(), out.data());

  Psd psd;
  psd.df = rate_hz / static_cast<double>(n);
  psd.freqs.resize(bins);
  psd.power.resize(bins);
  const double norm = 1.0 / (rate_hz * static_cast<double>(n));
  for (std::size_t k = 0; k < bins; ++k) {
    psd.freqs[k] = static_cast<double>(k) * rate_hz / static_cast<double>(n);
    const bool single = k == 0 || (n % 2 == 0 && k == n / 2);
    const double mag2 = out[k][0] * out[k][0] + out[k][1] * out[k][1];
    psd.power[k] = (single ? 1.0 : 2.0) * norm * mag2;
  }
  return psd;
}

BandPower band_power(const Psd& psd, double lo_hz, double hi_hz) {
  if (!(lo_hz >= 0.0 && lo_hz < hi_hz))
    fail(ErrorCode::kInvalidArgument, "band requires 0 <= lo < hi");
  const double eps = 1e-9 * psd.df;
  const double nyq = psd.nyquist();
  const bool to_nyquist = std::abs(hi_hz - nyq) <= eps;
  BandPower bp;
  bool any = false;
  for (std::size_t k = 0; k < psd.freqs.size(); ++k) {
    const double f = psd.freqs[k];
    const bool inside =
        f >= lo_hz - eps && (f < hi_hz - eps || (to_nyquist && k + 1 == psd.freqs.size()));
    if (!inside) continue;
    any = true;
    bp.power += psd.power[k] * psd.df;
  }
  bp.empty = !any;
  return bp;
}

double spectral_edge(const Psd& psd, double fraction) {
  if (!(fraction >= 0.0 && fraction <= 1.0))
    fail(ErrorCode::kInvalidArgument, "spectral edge fraction must lie in [0, 1]");
  double total = 0.0;
  for (std::size_t k = 1; k < psd.power.size(); ++k) total += psd.power[k];
  if (!(total > 0.0)) fail(ErrorCode::kDegenerateSpectrum, "no non-DC power");
  const double target = fraction * total * (1.0 - 1e-12);
  double cum = 0.0;
  for (std::size_t k = 1; k < psd.power.size(); ++k) {
    cum += psd.power[k];
    if (cum >= target) return psd.freqs[k];
  }
  return psd.freqs.back();
}

std::vector<double> moving_average(std::span<const double> signal, std::size_t width) {
  if (width < 1) fail(ErrorCode::kInvalidArgument, "moving average width must be >= 1");
  const std::size_t n = signal.size();
  if (width > n)
    fail(ErrorCode::kSignalTooShort, "moving average width " + std::to_string(width) +
                                         " exceeds signal length " + std::to_string(n));
  const std::size_t back = (width - 1) / 2;
  const std::size_t fwd = width / 2;
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t lo = i >= back ? i - back : 0;
    const std::size_t hi = std::min(n - 1, i + fwd);
    double sum = 0.0;
    for (std::size_t j = lo; j <= hi; ++j) sum += signal[j];
    out[i] = sum / static_cast<double>(hi - lo + 1);
  }
  return out;
}

LineFit linfit(std::span<const double> signal, double rate_hz) {
  const std::size_t n = signal.size();
  if (n < 2) fail(ErrorCode::kSignalTooShort, "line fit needs at least 2 samples");
  const double nn = static_cast<double>(n);
  // Centered time avoids cancellation: tbar = (n-1) / (2 rate).
  const double tbar = (nn - 1.0) / (2.0 * rate_hz);
  double ybar = 0.0;
  for (double v : signal) ybar += v;
  ybar /= nn;
  double sty = 0.0, stt = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dt = static_cast<double>(i) / rate_hz - tbar;
    sty += dt * (signal[i] - ybar);
    stt += dt * dt;
  }
  LineFit fit;
  fit.slope = sty / stt;
  fit.intercept = ybar - fit.slope * tbar;
  return fit;
}

}  // namespace wristmood::dsp
