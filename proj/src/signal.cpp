#include "impair/signal.hpp"

#include <cmath>
#include <numbers>

#include "impair/error.hpp"
#include "impair/rng.hpp"

namespace impair {

SignalTrace synthesize_pulse(double bpm, double duration_s, double noise_rms, std::uint64_t seed, double sample_rate) {
  if (!(bpm > 0.0) || !(duration_s > 0.0) || !(sample_rate > 0.0) || !(noise_rms >= 0.0))
    throw Error("synthesize_pulse: invalid parameters");
  SignalTrace tr;
  tr.sample_rate = sample_rate;
  const auto n = static_cast<std::size_t>(std::llround(duration_s * sample_rate));
  tr.samples.assign(n, 0.0);

  const double period = 60.0 / bpm;
  const double reach = 6.0 * kBeatWidthS;
  for (double centre = 0.5 * period; centre - reach < duration_s; centre += period) {
    const auto lo = static_cast<std::ptrdiff_t>(std::ceil((centre - reach) * sample_rate));
    const auto hi = static_cast<std::ptrdiff_t>(std::floor((centre + reach) * sample_rate));
    for (std::ptrdiff_t i = std::max<std::ptrdiff_t>(lo, 0); i <= hi && i < static_cast<std::ptrdiff_t>(n); ++i) {
      const double u = (static_cast<double>(i) / sample_rate - centre) / kBeatWidthS;
      tr.samples[static_cast<std::size_t>(i)] += kBeatAmplitude * std::exp(-0.5 * u * u);
    }
  }

  Rng rng(derive_seed(seed, "pulse:noise"));
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / sample_rate;
    tr.samples[i] += kWanderAmplitude * std::sin(2.0 * std::numbers::pi * kWanderFrequencyHz * t);
    if (noise_rms > 0.0) tr.samples[i] += noise_rms * rng.normal();
  }
  return tr;
}

Biquad Biquad::highpass(double cutoff_hz, double sample_rate) {
  const double w0 = 2.0 * std::numbers::pi * cutoff_hz / sample_rate;
  const double alpha = std::sin(w0) / (2.0 * std::numbers::sqrt2 / 2.0);
  const double cw = std::cos(w0);
  const double a0 = 1.0 + alpha;
  return {(1.0 + cw) / 2.0 / a0, -(1.0 + cw) / a0, (1.0 + cw) / 2.0 / a0, -2.0 * cw / a0, (1.0 - alpha) / a0};
}

Biquad Biquad::lowpass(double cutoff_hz, double sample_rate) {
  const double w0 = 2.0 * std::numbers::pi * cutoff_hz / sample_rate;
  const double alpha = std::sin(w0) / (2.0 * std::numbers::sqrt2 / 2.0);
  const double cw = std::cos(w0);
  const double a0 = 1.0 + alpha;
  return {(1.0 - cw) / 2.0 / a0, (1.0 - cw) / a0, (1.0 - cw) / 2.0 / a0, -2.0 * cw / a0, (1.0 - alpha) / a0};
}

std::vector<double> Biquad::filter(const std::vector<double>& x) const {
  std::vector<double> y(x.size());
  double z1 = 0.0, z2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double out = b0 * x[i] + z1;
    z1 = b1 * x[i] - a1 * out + z2;
    z2 = b2 * x[i] - a2 * out;
    y[i] = out;
  }
  return y;
}

SignalTrace cancel_noise(const SignalTrace& raw) {
  if (!(raw.sample_rate >= 20.0))
    throw Error("cancel_noise: sample rate " + std::to_string(raw.sample_rate) + " Hz is too low for the pass band");
  SignalTrace out;
  out.sample_rate = raw.sample_rate;
  out.samples = Biquad::lowpass(kBandHighHz, raw.sample_rate)
                    .filter(Biquad::highpass(kBandLowHz, raw.sample_rate).filter(raw.samples));
  return out;
}

std::vector<std::size_t> detect_peaks(const SignalTrace& trace, std::size_t begin, std::size_t end) {
  const auto& x = trace.samples;
  end = std::min(end, x.size());
  std::vector<std::size_t> peaks;
  if (end <= begin + 2) return peaks;

  double sum = 0.0;
  for (std::size_t i = begin; i < end; ++i) sum += x[i];
  const double mean = sum / static_cast<double>(end - begin);
  double ss = 0.0;
  for (std::size_t i = begin; i < end; ++i) ss += (x[i] - mean) * (x[i] - mean);
  const double threshold = mean + 0.5 * std::sqrt(ss / static_cast<double>(end - begin));

  const auto refractory = static_cast<std::size_t>(std::llround(kRefractoryS * trace.sample_rate));
  for (std::size_t i = std::max<std::size_t>(begin, 1); i < end && i + 1 < x.size(); ++i) {
    if (!(x[i] > threshold && x[i] > x[i - 1] && x[i] >= x[i + 1])) continue;
    if (!peaks.empty() && i - peaks.back() < refractory) {
      if (x[i] > x[peaks.back()]) peaks.back() = i;
      continue;
    }
    peaks.push_back(i);
  }
  return peaks;
}

std::vector<WindowEstimate> estimate_pulse_rate(const SignalTrace& clean, double window_s) {
  if (clean.samples.empty()) throw Error("estimate_pulse_rate: empty trace");
  if (!(window_s >= 2.0)) throw Error("estimate_pulse_rate: window must be at least 2 s");
  const auto width = static_cast<std::size_t>(std::llround(window_s * clean.sample_rate));
  std::vector<WindowEstimate> out;
  for (std::size_t w = 0; (w + 1) * width <= clean.samples.size(); ++w) {
    WindowEstimate est;
    est.index = w;
    est.t_start_s = static_cast<double>(w * width) / clean.sample_rate;
    const auto peaks = detect_peaks(clean, w * width, (w + 1) * width);
    if (peaks.size() >= 2) {
      const double span = static_cast<double>(peaks.back() - peaks.front()) / clean.sample_rate;
      est.bpm = 60.0 * static_cast<double>(peaks.size() - 1) / span;
    }
    out.push_back(est);
  }
  return out;
}

}  // namespace impair
