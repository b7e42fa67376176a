#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace impair {

struct SignalTrace {
  std::vector<double> samples;
  double sample_rate = 100.0;  // Hz

  double duration() const { return static_cast<double>(samples.size()) / sample_rate; }
};

inline constexpr double kPulseSampleRate = 100.0;
inline constexpr double kBeatWidthS = 0.05;        // Gaussian sigma of one systolic bump
inline constexpr double kBeatAmplitude = 1.0;
inline constexpr double kWanderFrequencyHz = 0.2;
inline constexpr double kWanderAmplitude = 0.3;

// Sum of unit Gaussian bumps centred at (k + 1/2) * 60 / bpm, a 0.2 Hz
// baseline wander sinusoid and white Gaussian noise of the given RMS drawn
// from Rng(derive_seed(seed, "pulse:noise")).
SignalTrace synthesize_pulse(double bpm, double duration_s, double noise_rms, std::uint64_t seed,
                             double sample_rate = kPulseSampleRate);

// Second-order section, transposed direct form II, zero initial state.
struct Biquad {
  double b0 = 1.0, b1 = 0.0, b2 = 0.0, a1 = 0.0, a2 = 0.0;

  // Butterworth (Q = 1/sqrt(2)) sections via the bilinear transform.
  static Biquad highpass(double cutoff_hz, double sample_rate);
  static Biquad lowpass(double cutoff_hz, double sample_rate);

  std::vector<double> filter(const std::vector<double>& x) const;
};

inline constexpr double kBandLowHz = 0.7;
inline constexpr double kBandHighHz = 4.0;

// 0.7-4.0 Hz band-pass: 2nd-order high-pass followed by 2nd-order low-pass.
// Requires sample_rate >= 20 Hz.
SignalTrace cancel_noise(const SignalTrace& raw);

inline constexpr double kRefractoryS = 0.25;

// Sample indices in [begin, end) that are local maxima strictly above
// mean + 0.5 * stdev of that range. Peaks closer than the refractory period
// to the previously kept peak compete; the taller one is kept.
std::vector<std::size_t> detect_peaks(const SignalTrace& trace, std::size_t begin, std::size_t end);

struct WindowEstimate {
  std::size_t index = 0;
  double t_start_s = 0.0;
  std::optional<double> bpm;  // empty: fewer than 2 peaks
};

// One estimate per complete, non-overlapping window:
// bpm = 60 * (peaks - 1) / (t_last_peak - t_first_peak).
std::vector<WindowEstimate> estimate_pulse_rate(const SignalTrace& clean, double window_s);

}  // namespace impair
