#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "impair/alert.hpp"
#include "impair/signal.hpp"

namespace impair {

struct ScenarioConfig {
  double true_bpm = 72.0;
  double duration_s = 60.0;
  double noise_rms = 0.1;
  std::uint64_t seed = 1;
  std::optional<double> help_sound_at;  // seconds from start
  double lat = 0.0;
  double lon = 0.0;
  double bpm_low = 50.0;
  double bpm_high = 120.0;
  std::size_t consecutive_windows = 3;
  double window_s = 5.0;
  std::int64_t start_time = 1525168800;  // 2018-05-01T10:00:00Z

  void validate() const;
};

// JSON object; every key is optional and unknown keys are rejected:
//   true_bpm, duration_s, noise_rms, seed, help_sound_at (number or null),
//   gps {lat, lon}, bpm_low, bpm_high, consecutive_windows, window_s,
//   start_time ("YYYY-MM-DDTHH:MM:SSZ").
ScenarioConfig parse_scenario(const std::string& json_text);
ScenarioConfig load_scenario(const std::filesystem::path& path);
std::string scenario_to_json(const ScenarioConfig& cfg);

SignalTrace generate_pulse_signal(const ScenarioConfig& cfg);

enum class Branch { NegativeFeedback, OutOfRange, Unmeasurable, AlertThreshold, AlertHelpSound };

std::string_view branch_name(Branch b);

struct StepLogEntry {
  std::size_t window_index = 0;
  double t_start_s = 0.0;
  std::optional<double> bpm;
  Branch branch = Branch::NegativeFeedback;
};

struct SimulationResult {
  std::optional<AlertEvent> alert;
  double alert_offset_s = 0.0;  // seconds from start, valid when alert is set
  std::vector<StepLogEntry> log;
};

// Sense -> filter -> estimate per window -> decide. A window whose estimate
// leaves [bpm_low, bpm_high] extends the out-of-range run; an in-range or
// unmeasurable window resets it. The run reaching consecutive_windows fires a
// THRESHOLD alert at the end of that window. A help sound at time h fires a
// HELP_SOUND alert at h, handled before any window ending after h (a help
// sound exactly on a window end is handled after that window). Alert pulse is
// the last measured bpm, 0 if none. The loop stops at the first alert.
SimulationResult run_decision_loop(const ScenarioConfig& cfg);
SimulationResult run_decision_loop(const ScenarioConfig& cfg, AlertSink& sink);

// window_index,t_start_s,bpm,branch
std::string step_log_csv(const std::vector<StepLogEntry>& log);

}  // namespace impair
