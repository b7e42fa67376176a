#include "impair/simulator.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "impair/dataset.hpp"
#include "impair/error.hpp"
#include "json.hpp"

namespace impair {

void ScenarioConfig::validate() const {
  if (!(true_bpm >= 20.0 && true_bpm <= 250.0)) throw Error("scenario: true_bpm must lie in [20, 250]");
  if (!(duration_s > 0.0) || !std::isfinite(duration_s)) throw Error("scenario: duration_s must be positive");
  if (!(noise_rms >= 0.0) || !std::isfinite(noise_rms)) throw Error("scenario: noise_rms must be non-negative");
  if (!(bpm_low < bpm_high)) throw Error("scenario: bpm_low must be below bpm_high");
  if (!(lat >= -90.0 && lat <= 90.0)) throw Error("scenario: latitude must lie in [-90, 90]");
  if (!(lon >= -180.0 && lon <= 180.0)) throw Error("scenario: longitude must lie in [-180, 180]");
  if (consecutive_windows == 0) throw Error("scenario: consecutive_windows must be at least 1");
  if (!(window_s >= 2.0)) throw Error("scenario: window_s must be at least 2");
  if (help_sound_at && !(*help_sound_at >= 0.0 && std::isfinite(*help_sound_at)))
    throw Error("scenario: help_sound_at must be a non-negative time");
}

ScenarioConfig parse_scenario(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("scenario: invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw Error("scenario: top level must be an object");

  ScenarioConfig cfg;
  try {
    for (auto it = j.begin(); it != j.end(); ++it) {
      const std::string& key = it.key();
      const auto& v = it.value();
      if (key == "true_bpm") cfg.true_bpm = v.get<double>();
      else if (key == "duration_s") cfg.duration_s = v.get<double>();
      else if (key == "noise_rms") cfg.noise_rms = v.get<double>();
      else if (key == "seed") cfg.seed = v.get<std::uint64_t>();
      else if (key == "help_sound_at") cfg.help_sound_at = v.is_null() ? std::nullopt : std::optional<double>(v.get<double>());
      else if (key == "gps") {
        if (!v.is_object()) throw Error("scenario: gps must be an object");
        for (auto g = v.begin(); g != v.end(); ++g) {
          if (g.key() == "lat") cfg.lat = g.value().get<double>();
          else if (g.key() == "lon") cfg.lon = g.value().get<double>();
          else throw Error("scenario: unknown gps key '" + g.key() + "'");
        }
      }
      else if (key == "bpm_low") cfg.bpm_low = v.get<double>();
      else if (key == "bpm_high") cfg.bpm_high = v.get<double>();
      else if (key == "consecutive_windows") cfg.consecutive_windows = v.get<std::size_t>();
      else if (key == "window_s") cfg.window_s = v.get<double>();
      else if (key == "start_time") cfg.start_time = parse_timestamp(v.get<std::string>());
      else throw Error("scenario: unknown key '" + key + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("scenario: wrong value type: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open scenario '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string scenario_to_json(const ScenarioConfig& cfg) {
  nlohmann::ordered_json j;
  j["true_bpm"] = cfg.true_bpm;
  j["duration_s"] = cfg.duration_s;
  j["noise_rms"] = cfg.noise_rms;
  j["seed"] = cfg.seed;
  j["help_sound_at"] = cfg.help_sound_at ? nlohmann::ordered_json(*cfg.help_sound_at) : nlohmann::ordered_json(nullptr);
  j["gps"] = {{"lat", cfg.lat}, {"lon", cfg.lon}};
  j["bpm_low"] = cfg.bpm_low;
  j["bpm_high"] = cfg.bpm_high;
  j["consecutive_windows"] = cfg.consecutive_windows;
  j["window_s"] = cfg.window_s;
  j["start_time"] = format_timestamp(cfg.start_time);
  return j.dump(2) + "\n";
}

SignalTrace generate_pulse_signal(const ScenarioConfig& cfg) {
  cfg.validate();
  return synthesize_pulse(cfg.true_bpm, cfg.duration_s, cfg.noise_rms, cfg.seed);
}

std::string_view branch_name(Branch b) {
  switch (b) {
    case Branch::NegativeFeedback: return "NEGATIVE_FEEDBACK";
    case Branch::OutOfRange: return "OUT_OF_RANGE";
    case Branch::Unmeasurable: return "UNMEASURABLE";
    case Branch::AlertThreshold: return "ALERT_THRESHOLD";
    case Branch::AlertHelpSound: return "ALERT_HELP_SOUND";
  }
  return "";
}

SimulationResult run_decision_loop(const ScenarioConfig& cfg) {
  cfg.validate();
  const SignalTrace clean = cancel_noise(generate_pulse_signal(cfg));
  const std::vector<WindowEstimate> windows = estimate_pulse_rate(clean, cfg.window_s);

  SimulationResult res;
  std::size_t run = 0;
  std::optional<double> last_bpm;
  auto raise = [&](AlertReason reason, double offset) {
    res.alert = AlertEvent{cfg.start_time + static_cast<std::int64_t>(std::floor(offset)), cfg.lat, cfg.lon,
                           last_bpm.value_or(0.0), reason};
    res.alert_offset_s = offset;
  };
  const bool help_in_run = cfg.help_sound_at && *cfg.help_sound_at <= cfg.duration_s;

  for (const WindowEstimate& w : windows) {
    const double t_end = w.t_start_s + cfg.window_s;
    if (help_in_run && *cfg.help_sound_at < t_end) {
      res.log.push_back({w.index, w.t_start_s, std::nullopt, Branch::AlertHelpSound});
      raise(AlertReason::HelpSound, *cfg.help_sound_at);
      return res;
    }
    StepLogEntry entry{w.index, w.t_start_s, w.bpm, Branch::NegativeFeedback};
    if (!w.bpm) {
      entry.branch = Branch::Unmeasurable;
      run = 0;
    } else {
      last_bpm = w.bpm;
      if (*w.bpm < cfg.bpm_low || *w.bpm > cfg.bpm_high) {
        entry.branch = ++run >= cfg.consecutive_windows ? Branch::AlertThreshold : Branch::OutOfRange;
      } else {
        run = 0;
      }
    }
    res.log.push_back(entry);
    if (entry.branch == Branch::AlertThreshold) {
      raise(AlertReason::Threshold, t_end);
      return res;
    }
  }
  if (help_in_run) {
    const std::size_t index = windows.size();
    res.log.push_back({index, static_cast<double>(index) * cfg.window_s, std::nullopt, Branch::AlertHelpSound});
    raise(AlertReason::HelpSound, *cfg.help_sound_at);
  }
  return res;
}

SimulationResult run_decision_loop(const ScenarioConfig& cfg, AlertSink& sink) {
  SimulationResult res = run_decision_loop(cfg);
  if (res.alert) sink.deliver(*res.alert);
  return res;
}

std::string step_log_csv(const std::vector<StepLogEntry>& log) {
  std::string out = "window_index,t_start_s,bpm,branch\n";
  char bpm[32];
  for (const auto& e : log) {
    bpm[0] = '\0';
    if (e.bpm) std::snprintf(bpm, sizeof bpm, "%.2f", *e.bpm);
    out += std::to_string(e.window_index) + "," + format_real(e.t_start_s) + "," + bpm + "," +
           std::string(branch_name(e.branch)) + "\n";
  }
  return out;
}

}  // namespace impair
