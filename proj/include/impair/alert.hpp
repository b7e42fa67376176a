#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace impair {

enum class AlertReason { Threshold, HelpSound };

std::string_view reason_name(AlertReason r);

struct AlertEvent {
  std::int64_t timestamp = 0;  // seconds since the Unix epoch, UTC
  double lat = 0.0;
  double lon = 0.0;
  double pulse_bpm = 0.0;
  AlertReason reason = AlertReason::Threshold;

  bool operator==(const AlertEvent&) const = default;
};

// "YYYY-MM-DDTHH:MM:SSZ"
std::string format_timestamp(std::int64_t unix_seconds);
std::int64_t parse_timestamp(std::string_view text);

// ALERT|<timestamp>|<lat 6dp>,<lon 6dp>|pulse=<bpm 1dp>|reason=<THRESHOLD|HELP_SOUND>
std::string format_alert(const AlertEvent& ev);
AlertEvent parse_alert(std::string_view line);

// Stand-in for the phone/SMS leg of the device.
class AlertSink {
 public:
  virtual ~AlertSink() = default;
  virtual void deliver(const AlertEvent& ev) = 0;
};

// Appends one formatted line per alert.
class FileAlertSink : public AlertSink {
 public:
  explicit FileAlertSink(std::filesystem::path path) : path_(std::move(path)) {}
  void deliver(const AlertEvent& ev) override;

 private:
  std::filesystem::path path_;
};

class MemoryAlertSink : public AlertSink {
 public:
  void deliver(const AlertEvent& ev) override { lines.push_back(format_alert(ev)); }
  std::vector<std::string> lines;
};

}  // namespace impair
