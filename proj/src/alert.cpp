#include "impair/alert.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "impair/error.hpp"

namespace impair {

std::string_view reason_name(AlertReason r) { return r == AlertReason::Threshold ? "THRESHOLD" : "HELP_SOUND"; }

std::string format_timestamp(std::int64_t unix_seconds) {
  using namespace std::chrono;
  const sys_seconds tp{seconds{unix_seconds}};
  const auto day = floor<days>(tp);
  const year_month_day ymd{day};
  const hh_mm_ss hms{tp - day};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()), static_cast<int>(hms.hours().count()),
                static_cast<int>(hms.minutes().count()), static_cast<int>(hms.seconds().count()));
  return buf;
}

namespace {

int parse_fixed_int(std::string_view s, std::size_t pos, std::size_t len, std::string_view whole) {
  int v = 0;
  const char* first = s.data() + pos;
  auto [ptr, ec] = std::from_chars(first, first + len, v);
  if (ec != std::errc() || ptr != first + len) throw Error("malformed timestamp '" + std::string(whole) + "'");
  return v;
}

double parse_double(std::string_view s, std::string_view what) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw Error("malformed " + std::string(what) + " '" + std::string(s) + "'");
  return v;
}

}  // namespace

std::int64_t parse_timestamp(std::string_view text) {
  using namespace std::chrono;
  if (text.size() != 20 || text[4] != '-' || text[7] != '-' || text[10] != 'T' || text[13] != ':' ||
      text[16] != ':' || text[19] != 'Z')
    throw Error("malformed timestamp '" + std::string(text) + "'");
  const year_month_day ymd{year{parse_fixed_int(text, 0, 4, text)},
                           month{static_cast<unsigned>(parse_fixed_int(text, 5, 2, text))},
                           day{static_cast<unsigned>(parse_fixed_int(text, 8, 2, text))}};
  const int hh = parse_fixed_int(text, 11, 2, text);
  const int mm = parse_fixed_int(text, 14, 2, text);
  const int ss = parse_fixed_int(text, 17, 2, text);
  if (!ymd.ok() || hh > 23 || mm > 59 || ss > 59) throw Error("timestamp out of range '" + std::string(text) + "'");
  const sys_seconds tp = sys_days{ymd} + hours{hh} + minutes{mm} + seconds{ss};
  return tp.time_since_epoch().count();
}

namespace {

// Fixed-point text that never shows a negative zero, including values that
// only round to zero.
std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  std::string s = buf;
  if (s[0] == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

}  // namespace

std::string format_alert(const AlertEvent& ev) {
  return "ALERT|" + format_timestamp(ev.timestamp) + "|" + fixed(ev.lat, 6) + "," + fixed(ev.lon, 6) +
         "|pulse=" + fixed(ev.pulse_bpm, 1) + "|reason=" + std::string(reason_name(ev.reason));
}

AlertEvent parse_alert(std::string_view line) {
  auto fail = [&] { return Error("malformed alert line '" + std::string(line) + "'"); };
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t bar = line.find('|', start);
    parts.push_back(line.substr(start, bar == std::string_view::npos ? std::string_view::npos : bar - start));
    if (bar == std::string_view::npos) break;
    start = bar + 1;
  }
  if (parts.size() != 5 || parts[0] != "ALERT") throw fail();

  AlertEvent ev;
  ev.timestamp = parse_timestamp(parts[1]);
  const std::size_t comma = parts[2].find(',');
  if (comma == std::string_view::npos) throw fail();
  ev.lat = parse_double(parts[2].substr(0, comma), "latitude");
  ev.lon = parse_double(parts[2].substr(comma + 1), "longitude");
  if (!parts[3].starts_with("pulse=")) throw fail();
  ev.pulse_bpm = parse_double(parts[3].substr(6), "pulse");
  if (parts[4] == "reason=THRESHOLD") {
    ev.reason = AlertReason::Threshold;
  } else if (parts[4] == "reason=HELP_SOUND") {
    ev.reason = AlertReason::HelpSound;
  } else {
    throw fail();
  }
  return ev;
}

void FileAlertSink::deliver(const AlertEvent& ev) {
  std::ofstream out(path_, std::ios::binary | std::ios::app);
  if (!out) throw Error("cannot open alert sink '" + path_.string() + "'");
  out << format_alert(ev) << '\n';
}

}  // namespace impair
