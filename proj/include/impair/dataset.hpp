#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace impair {

enum class Label : std::uint8_t { Normal = 0, Induced = 1 };

inline int to_int(Label l) { return static_cast<int>(l); }

// One subject. Both features are normalized, unitless reals: bac is the blood
// alcohol reading and pulse_rate is the pulse deviation from the resting
// norm (see the generator notes below for the offset).
struct Sample {
  double bac = 0.0;
  double pulse_rate = 0.0;
  Label target = Label::Normal;

  bool operator==(const Sample&) const = default;
};

struct Dataset {
  std::string name;
  std::vector<Sample> samples;

  std::size_t size() const { return samples.size(); }
  std::size_t count(Label l) const;

  bool operator==(const Dataset&) const = default;
};

// Throws unless the dataset has >= 2 samples and both classes present.
void require_trainable(const Dataset& ds);

inline constexpr const char* kCsvHeader = "BAC,PulseRate,Target";

Dataset load_csv(const std::filesystem::path& path);
Dataset parse_csv(const std::string& text, std::string name = "dataset");

void save_csv(const Dataset& ds, const std::filesystem::path& path);
std::string to_csv(const Dataset& ds);

// Shortest decimal string that parses back to exactly v.
std::string format_real(double v);

// Generator constants. Pulse is stored as a signed deviation z (in standard
// deviations from the resting mean) shifted by induced_pulse_zmax, so the
// column stays non-negative and |pulse_rate - induced_pulse_zmax| is the
// z-score magnitude.
inline constexpr double kLegalBacLimit = 0.08;
inline constexpr double kPulseBandZ = 2.0;

struct GeneratorConfig {
  std::size_t n_normal = 100;
  std::size_t n_induced = 99;
  std::uint64_t seed = 7;
  double induced_bac_max = 0.25;
  double induced_pulse_zmax = 3.0;
  // Probability that a sample (either class) is drawn from the shared
  // borderline zone instead of its own profile.
  double overlap_fraction = 0.20;

  void validate() const;
};

// Normal subjects: BAC below the legal limit, |z| inside the pulse band.
// Induced subjects mix three profiles:
//   alcohol (40%) - BAC in [limit, induced_bac_max], any pulse
//   bradycardic drug (30%) - BAC below limit, z in [-zmax, -band]
//   tachycardic drug (30%) - BAC below limit, z in [band, zmax]
// All draws are truncated Gaussians. Rows are ordered normal first, then
// induced.
Dataset generate_synthetic(const GeneratorConfig& cfg);

}  // namespace impair
