#include "impair/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "impair/error.hpp"
#include "impair/rng.hpp"

namespace impair {

std::size_t Dataset::count(Label l) const {
  return static_cast<std::size_t>(
      std::count_if(samples.begin(), samples.end(), [l](const Sample& s) { return s.target == l; }));
}

void require_trainable(const Dataset& ds) {
  if (ds.size() < 2) throw Error("dataset '" + ds.name + "' needs at least 2 samples");
  if (ds.count(Label::Normal) == 0 || ds.count(Label::Induced) == 0)
    throw Error("dataset '" + ds.name + "' needs samples of both classes");
}

std::string format_real(double v) {
  if (v == 0.0) return "0";  // also folds -0
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw Error("format_real: conversion failed");
  return std::string(buf, end);
}

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

double parse_cell(std::string_view cell, std::size_t row, std::size_t col) {
  double v = 0.0;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  if (cell.empty()) throw DataError("empty cell", row, col);
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) throw DataError("non-numeric cell '" + std::string(cell) + "'", row, col);
  if (!std::isfinite(v)) throw DataError("non-finite cell", row, col);
  return v;
}

}  // namespace

Dataset parse_csv(const std::string& text, std::string name) {
  Dataset ds;
  ds.name = std::move(name);
  std::istringstream in(text);
  std::string line;
  std::size_t row = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!saw_header) {
      if (line != kCsvHeader)
        throw DataError("header must be exactly '" + std::string(kCsvHeader) + "', got '" + line + "'", row);
      saw_header = true;
      continue;
    }
    if (line.empty()) continue;
    const auto cells = split_commas(line);
    if (cells.size() != 3)
      throw DataError("expected 3 columns, found " + std::to_string(cells.size()), row);
    Sample s;
    s.bac = parse_cell(cells[0], row, 1);
    s.pulse_rate = parse_cell(cells[1], row, 2);
    const double t = parse_cell(cells[2], row, 3);
    if (s.bac < 0.0) throw DataError("BAC must be non-negative", row, 1);
    if (s.pulse_rate < 0.0) throw DataError("PulseRate must be non-negative", row, 2);
    if (t == 0.0) {
      s.target = Label::Normal;
    } else if (t == 1.0) {
      s.target = Label::Induced;
    } else {
      throw DataError("target must be 0 or 1", row, 3);
    }
    ds.samples.push_back(s);
  }
  if (!saw_header) throw DataError("empty file");
  if (ds.samples.empty()) throw DataError("empty dataset");
  return ds;
}

Dataset load_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), path.stem().string());
}

std::string to_csv(const Dataset& ds) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const Sample& s : ds.samples) {
    out += format_real(s.bac);
    out += ',';
    out += format_real(s.pulse_rate);
    out += ',';
    out += std::to_string(to_int(s.target));
    out += '\n';
  }
  return out;
}

void save_csv(const Dataset& ds, const std::filesystem::path& path) {
  if (ds.samples.empty()) std::cerr << "warning: writing empty dataset to " << path.string() << "\n";
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << to_csv(ds);
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

void GeneratorConfig::validate() const {
  if (n_normal + n_induced < 2) throw Error("generator: need at least 2 samples");
  if (!(induced_bac_max > kLegalBacLimit))
    throw Error("generator: induced_bac_max must exceed the legal BAC limit");
  if (!(induced_pulse_zmax > kPulseBandZ))
    throw Error("generator: induced_pulse_zmax must exceed the normal pulse band");
  if (!(overlap_fraction >= 0.0 && overlap_fraction <= 1.0))
    throw Error("generator: overlap_fraction must lie in [0, 1]");
}

namespace {

// Borderline subjects: just under the legal limit with a pulse near the
// edge of the normal band. Both classes draw from here.
Sample draw_ambiguous(Rng& rng, const GeneratorConfig& cfg) {
  Sample s;
  s.bac = rng.truncated_normal(0.06, 0.02, 0.04, kLegalBacLimit);
  s.pulse_rate = cfg.induced_pulse_zmax + rng.truncated_normal(1.5, 0.5, 1.0, kPulseBandZ);
  return s;
}

Sample draw_normal_profile(Rng& rng, const GeneratorConfig& cfg) {
  Sample s;
  s.bac = rng.truncated_normal(0.0, 0.1, 0.0, kLegalBacLimit);
  s.pulse_rate = cfg.induced_pulse_zmax + rng.truncated_normal(0.0, 2.0, -kPulseBandZ, kPulseBandZ);
  return s;
}

Sample draw_induced_profile(Rng& rng, const GeneratorConfig& cfg) {
  Sample s;
  const double zmax = cfg.induced_pulse_zmax;
  const double u = rng.uniform();
  double z = 0.0;
  if (u < 0.4) {
    s.bac = rng.truncated_normal(kLegalBacLimit, 0.08, kLegalBacLimit, cfg.induced_bac_max);
    z = rng.truncated_normal(0.0, 2.0, -zmax, zmax);
  } else {
    s.bac = rng.truncated_normal(0.0, 0.1, 0.0, kLegalBacLimit);
    z = rng.truncated_normal(kPulseBandZ, 0.6, kPulseBandZ, zmax);
    if (u < 0.7) z = -z;
  }
  s.pulse_rate = zmax + z;
  return s;
}

}  // namespace

Dataset generate_synthetic(const GeneratorConfig& cfg) {
  cfg.validate();
  Rng rng(derive_seed(cfg.seed, "dataset:synthetic"));
  Dataset ds;
  ds.name = "synthetic-" + std::to_string(cfg.seed);
  ds.samples.reserve(cfg.n_normal + cfg.n_induced);
  auto emit = [&](Label label) {
    Sample s;
    if (rng.uniform() < cfg.overlap_fraction)
      s = draw_ambiguous(rng, cfg);
    else
      s = label == Label::Induced ? draw_induced_profile(rng, cfg) : draw_normal_profile(rng, cfg);
    s.target = label;
    ds.samples.push_back(s);
  };
  for (std::size_t i = 0; i < cfg.n_normal; ++i) emit(Label::Normal);
  for (std::size_t i = 0; i < cfg.n_induced; ++i) emit(Label::Induced);
  return ds;
}

}  // namespace impair
