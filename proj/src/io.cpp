#include "rppg/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

namespace rppg::io {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Calls fn(line_number, trimmed_line) for every non-blank, non-comment line.
template <typename Fn>
void for_each_data_line(std::istream& in, Fn&& fn) {
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string_view text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    fn(number, text);
  }
}

std::ifstream open_for_read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  return in;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

double parse_field(std::string_view text, std::string_view source, std::size_t line) {
  try {
    return parse_double(text);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string(source), line, e.what());
  }
}

// One strictly increasing value per line; `scale` divides each value.
std::vector<double> read_increasing_column(std::istream& in, std::string_view source, double scale,
                                           std::string_view what) {
  std::vector<double> values;
  for_each_data_line(in, [&](std::size_t line, std::string_view text) {
    const double v = parse_field(text, source, line) / scale;
    if (!values.empty() && !(v > values.back())) {
      throw ParseError(std::string(source), line, std::string(what) + " not strictly increasing");
    }
    values.push_back(v);
  });
  if (values.empty()) throw ParseError(std::string(source), 0, "no " + std::string(what) + " found");
  return values;
}

void write_column(std::ostream& out, const std::vector<double>& values) {
  for (double v : values) out << format_double(v) << '\n';
}

Rect parse_rect(std::string_view text, std::string_view source, std::size_t line) {
  std::array<int, 4> parts{};
  std::size_t field = 0;
  while (true) {
    const auto comma = text.find(',');
    const std::string_view item = trim(text.substr(0, comma));
    int value = 0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
    if (field >= parts.size() || ec != std::errc{} || ptr != item.data() + item.size()) {
      throw ParseError(std::string(source), line, "rectangle must be 'x,y,width,height'");
    }
    parts[field++] = value;
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  if (field != parts.size()) throw ParseError(std::string(source), line, "rectangle must be 'x,y,width,height'");
  return {parts[0], parts[1], parts[2], parts[3]};
}

std::string format_rect(const Rect& r) {
  return std::to_string(r.x) + ',' + std::to_string(r.y) + ',' + std::to_string(r.width) + ',' +
         std::to_string(r.height);
}

int parse_int(std::string_view text, std::string_view source, std::size_t line) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ParseError(std::string(source), line, "expected an integer, got '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace

ParseError::ParseError(std::string source, std::size_t line, const std::string& what)
    : std::runtime_error(source + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " + what),
      source_(std::move(source)),
      line_(line) {}

std::string format_double(double value) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf.data(), ptr);
}

double parse_double(std::string_view text) {
  text = trim(text);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw std::invalid_argument("expected a finite decimal number, got '" + std::string(text) + "'");
  }
  return value;
}

TimestampedSignal read_timestamped_signal(std::istream& in, std::string_view source) {
  bool header_seen = false;
  std::vector<double> t;
  std::vector<double> v;
  for_each_data_line(in, [&](std::size_t line, std::string_view text) {
    if (!header_seen) {
      if (text != "t,value") {
        throw ParseError(std::string(source), line, "expected header 't,value'");
      }
      header_seen = true;
      return;
    }
    const auto comma = text.find(',');
    if (comma == std::string_view::npos || text.find(',', comma + 1) != std::string_view::npos) {
      throw ParseError(std::string(source), line, "expected 't,value'");
    }
    const double time = parse_field(text.substr(0, comma), source, line);
    const double value = parse_field(text.substr(comma + 1), source, line);
    if (!t.empty() && !(time > t.back())) {
      throw ParseError(std::string(source), line, "timestamps not strictly increasing");
    }
    t.push_back(time);
    v.push_back(value);
  });
  if (!header_seen) throw ParseError(std::string(source), 0, "empty signal file");
  if (t.size() < 2) throw ParseError(std::string(source), 0, "need at least 2 samples");
  return TimestampedSignal(std::move(t), std::move(v));
}

TimestampedSignal read_timestamped_signal(const std::filesystem::path& path) {
  auto in = open_for_read(path);
  return read_timestamped_signal(in, path.string());
}

void write_timestamped_signal(std::ostream& out, const TimestampedSignal& sig) {
  out << "t,value\n";
  for (std::size_t i = 0; i < sig.size(); ++i) {
    out << format_double(sig.timestamps()[i]) << ',' << format_double(sig.values()[i]) << '\n';
  }
}

void write_timestamped_signal(const std::filesystem::path& path, const TimestampedSignal& sig) {
  auto out = open_for_write(path);
  write_timestamped_signal(out, sig);
}

BeatSeries read_beats(std::istream& in, std::optional<double> sample_rate, std::string_view source) {
  if (sample_rate && !(*sample_rate > 0.0)) {
    throw std::invalid_argument("read beats: sample rate must be positive");
  }
  auto beats = read_increasing_column(in, source, sample_rate.value_or(1.0), "beats");
  if (beats.size() < 2) throw ParseError(std::string(source), 0, "need at least 2 beats");
  return BeatSeries(std::move(beats));
}

BeatSeries read_beats(const std::filesystem::path& path, std::optional<double> sample_rate) {
  auto in = open_for_read(path);
  return read_beats(in, sample_rate, path.string());
}

void write_beats(std::ostream& out, const BeatSeries& beats) { write_column(out, beats.times()); }

void write_beats(const std::filesystem::path& path, const BeatSeries& beats) {
  auto out = open_for_write(path);
  write_beats(out, beats);
}

std::vector<double> read_frame_timestamps(std::istream& in, std::string_view source) {
  return read_increasing_column(in, source, 1.0, "frame timestamps");
}

std::vector<double> read_frame_timestamps(const std::filesystem::path& path) {
  auto in = open_for_read(path);
  return read_frame_timestamps(in, path.string());
}

void write_frame_timestamps(std::ostream& out, const std::vector<double>& timestamps) {
  write_column(out, timestamps);
}

void write_frame_timestamps(const std::filesystem::path& path,
                            const std::vector<double>& timestamps) {
  auto out = open_for_write(path);
  write_frame_timestamps(out, timestamps);
}

CameraConfig read_camera_config(std::istream& in, const std::filesystem::path& base_dir,
                                std::string_view source) {
  std::map<std::string, std::pair<std::string, std::size_t>> entries;
  for_each_data_line(in, [&](std::size_t line, std::string_view text) {
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) throw ParseError(std::string(source), line, "expected 'key = value'");
    std::string key(trim(text.substr(0, eq)));
    std::string value(trim(text.substr(eq + 1)));
    static constexpr std::array<std::string_view, 12> known = {
        "fps", "jitter_kind", "jitter_param", "readout_time", "scan_axis", "width", "height",
        "region_top", "region_bottom", "region_left", "region_right", "offset_samples"};
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ParseError(std::string(source), line, "unknown key '" + key + "'");
    }
    if (!entries.emplace(key, std::pair{value, line}).second) {
      throw ParseError(std::string(source), line, "duplicate key '" + key + "'");
    }
  });

  auto get = [&](const std::string& key) -> const std::pair<std::string, std::size_t>* {
    const auto it = entries.find(key);
    return it == entries.end() ? nullptr : &it->second;
  };
  auto number = [&](const std::string& key, double fallback) {
    const auto* e = get(key);
    return e ? parse_field(e->first, source, e->second) : fallback;
  };

  CameraConfig config;
  CameraModel& m = config.model;
  m.nominal_fps = number("fps", m.nominal_fps);
  m.readout_time = number("readout_time", 1.0 / m.nominal_fps);
  if (const auto* e = get("scan_axis")) {
    try {
      m.scan_axis = parse_scan_axis(e->first);
    } catch (const std::invalid_argument& err) {
      throw ParseError(std::string(source), e->second, err.what());
    }
  }
  if (const auto* e = get("width")) m.width = parse_int(e->first, source, e->second);
  if (const auto* e = get("height")) m.height = parse_int(e->first, source, e->second);
  if (const auto* e = get("offset_samples")) {
    const int samples = parse_int(e->first, source, e->second);
    if (samples < 1) throw ParseError(std::string(source), e->second, "offset_samples must be >= 1");
    config.offset_samples = static_cast<std::size_t>(samples);
  }

  const std::string kind = get("jitter_kind") ? get("jitter_kind")->first : "none";
  const auto* param = get("jitter_param");
  const std::size_t kind_line = get("jitter_kind") ? get("jitter_kind")->second : 0;
  if (kind == "none") {
    m.jitter = NoJitter{};
  } else if (kind == "uniform" || kind == "gaussian") {
    if (!param) throw ParseError(std::string(source), kind_line, "jitter_param required for " + kind);
    const double p = parse_field(param->first, source, param->second);
    if (kind == "uniform") {
      m.jitter = UniformJitter{p};
    } else {
      m.jitter = GaussianJitter{p};
    }
  } else if (kind == "explicit") {
    if (!param) throw ParseError(std::string(source), kind_line, "jitter_param must name a timestamp file");
    std::filesystem::path file = param->first;
    if (file.is_relative()) file = base_dir / file;
    m.jitter = ExplicitTimestamps{read_frame_timestamps(file)};
  } else {
    throw ParseError(std::string(source), kind_line, "unknown jitter_kind '" + kind + "'");
  }

  config.layout = RegionLayout::halves(m.width, m.height);
  for (Region r : kAllRegions) {
    if (const auto* e = get("region_" + std::string(region_name(r)))) {
      config.layout.at(r) = parse_rect(e->first, source, e->second);
    }
  }

  try {
    m.validate();
    config.layout.validate(m);
  } catch (const std::invalid_argument& err) {
    throw ParseError(std::string(source), 0, err.what());
  }
  return config;
}

CameraConfig read_camera_config(const std::filesystem::path& path) {
  auto in = open_for_read(path);
  return read_camera_config(in, path.parent_path(), path.string());
}

void write_camera_config(std::ostream& out, const CameraConfig& config,
                         std::string_view explicit_file) {
  const CameraModel& m = config.model;
  out << "fps = " << format_double(m.nominal_fps) << '\n';
  out << "jitter_kind = " << jitter_kind_name(m.jitter) << '\n';
  if (const auto* u = std::get_if<UniformJitter>(&m.jitter)) {
    out << "jitter_param = " << format_double(u->half_width) << '\n';
  } else if (const auto* g = std::get_if<GaussianJitter>(&m.jitter)) {
    out << "jitter_param = " << format_double(g->sigma) << '\n';
  } else if (std::holds_alternative<ExplicitTimestamps>(m.jitter)) {
    out << "jitter_param = " << explicit_file << '\n';
  }
  out << "readout_time = " << format_double(m.readout_time) << '\n';
  out << "scan_axis = " << scan_axis_name(m.scan_axis) << '\n';
  out << "width = " << m.width << '\n';
  out << "height = " << m.height << '\n';
  for (Region r : kAllRegions) {
    out << "region_" << region_name(r) << " = " << format_rect(config.layout.at(r)) << '\n';
  }
  out << "offset_samples = " << config.offset_samples << '\n';
}

std::string_view input_kind_name(InputKind kind) {
  switch (kind) {
    case InputKind::signal: return "signal";
    case InputKind::beats: return "beats";
    case InputKind::frame_timestamps: return "frame_timestamps";
    case InputKind::camera_config: return "camera_config";
  }
  return "unknown";
}

std::string_view units_name(Units units) {
  switch (units) {
    case Units::seconds: return "seconds";
    case Units::samples: return "samples";
    case Units::config: return "config";
  }
  return "unknown";
}

void Manifest::validate() const {
  const bool ok = [&] {
    switch (kind) {
      case InputKind::signal:
      case InputKind::frame_timestamps: return units == Units::seconds;
      case InputKind::beats: return units == Units::seconds || units == Units::samples;
      case InputKind::camera_config: return units == Units::config;
    }
    return false;
  }();
  if (!ok) {
    throw std::invalid_argument("manifest: units '" + std::string(units_name(units)) +
                                "' not valid for " + std::string(input_kind_name(kind)));
  }
  if (units == Units::samples && !(sample_rate && *sample_rate > 0.0)) {
    throw std::invalid_argument("manifest: sample-index beats need a positive sample rate");
  }
  if (units != Units::samples && sample_rate) {
    throw std::invalid_argument("manifest: a sample rate only applies to sample-index beats");
  }
}

LoadedInput load(const Manifest& manifest) {
  manifest.validate();
  switch (manifest.kind) {
    case InputKind::signal: return read_timestamped_signal(manifest.path);
    case InputKind::beats: return read_beats(manifest.path, manifest.sample_rate);
    case InputKind::frame_timestamps: return read_frame_timestamps(manifest.path);
    case InputKind::camera_config: return read_camera_config(manifest.path);
  }
  throw std::invalid_argument("manifest: unknown input kind");
}

}  // namespace rppg::io
