#pragma once

#include "rppg/capture.hpp"
#include "rppg/hr_window.hpp"
#include "rppg/signal.hpp"

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

// Plain-text formats. All files are UTF-8 with LF line endings and use '.' as
// the decimal separator regardless of locale. Lines starting with '#' are
// comments and blank lines are ignored.
//
//   timestamped signal   header "t,value", then "<seconds>,<value>" per line
//   beats                one value per line: seconds, or sample index with a rate
//   frame timestamps     one value per line in seconds
//   camera config        "key = value" per line (see CameraConfig)
namespace rppg::io {

// Reader failure naming the source and the first offending line (1-based; 0
// when the problem is not tied to a line, e.g. an empty file).
class ParseError : public std::runtime_error {
public:
  ParseError(std::string source, std::size_t line, const std::string& what);

  const std::string& source() const { return source_; }
  std::size_t line() const { return line_; }

private:
  std::string source_;
  std::size_t line_;
};

// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);
double parse_double(std::string_view text);  // throws std::invalid_argument

TimestampedSignal read_timestamped_signal(std::istream& in, std::string_view source = "<stream>");
TimestampedSignal read_timestamped_signal(const std::filesystem::path& path);
void write_timestamped_signal(std::ostream& out, const TimestampedSignal& sig);
void write_timestamped_signal(const std::filesystem::path& path, const TimestampedSignal& sig);

// Values are seconds, or sample indices divided by `sample_rate` when given.
BeatSeries read_beats(std::istream& in, std::optional<double> sample_rate,
                      std::string_view source = "<stream>");
BeatSeries read_beats(const std::filesystem::path& path, std::optional<double> sample_rate = {});
void write_beats(std::ostream& out, const BeatSeries& beats);
void write_beats(const std::filesystem::path& path, const BeatSeries& beats);

std::vector<double> read_frame_timestamps(std::istream& in, std::string_view source = "<stream>");
std::vector<double> read_frame_timestamps(const std::filesystem::path& path);
void write_frame_timestamps(std::ostream& out, const std::vector<double>& timestamps);
void write_frame_timestamps(const std::filesystem::path& path,
                            const std::vector<double>& timestamps);

// Keys: fps, jitter_kind (none|uniform|gaussian|explicit), jitter_param
// (seconds for uniform/gaussian, a frame-timestamp file for explicit, resolved
// relative to the config file), readout_time (default 1/fps), scan_axis
// (vertical|horizontal), width, height, region_top, region_bottom,
// region_left, region_right ("x,y,width,height"; default: frame halves),
// offset_samples.
struct CameraConfig {
  CameraModel model;
  RegionLayout layout = RegionLayout::halves(model.width, model.height);
  std::size_t offset_samples = kDefaultOffsetSamples;
};

CameraConfig read_camera_config(std::istream& in, const std::filesystem::path& base_dir = {},
                                std::string_view source = "<stream>");
CameraConfig read_camera_config(const std::filesystem::path& path);
// Explicit timestamp lists are written as a sibling file named `explicit_file`.
void write_camera_config(std::ostream& out, const CameraConfig& config,
                         std::string_view explicit_file = "explicit_timestamps.txt");

enum class InputKind { signal, beats, frame_timestamps, camera_config };
enum class Units { seconds, samples, config };

std::string_view input_kind_name(InputKind kind);
std::string_view units_name(Units units);

struct Manifest {
  InputKind kind = InputKind::signal;
  std::filesystem::path path;
  Units units = Units::seconds;
  std::optional<double> sample_rate;  // required when units == samples

  void validate() const;
};

using LoadedInput = std::variant<TimestampedSignal, BeatSeries, std::vector<double>, CameraConfig>;

LoadedInput load(const Manifest& manifest);

}  // namespace rppg::io
