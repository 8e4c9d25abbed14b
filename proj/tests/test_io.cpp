#include "doctest.h"

#include "rppg/io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace rppg;
using namespace rppg::io;

namespace {

std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("rppg_io_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

std::size_t error_line(auto&& fn) {
  try {
    fn();
  } catch (const ParseError& e) {
    return e.line();
  }
  return std::numeric_limits<std::size_t>::max();
}

// Doubles with a wide spread of magnitudes and digit counts.
std::vector<double> awkward_values(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> mantissa(-1.0, 1.0);
  std::uniform_int_distribution<int> exponent(-30, 30);
  std::vector<double> v(n);
  for (double& x : v) x = std::ldexp(mantissa(rng), exponent(rng));
  v[0] = 0.1;
  v[1] = -0.0;
  v[2] = std::numeric_limits<double>::denorm_min();
  return v;
}

std::vector<double> increasing_values(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> step(1e-6, 0.7);
  std::vector<double> t{std::uniform_real_distribution<double>(-5.0, 5.0)(rng)};
  while (t.size() < n) t.push_back(t.back() + step(rng));
  return t;
}

}  // namespace

TEST_CASE("format_double and parse_double") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(2.0) == "2");
  CHECK(parse_double(" 1e-3 ") == 0.001);
  CHECK_THROWS_AS(parse_double("1,5"), std::invalid_argument);
  CHECK_THROWS_AS(parse_double(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_double("nan"), std::invalid_argument);
  CHECK_THROWS_AS(parse_double("inf"), std::invalid_argument);
}

TEST_CASE("read_timestamped_signal") {
  SUBCASE("two rows") {
    std::istringstream in("t,value\n0,1\n1,2\n");
    const auto s = read_timestamped_signal(in);
    CHECK(s.size() == 2);
    CHECK(s.timestamps() == std::vector<double>{0, 1});
    CHECK(s.values() == std::vector<double>{1, 2});
  }
  SUBCASE("comments, blank lines and CRLF are tolerated") {
    std::istringstream in("# recorded PPG\n\nt,value\r\n0,1\r\n# mid\n0.5,3\n");
    CHECK(read_timestamped_signal(in).values() == std::vector<double>{1, 3});
  }
  SUBCASE("duplicated timestamp names the offending line") {
    std::istringstream in("t,value\n0,1\n0.5,2\n0.5,3\n");
    CHECK(error_line([&] { read_timestamped_signal(in); }) == 4);
  }
  SUBCASE("malformed lines") {
    CHECK(error_line([] {
            std::istringstream in("t,value\n0,1\n1;2\n");
            read_timestamped_signal(in);
          }) == 3);
    CHECK(error_line([] {
            std::istringstream in("t,value\n0,1\n1,2,3\n");
            read_timestamped_signal(in);
          }) == 3);
    CHECK(error_line([] {
            std::istringstream in("time,value\n0,1\n");
            read_timestamped_signal(in);
          }) == 1);
    CHECK(error_line([] {
            std::istringstream in("t,value\n0,abc\n");
            read_timestamped_signal(in);
          }) == 2);
  }
  SUBCASE("too few rows") {
    std::istringstream one("t,value\n0,1\n");
    CHECK_THROWS_AS(read_timestamped_signal(one), ParseError);
    std::istringstream empty("");
    CHECK_THROWS_AS(read_timestamped_signal(empty), ParseError);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(read_timestamped_signal(std::filesystem::path("/nonexistent/signal.csv")), ParseError);
  }
}

TEST_CASE("read_beats") {
  std::istringstream samples("250\n500\n");
  CHECK(read_beats(samples, 250.0).times() == std::vector<double>{1.0, 2.0});
  std::istringstream seconds("0.5\n1.2\n");
  CHECK(read_beats(seconds, std::nullopt).times() == std::vector<double>{0.5, 1.2});
  std::istringstream commented("# subject 1\n0.5\n\n1.2\n0.9\n");
  CHECK(error_line([&] { read_beats(commented, std::nullopt); }) == 5);
  std::istringstream empty("# nothing\n");
  CHECK_THROWS_AS(read_beats(empty, std::nullopt), ParseError);
  std::istringstream single("3\n");
  CHECK_THROWS_AS(read_beats(single, std::nullopt), ParseError);
  std::istringstream rate("1\n2\n");
  CHECK_THROWS_AS(read_beats(rate, 0.0), std::invalid_argument);
}

TEST_CASE("read_frame_timestamps") {
  std::istringstream three("0\n0.033\n0.066\n");
  CHECK(read_frame_timestamps(three).size() == 3);
  std::istringstream unordered("0\n0.066\n0.033\n");
  CHECK(error_line([&] { read_frame_timestamps(unordered); }) == 3);
  std::istringstream empty("");
  CHECK_THROWS_AS(read_frame_timestamps(empty), ParseError);

  std::ostringstream probe;
  for (int i = 0; i < 300; ++i) probe << format_double(i / 30.0) << '\n';
  std::istringstream in(probe.str());
  const auto t = read_frame_timestamps(in);
  CHECK(t.size() == 300);
  CHECK(t.back() - t.front() + 1.0 / 30.0 == doctest::Approx(10.0));
}

TEST_CASE("camera config") {
  const auto dir = scratch_dir("config");

  SUBCASE("defaults") {
    std::istringstream in("# defaults only\n");
    const auto c = read_camera_config(in);
    CHECK(c.model.nominal_fps == 30.0);
    CHECK(c.model.readout_time == 1.0 / 30.0);
    CHECK(c.model.scan_axis == ScanAxis::vertical);
    CHECK(std::holds_alternative<NoJitter>(c.model.jitter));
    CHECK(c.layout == RegionLayout::halves(640, 480));
    CHECK(c.offset_samples == kDefaultOffsetSamples);
  }
  SUBCASE("full config") {
    std::istringstream in(
        "fps = 25\njitter_kind = gaussian\njitter_param = 0.003\nreadout_time = 0.02\n"
        "scan_axis = horizontal\nwidth = 320\nheight = 240\nregion_top = 0,0,320,100\n"
        "offset_samples = 8\n");
    const auto c = read_camera_config(in);
    CHECK(c.model.nominal_fps == 25.0);
    CHECK(std::get<GaussianJitter>(c.model.jitter).sigma == 0.003);
    CHECK(c.model.readout_time == 0.02);
    CHECK(c.model.scan_axis == ScanAxis::horizontal);
    CHECK(c.layout.top == Rect{0, 0, 320, 100});
    CHECK(c.layout.bottom == Rect{0, 120, 320, 120});
    CHECK(c.offset_samples == 8);
  }
  SUBCASE("explicit timestamps resolve next to the config") {
    write_text(dir / "frames.txt", "0\n0.04\n0.07\n0.1\n");
    write_text(dir / "camera.cfg", "jitter_kind = explicit\njitter_param = frames.txt\n");
    const auto c = read_camera_config(dir / "camera.cfg");
    CHECK(std::get<ExplicitTimestamps>(c.model.jitter).timestamps == std::vector<double>{0, 0.04, 0.07, 0.1});
  }
  SUBCASE("errors name the line") {
    auto line_of = [](const std::string& text) {
      return error_line([&] {
        std::istringstream in(text);
        read_camera_config(in);
      });
    };
    CHECK(line_of("fps = 30\ncolour = red\n") == 2);
    CHECK(line_of("fps = 30\nfps = 25\n") == 2);
    CHECK(line_of("fps 30\n") == 1);
    CHECK(line_of("\nscan_axis = diagonal\n") == 2);
    CHECK(line_of("width = 6.5\n") == 1);
    CHECK(line_of("jitter_kind = wobbly\n") == 1);
    CHECK(line_of("region_left = 0,0,10\n") == 1);
    CHECK(line_of("fps = 30\nreadout_time = 0.05\n") == 0);
  }
  SUBCASE("round trip") {
    CameraConfig c;
    c.model.nominal_fps = 29.97;
    c.model.readout_time = 0.0301;
    c.model.jitter = UniformJitter{0.0041};
    c.model.scan_axis = ScanAxis::horizontal;
    c.layout.left = Rect{10, 20, 200, 300};
    c.offset_samples = 5;
    std::ostringstream out;
    write_camera_config(out, c);
    std::istringstream in(out.str());
    const auto back = read_camera_config(in);
    CHECK(back.model.nominal_fps == c.model.nominal_fps);
    CHECK(back.model.readout_time == c.model.readout_time);
    CHECK(std::get<UniformJitter>(back.model.jitter).half_width == 0.0041);
    CHECK(back.model.scan_axis == c.model.scan_axis);
    CHECK(back.layout == c.layout);
    CHECK(back.offset_samples == c.offset_samples);

    c.model.jitter = ExplicitTimestamps{{0.0, 0.03, 0.07}};
    std::ofstream(dir / "rt.cfg") << [&] {
      std::ostringstream s;
      write_camera_config(s, c, "rt_frames.txt");
      return s.str();
    }();
    write_frame_timestamps(dir / "rt_frames.txt", std::get<ExplicitTimestamps>(c.model.jitter).timestamps);
    const auto again = read_camera_config(dir / "rt.cfg");
    CHECK(std::get<ExplicitTimestamps>(again.model.jitter).timestamps == std::vector<double>{0.0, 0.03, 0.07});
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("manifest") {
  const auto dir = scratch_dir("manifest");
  write_text(dir / "beats.txt", "250\n500\n750\n");
  write_text(dir / "sig.csv", "t,value\n0,1\n1,2\n");

  Manifest beats{InputKind::beats, dir / "beats.txt", Units::samples, 250.0};
  CHECK(std::get<BeatSeries>(load(beats)).times() == std::vector<double>{1, 2, 3});
  Manifest sig{InputKind::signal, dir / "sig.csv", Units::seconds, std::nullopt};
  CHECK(std::get<TimestampedSignal>(load(sig)).size() == 2);

  CHECK_THROWS_AS((Manifest{InputKind::beats, "x", Units::samples, std::nullopt}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((Manifest{InputKind::signal, "x", Units::samples, 250.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((Manifest{InputKind::beats, "x", Units::seconds, 250.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((Manifest{InputKind::camera_config, "x", Units::seconds, std::nullopt}.validate()),
                  std::invalid_argument);
  CHECK(input_kind_name(InputKind::frame_timestamps) == "frame_timestamps");
  std::filesystem::remove_all(dir);
}

TEST_CASE("round trips preserve every value") {
  std::mt19937_64 rng(8);
  const auto dir = scratch_dir("roundtrip");
  for (int trial = 0; trial < 25; ++trial) {
    const auto t = increasing_values(rng, 200);
    const TimestampedSignal sig(t, awkward_values(rng, 200));
    write_timestamped_signal(dir / "sig.csv", sig);
    CHECK(read_timestamped_signal(dir / "sig.csv") == sig);

    const BeatSeries beats(increasing_values(rng, 150));
    write_beats(dir / "beats.txt", beats);
    CHECK(read_beats(dir / "beats.txt").times() == beats.times());

    const auto frames = increasing_values(rng, 300);
    write_frame_timestamps(dir / "frames.txt", frames);
    CHECK(read_frame_timestamps(dir / "frames.txt") == frames);
  }
  std::filesystem::remove_all(dir);
}
