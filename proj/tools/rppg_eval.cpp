#include "rppg/capture.hpp"
#include "rppg/hr_window.hpp"
#include "rppg/io.hpp"
#include "rppg/phase.hpp"
#include "rppg/resample.hpp"
#include "rppg/spectrum.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace rppg;
using io::format_double;

namespace {

struct Common {
  std::string out;
  std::uint64_t seed = 0;
};

void add_common(CLI::App* cmd, Common& common) {
  cmd->add_option("--out", common.out, "Output directory")->required();
  cmd->add_option("--seed", common.seed, "Random seed (recorded in every run)")->capture_default_str();
  cmd->configurable();
}

fs::path prepare_out(const Common& common) {
  const fs::path dir(common.out);
  fs::create_directories(dir);
  return dir;
}

// Effective configuration of one subcommand, loadable again with --config.
// Written from parsed results or defaults in one canonical form so that a
// run from the echo echoes the same file.
void echo_config(const fs::path& dir, const CLI::App* cmd) {
  std::ofstream out(dir / "run_config.ini", std::ios::binary | std::ios::trunc);
  out << "[" << cmd->get_name() << "]\n";
  for (const CLI::Option* opt : cmd->get_options()) {
    if (opt->get_lnames().empty() || opt->get_lnames().front() == "help") continue;
    std::vector<std::string> items = opt->results();
    if (opt->count() == 0) {
      items.clear();
      std::stringstream text(opt->get_default_str());
      for (std::string item; std::getline(text, item, ',');) items.push_back(item);
    }
    if (items.empty() || (items.size() == 1 && items.front().empty())) continue;
    out << opt->get_lnames().front() << '=';
    if (items.size() > 1) out << '[';
    for (std::size_t i = 0; i < items.size(); ++i) out << (i ? ", " : "") << '"' << items[i] << '"';
    if (items.size() > 1) out << ']';
    out << '\n';
  }
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void write_uniform(const fs::path& path, const UniformSignal& sig) {
  io::write_timestamped_signal(path, sig.to_timestamped());
}

void write_spectrum(const fs::path& path, const PowerSpectrum& spec) {
  auto out = open_out(path);
  out << "frequency_hz,power\n";
  for (std::size_t k = 0; k < spec.power.size(); ++k) {
    out << format_double(spec.frequency_at(k)) << ',' << format_double(spec.power[k]) << '\n';
  }
}

// A timestamped file whose timestamps sit on a regular grid.
UniformSignal as_uniform(const TimestampedSignal& sig, const std::string& source) {
  const auto& t = sig.timestamps();
  const double span = t.back() - t.front();
  const double rate = static_cast<double>(t.size() - 1) / span;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (std::abs(t[i] - (t.front() + static_cast<double>(i) / rate)) > 1e-9 * std::max(1.0, span)) {
      throw std::invalid_argument(source + ": waveform samples are not regularly spaced (line " +
                                  std::to_string(i + 2) + ")");
    }
  }
  return UniformSignal(t.front(), rate, sig.values());
}

// Comma-joined default text for list options.
std::string list_default(const std::vector<double>& values) {
  std::string text;
  for (std::size_t i = 0; i < values.size(); ++i) text += (i ? "," : "") + format_double(values[i]);
  return text;
}

Band make_band(double low, double high) {
  if (!(low > 0.0 && high > low)) throw std::invalid_argument("band: need 0 < --band-low < --band-high");
  return {low, high};
}

// --- gen-waveform ---------------------------------------------------------

struct GenOptions {
  std::string shape = "sine";
  std::vector<double> freqs{1.2};
  std::vector<double> amps{1.0};
  std::vector<double> phases;
  double bpm = 60.0;
  double duration = 10.0;
  double rate = kDefaultResampleRate;
  std::string input;
};

void run_gen(const GenOptions& o, const Common& common, const CLI::App* cmd) {
  const auto dir = prepare_out(common);
  const fs::path target = dir / "waveform.csv";
  std::string described;
  if (o.shape == "from-file") {
    if (o.input.empty()) throw std::invalid_argument("gen-waveform: from-file needs --input");
    const auto sig = io::read_timestamped_signal(fs::path(o.input));
    io::write_timestamped_signal(target, sig);
    described = std::to_string(sig.size()) + " samples copied from " + o.input;
  } else {
    const UniformSignal sig = [&] {
      if (o.shape == "ppg") return synthetic_ppg(o.bpm, o.duration, o.rate);
      if (o.freqs.size() != o.amps.size() || (!o.phases.empty() && o.phases.size() != o.freqs.size())) {
        throw std::invalid_argument("gen-waveform: --freqs, --amps and --phases must have equal lengths");
      }
      if (o.shape == "sine" && o.freqs.size() != 1) {
        throw std::invalid_argument("gen-waveform: sine takes exactly one frequency");
      }
      std::vector<SineComponent> parts;
      for (std::size_t i = 0; i < o.freqs.size(); ++i) {
        parts.push_back({o.freqs[i], o.amps[i], o.phases.empty() ? 0.0 : o.phases[i]});
      }
      return sum_of_sines(parts, o.duration, o.rate);
    }();
    write_uniform(target, sig);
    described = std::to_string(sig.size()) + " samples at " + format_double(o.rate) + " Hz";
  }
  echo_config(dir, cmd);
  std::cout << "gen-waveform: " << o.shape << ", " << described << " -> " << target.string() << '\n';
}

// --- simulate -------------------------------------------------------------

struct SimOptions {
  std::string camera;
  std::string waveform;
  double duration = 10.0;
};

void run_simulate(const SimOptions& o, const Common& common, const CLI::App* cmd) {
  const auto dir = prepare_out(common);
  const io::CameraConfig config =
      o.camera.empty() ? io::CameraConfig{} : io::read_camera_config(fs::path(o.camera));
  const Waveform wave(as_uniform(io::read_timestamped_signal(fs::path(o.waveform)), o.waveform));
  const auto frames = generate_frame_timestamps(config.model, o.duration, common.seed);
  const auto regions = capture_region_signals(wave, config.model, config.layout, frames, config.offset_samples);

  for (Region r : kAllRegions) {
    io::write_timestamped_signal(dir / ("region_" + std::string(region_name(r)) + ".csv"), regions.at(r));
  }
  io::write_frame_timestamps(dir / "frame_timestamps.txt", frames);
  {
    auto out = open_out(dir / "camera.cfg");
    io::write_camera_config(out, config, "camera_frames.txt");
  }
  if (const auto* e = std::get_if<ExplicitTimestamps>(&config.model.jitter)) {
    io::write_frame_timestamps(dir / "camera_frames.txt", e->timestamps);
  }
  echo_config(dir, cmd);
  std::cout << "simulate: " << frames.size() << " frames, jitter " << jitter_kind_name(config.model.jitter)
            << ", readout " << format_double(config.model.readout_time) << " s, scan "
            << scan_axis_name(config.model.scan_axis) << ", seed " << common.seed << " -> " << dir.string() << '\n';
}

// --- compare-fps ----------------------------------------------------------

struct CompareOptions {
  std::string signal;
  double rate = kDefaultResampleRate;
  std::string taper = "hann";
  double band_low = 0.7;
  double band_high = 3.0;
  double piece_length = 0.0;
  double piece_step = 0.0;
};

struct PieceResult {
  double start = 0.0;
  double end = 0.0;
  DiffMetrics amplitude;
  DiffMetrics spectral;
  double good_peak = 0.0;
  double bad_peak = 0.0;
  bool same_bin = false;
};

std::vector<TimestampedSignal> split_pieces(const TimestampedSignal& sig, double length, double step) {
  if (length <= 0.0) return {sig};
  if (!(step > 0.0)) throw std::invalid_argument("compare-fps: --piece-step must be positive");
  const auto& t = sig.timestamps();
  std::vector<TimestampedSignal> pieces;
  for (std::size_t k = 0;; ++k) {
    const double start = sig.start_time() + static_cast<double>(k) * step;
    if (start + length > sig.end_time() + 1e-9) break;
    std::vector<double> pt, pv;
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (t[i] >= start && t[i] <= start + length) {
        pt.push_back(t[i]);
        pv.push_back(sig.values()[i]);
      }
    }
    if (pt.size() >= 2) pieces.emplace_back(std::move(pt), std::move(pv));
  }
  if (pieces.empty()) throw std::invalid_argument("compare-fps: signal shorter than --piece-length");
  return pieces;
}

void run_compare(const CompareOptions& o, const Common& common, const CLI::App* cmd) {
  const auto dir = prepare_out(common);
  const Taper taper = parse_taper(o.taper);
  const Band band = make_band(o.band_low, o.band_high);
  const auto pieces = split_pieces(io::read_timestamped_signal(fs::path(o.signal)), o.piece_length, o.piece_step);
  const bool single = pieces.size() == 1 && o.piece_length <= 0.0;

  std::vector<PieceResult> results;
  for (std::size_t p = 0; p < pieces.size(); ++p) {
    const UniformSignal good = resample_aware(pieces[p], o.rate);
    const UniformSignal bad = resample_naive(pieces[p], o.rate);
    const PowerSpectrum good_spec = power_spectrum(good, taper);
    const PowerSpectrum bad_spec = power_spectrum(bad, taper);
    PieceResult r;
    r.start = pieces[p].start_time();
    r.end = pieces[p].end_time();
    r.amplitude = amplitude_difference(good, bad);
    r.spectral = spectral_difference(good_spec, bad_spec);
    r.good_peak = dominant_frequency(good_spec, band);
    r.bad_peak = dominant_frequency(bad_spec, band);
    r.same_bin = dominant_bin(good_spec, band) == dominant_bin(bad_spec, band);
    results.push_back(r);

    const std::string suffix = single ? "" : "_" + std::to_string(p);
    write_uniform(dir / ("good" + suffix + ".csv"), good);
    write_uniform(dir / ("bad" + suffix + ".csv"), bad);
    write_spectrum(dir / ("good_spectrum" + suffix + ".csv"), good_spec);
    write_spectrum(dir / ("bad_spectrum" + suffix + ".csv"), bad_spec);
  }

  auto out = open_out(dir / "metrics.csv");
  out << "piece,start,end,amp_max_abs,amp_rms,amp_relative_rms_pct,spec_max_abs,spec_rms,"
         "spec_relative_rms_pct,good_peak_hz,bad_peak_hz,same_bin\n";
  double worst_amp = 0.0, worst_spec = 0.0;
  std::size_t same = 0;
  for (std::size_t p = 0; p < results.size(); ++p) {
    const auto& r = results[p];
    out << p << ',' << format_double(r.start) << ',' << format_double(r.end) << ','
        << format_double(r.amplitude.max_abs) << ',' << format_double(r.amplitude.rms) << ','
        << format_double(r.amplitude.relative_rms) << ',' << format_double(r.spectral.max_abs) << ','
        << format_double(r.spectral.rms) << ',' << format_double(r.spectral.relative_rms) << ','
        << format_double(r.good_peak) << ',' << format_double(r.bad_peak) << ',' << (r.same_bin ? 1 : 0) << '\n';
    worst_amp = std::max(worst_amp, r.amplitude.relative_rms);
    worst_spec = std::max(worst_spec, r.spectral.relative_rms);
    same += r.same_bin ? 1 : 0;
  }
  echo_config(dir, cmd);
  std::cout << "compare-fps: " << results.size() << " piece(s), worst amplitude relative RMS "
            << format_double(worst_amp) << " %, worst spectral relative RMS " << format_double(worst_spec)
            << " %, dominant bin equal in " << same << "/" << results.size() << '\n';
}

// --- phase ----------------------------------------------------------------

struct PhaseOptions {
  std::string a;
  std::string b;
  std::string regions;
  double rate = kDefaultResampleRate;
  double band_low = 0.7;
  double band_high = 3.0;
  double window = 8.0;
  double track_step = 1.0;
  double ref_bpm = 60.0;
};

void write_track(const fs::path& path, const std::vector<PhaseEstimate>& track, double ref_bpm) {
  auto out = open_out(path);
  out << "time,shift_seconds,shift_degrees,dominant_freq_hz,coherence,low_quality\n";
  for (const auto& e : track) {
    out << format_double(e.time) << ',' << format_double(e.shift_seconds) << ','
        << format_double(seconds_to_degrees(e.shift_seconds, ref_bpm)) << ',' << format_double(e.dominant_freq)
        << ',' << format_double(e.quality) << ',' << (e.low_quality() ? 1 : 0) << '\n';
  }
}

void report_estimate(std::ostream& out, const std::string& prefix, const PhaseEstimate& e, double ref_bpm) {
  out << prefix << "shift_seconds=" << format_double(e.shift_seconds) << '\n'
      << prefix << "shift_degrees=" << format_double(seconds_to_degrees(e.shift_seconds, ref_bpm)) << '\n'
      << prefix << "dominant_freq_hz=" << format_double(e.dominant_freq) << '\n'
      << prefix << "coherence=" << format_double(e.quality) << '\n';
}

void run_phase(const PhaseOptions& o, const Common& common, const CLI::App* cmd) {
  const auto dir = prepare_out(common);
  const Band band = make_band(o.band_low, o.band_high);

  if (!o.regions.empty()) {
    const fs::path src(o.regions);
    auto load = [&](Region r) {
      return io::read_timestamped_signal(src / ("region_" + std::string(region_name(r)) + ".csv"));
    };
    const RegionSignals regions{load(Region::top), load(Region::bottom), load(Region::left), load(Region::right)};
    const auto report = axis_shift_report(regions, o.rate, band);
    const auto top = resample_aware(regions.top, o.rate);
    const auto bottom = resample_aware(regions.bottom, o.rate);
    const auto left = resample_aware(regions.left, o.rate);
    const auto right = resample_aware(regions.right, o.rate);
    const auto vertical = track_phase_shift(bottom, top, o.window, o.track_step, band);
    const auto horizontal = track_phase_shift(right, left, o.window, o.track_step, band);
    write_track(dir / "track_vertical.csv", vertical, o.ref_bpm);
    write_track(dir / "track_horizontal.csv", horizontal, o.ref_bpm);
    auto out = open_out(dir / "phase_report.txt");
    out << format_axis_report(report, o.ref_bpm);
    report_estimate(out, "vertical_median_", median_estimate(vertical), o.ref_bpm);
    report_estimate(out, "horizontal_median_", median_estimate(horizontal), o.ref_bpm);
    echo_config(dir, cmd);
    std::cout << "phase: vertical " << format_double(report.vertical.shift_seconds * 1e3) << " ms ("
              << format_double(seconds_to_degrees(report.vertical.shift_seconds, o.ref_bpm)) << " deg), horizontal "
              << format_double(report.horizontal.shift_seconds * 1e3) << " ms ("
              << format_double(seconds_to_degrees(report.horizontal.shift_seconds, o.ref_bpm)) << " deg) at "
              << format_double(o.ref_bpm) << " bpm\n";
    return;
  }

  if (o.a.empty() || o.b.empty()) throw std::invalid_argument("phase: give --a and --b, or --regions");
  const auto sa = io::read_timestamped_signal(fs::path(o.a));
  const auto sb = io::read_timestamped_signal(fs::path(o.b));
  const double start = std::max(sa.start_time(), sb.start_time());
  const double end = std::min(sa.end_time(), sb.end_time());
  if (!(end > start)) throw std::invalid_argument("phase: signals do not overlap in time");
  const std::size_t count = grid_size(start, end, o.rate);
  const auto a = resample_on_grid(sa, start, o.rate, count);
  const auto b = resample_on_grid(sb, start, o.rate, count);
  const auto estimate = estimate_phase_shift(a, b, band);
  const auto track = track_phase_shift(a, b, o.window, o.track_step, band);
  write_track(dir / "track.csv", track, o.ref_bpm);
  auto out = open_out(dir / "phase_report.txt");
  out << "reference_bpm=" << format_double(o.ref_bpm) << '\n';
  report_estimate(out, "", estimate, o.ref_bpm);
  out << "low_quality=" << (estimate.low_quality() ? 1 : 0) << '\n';
  report_estimate(out, "median_", median_estimate(track), o.ref_bpm);
  out << "windows=" << track.size() << '\n';
  echo_config(dir, cmd);
  std::cout << "phase: shift " << format_double(estimate.shift_seconds * 1e3) << " ms ("
            << format_double(seconds_to_degrees(estimate.shift_seconds, o.ref_bpm)) << " deg at "
            << format_double(o.ref_bpm) << " bpm), coherence " << format_double(estimate.quality) << ", "
            << track.size() << " tracked windows\n";
}

// --- window-matrix --------------------------------------------------------

struct MatrixOptions {
  std::vector<std::string> beats;
  std::vector<double> sizes = WindowSpec{}.sizes;
  double step = 5.0;
  double sample_rate = 0.0;
};

std::string size_label(double s) { return format_double(s); }

void write_table(const fs::path& path, const DiffMatrix& m) {
  auto out = open_out(path);
  out << "s1\\s2";
  for (std::size_t j = 0; j + 1 < m.sizes.size(); ++j) out << ',' << size_label(m.sizes[j]);
  out << '\n';
  for (std::size_t i = 1; i < m.sizes.size(); ++i) {
    out << size_label(m.sizes[i]);
    for (std::size_t j = 0; j + 1 < m.sizes.size(); ++j) {
      out << ',';
      if (j < i) {
        if (const CellStats* c = m.find(m.sizes[i], m.sizes[j])) out << format_double(c->mean);
      }
    }
    out << '\n';
  }
}

void write_cells(const fs::path& path, const DiffMatrix& m) {
  auto out = open_out(path);
  out << "outer,inner,mean_pct,count,q1,median,q3\n";
  for (const auto& [key, c] : m.cells) {
    out << size_label(key.outer) << ',' << size_label(key.inner) << ',' << format_double(c.mean) << ','
        << c.count << ',' << format_double(c.quartiles.q1) << ',' << format_double(c.quartiles.median) << ','
        << format_double(c.quartiles.q3) << '\n';
  }
}

void write_boxplot(const fs::path& path, const DiffMatrix& m, Grouping g) {
  auto out = open_out(path);
  if (g == Grouping::by_pair) out << "outer,inner,";
  out << "gap,min,q1,median,q3,max,count\n";
  for (const auto& r : boxplot_stats(m, g)) {
    if (g == Grouping::by_pair) out << size_label(r.outer) << ',' << size_label(r.inner) << ',';
    out << size_label(r.gap) << ',' << format_double(r.min) << ',' << format_double(r.q1) << ','
        << format_double(r.median) << ',' << format_double(r.q3) << ',' << format_double(r.max) << ','
        << r.count << '\n';
  }
}

nlohmann::ordered_json matrix_json(const DiffMatrix& m) {
  nlohmann::ordered_json cells = nlohmann::ordered_json::array();
  for (const auto& [key, c] : m.cells) {
    cells.push_back({{"outer", key.outer},
                     {"inner", key.inner},
                     {"mean_pct", c.mean},
                     {"count", c.count},
                     {"q1", c.quartiles.q1},
                     {"median", c.quartiles.median},
                     {"q3", c.quartiles.q3}});
  }
  return {{"skipped_outer_windows", m.skipped.outer_windows},
          {"skipped_inner_windows", m.skipped.inner_windows},
          {"cells", cells}};
}

void run_matrix(const MatrixOptions& o, const Common& common, const CLI::App* cmd) {
  const auto dir = prepare_out(common);
  if (o.beats.empty()) throw std::invalid_argument("window-matrix: need at least one --beats file");
  const WindowSpec spec{o.sizes, o.step};
  spec.validate();
  const std::optional<double> rate = o.sample_rate > 0.0 ? std::optional<double>(o.sample_rate) : std::nullopt;

  std::set<std::string> names;
  std::vector<DiffMatrix> matrices;
  nlohmann::ordered_json subjects = nlohmann::ordered_json::array();
  for (const auto& file : o.beats) {
    const std::string name = fs::path(file).stem().string();
    if (!names.insert(name).second) throw std::invalid_argument("window-matrix: duplicate subject name '" + name + "'");
    const auto beats = io::read_beats(fs::path(file), rate);
    matrices.push_back(window_diff_matrix(beats, spec));
    write_table(dir / ("matrix_" + name + ".csv"), matrices.back());
    write_cells(dir / ("cells_" + name + ".csv"), matrices.back());
    auto entry = matrix_json(matrices.back());
    entry["subject"] = name;
    entry["file"] = file;
    entry["beats"] = beats.size();
    entry["duration_s"] = beats.end() - beats.start();
    subjects.push_back(std::move(entry));
  }
  const DiffMatrix pooled = merge_matrices(matrices);
  write_table(dir / "matrix_pooled.csv", pooled);
  write_cells(dir / "cells_pooled.csv", pooled);
  write_boxplot(dir / "boxplot_by_pair.csv", pooled, Grouping::by_pair);
  write_boxplot(dir / "boxplot_by_gap.csv", pooled, Grouping::by_size_gap);

  nlohmann::ordered_json summary;
  summary["config"] = {{"sizes", o.sizes}, {"step", o.step}, {"sample_rate", o.sample_rate}, {"seed", common.seed}};
  summary["subjects"] = subjects;
  summary["pooled"] = matrix_json(pooled);
  open_out(dir / "summary.json") << summary.dump(2) << '\n';
  {
    auto out = open_out(dir / "skipped.csv");
    out << "subject,skipped_outer_windows,skipped_inner_windows\n";
    for (std::size_t i = 0; i < matrices.size(); ++i) {
      out << subjects[i]["subject"].get<std::string>() << ',' << matrices[i].skipped.outer_windows << ','
          << matrices[i].skipped.inner_windows << '\n';
    }
  }
  echo_config(dir, cmd);

  std::cout << "window-matrix: " << matrices.size() << " subject(s), " << pooled.cells.size() << " cells, "
            << pooled.skipped.total() << " skipped windows\n";
  for (const auto& [key, c] : pooled.cells) {
    if (key.inner == o.sizes.front() || key.outer == o.sizes.back()) {
      std::cout << "  (" << size_label(key.outer) << ", " << size_label(key.inner) << ") mean "
                << format_double(std::round(c.mean * 100.0) / 100.0) << " % over " << c.count << '\n';
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rPPG signal-evaluation toolkit"};
  app.set_config("--config", "", "Re-run from an echoed run_config.ini");
  app.require_subcommand(1);

  GenOptions gen;
  Common gen_common;
  auto* gen_cmd = app.add_subcommand("gen-waveform", "Write a light-source waveform file");
  add_common(gen_cmd, gen_common);
  gen_cmd->add_option("--shape", gen.shape, "sine | sum-of-sines | ppg | from-file")
      ->check(CLI::IsMember({"sine", "sum-of-sines", "ppg", "from-file"}))
      ->capture_default_str();
  gen_cmd->add_option("--freqs", gen.freqs, "Component frequencies in Hz")->delimiter(',')->default_str(list_default(gen.freqs));
  gen_cmd->add_option("--amps", gen.amps, "Component amplitudes")->delimiter(',')->default_str(list_default(gen.amps));
  gen_cmd->add_option("--phases", gen.phases, "Component phases in radians")->delimiter(',');
  gen_cmd->add_option("--bpm", gen.bpm, "Pulse rate of the ppg shape")->capture_default_str();
  gen_cmd->add_option("--duration", gen.duration, "Seconds")->capture_default_str();
  gen_cmd->add_option("--rate", gen.rate, "Sample rate in Hz")->capture_default_str();
  gen_cmd->add_option("--input", gen.input, "Source file for from-file");

  SimOptions sim;
  Common sim_common;
  auto* sim_cmd = app.add_subcommand("simulate", "Capture a waveform with a rolling-shutter camera model");
  add_common(sim_cmd, sim_common);
  sim_cmd->add_option("--camera", sim.camera, "Camera config file (defaults when omitted)");
  sim_cmd->add_option("--waveform", sim.waveform, "Waveform file on a regular grid")->required();
  sim_cmd->add_option("--duration", sim.duration, "Seconds of video")->capture_default_str();

  CompareOptions cmp;
  Common cmp_common;
  auto* cmp_cmd = app.add_subcommand("compare-fps", "Timestamp-aware versus naive resampling");
  add_common(cmp_cmd, cmp_common);
  cmp_cmd->add_option("--signal", cmp.signal, "Timestamped signal file")->required();
  cmp_cmd->add_option("--rate", cmp.rate, "Resample rate in Hz")->capture_default_str();
  cmp_cmd->add_option("--taper", cmp.taper, "hann | rectangular")
      ->check(CLI::IsMember({"hann", "rectangular"}))
      ->capture_default_str();
  cmp_cmd->add_option("--band-low", cmp.band_low, "Hz")->capture_default_str();
  cmp_cmd->add_option("--band-high", cmp.band_high, "Hz")->capture_default_str();
  cmp_cmd->add_option("--piece-length", cmp.piece_length, "Seconds per piece (0: whole signal)")->capture_default_str();
  cmp_cmd->add_option("--piece-step", cmp.piece_step, "Seconds between piece starts")->capture_default_str();

  PhaseOptions ph;
  Common ph_common;
  auto* ph_cmd = app.add_subcommand("phase", "Phase shift between two signals or across four regions");
  add_common(ph_cmd, ph_common);
  ph_cmd->add_option("--a", ph.a, "First signal file");
  ph_cmd->add_option("--b", ph.b, "Second signal file");
  ph_cmd->add_option("--regions", ph.regions, "Directory with region_{top,bottom,left,right}.csv");
  ph_cmd->add_option("--rate", ph.rate, "Resample rate in Hz")->capture_default_str();
  ph_cmd->add_option("--band-low", ph.band_low, "Hz")->capture_default_str();
  ph_cmd->add_option("--band-high", ph.band_high, "Hz")->capture_default_str();
  ph_cmd->add_option("--window", ph.window, "Tracking window in seconds")->capture_default_str();
  ph_cmd->add_option("--track-step", ph.track_step, "Tracking step in seconds")->capture_default_str();
  ph_cmd->add_option("--ref-bpm", ph.ref_bpm, "Heart rate for degree conversion")->capture_default_str();

  MatrixOptions mx;
  Common mx_common;
  auto* mx_cmd = app.add_subcommand("window-matrix", "Temporal-window HR difference matrix");
  add_common(mx_cmd, mx_common);
  mx_cmd->add_option("--beats", mx.beats, "Beat annotation files, one per subject")->delimiter(',')->required();
  mx_cmd->add_option("--sizes", mx.sizes, "Window sizes in seconds")->delimiter(',')->default_str(list_default(mx.sizes));
  mx_cmd->add_option("--step", mx.step, "Inner window step in seconds")->capture_default_str();
  mx_cmd->add_option("--sample-rate", mx.sample_rate, "Beats are sample indices at this rate (0: seconds)")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen_cmd->parsed()) run_gen(gen, gen_common, gen_cmd);
    if (sim_cmd->parsed()) run_simulate(sim, sim_common, sim_cmd);
    if (cmp_cmd->parsed()) run_compare(cmp, cmp_common, cmp_cmd);
    if (ph_cmd->parsed()) run_phase(ph, ph_common, ph_cmd);
    if (mx_cmd->parsed()) run_matrix(mx, mx_common, mx_cmd);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
