#include "stereocorr/experiment.hpp"

#include "stereocorr/image_io.hpp"
#include "stereocorr/metrics.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

namespace stereocorr {

namespace fs = std::filesystem;

namespace {

struct Range {
  double min = 0.0;
  double max = 0.0;
  bool empty = true;
};

Range disparity_range(const DisparityMap& map, bool horizontal) {
  Range r;
  for (const DisparityCell& c : map.cells) {
    if (!c.valid) continue;
    const double d = horizontal ? c.dx : c.dy;
    if (r.empty) r = {d, d, false};
    r.min = std::min(r.min, d);
    r.max = std::max(r.max, d);
  }
  return r;
}

// Gray levels are quantized here so the written file reproduces them exactly.
Image visualize(const Eigen::ArrayXXd& disparity, const Mask& valid, const Range& range) {
  Image out = Image::Zero(disparity.rows(), disparity.cols());
  for (Eigen::Index y = 0; y < out.rows(); ++y) {
    for (Eigen::Index x = 0; x < out.cols(); ++x) {
      if (!valid(y, x)) continue;
      const double level = range.max > range.min
                               ? std::round(255.0 * (disparity(y, x) - range.min) / (range.max - range.min))
                               : 128.0;
      out(y, x) = level / 255.0;
    }
  }
  return out;
}

std::string scale_sidecar(const Range& x, const Range& y) {
  std::ostringstream out;
  out << "# gray = round(255 * (d - min) / (max - min)); 128 when min == max\n";
  out << "# pixels whose nearest lattice cell is invalid are 0\n";
  auto emit = [&](const char* axis, const Range& r) {
    if (r.empty) {
      out << axis << ".min=na\n" << axis << ".max=na\n";
    } else {
      out << axis << ".min=" << format_number(r.min) << '\n' << axis << ".max=" << format_number(r.max) << '\n';
    }
  };
  emit("x", x);
  emit("y", y);
  return out.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw ImageError(ImageError::Kind::write_failed, "cannot write " + path.string());
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '\n') c = ' ';
    q += c;
    if (c == '"') q += '"';
  }
  return q + "\"";
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void write_disparity_csv(std::ostream& out, const DisparityMap& map) {
  out << "cell_x,cell_y,px_x,px_y,dx,dy,score,valid\n";
  for (int cy = 0; cy < map.lattice_height; ++cy) {
    for (int cx = 0; cx < map.lattice_width; ++cx) {
      const DisparityCell& c = map.at(cx, cy);
      const Offset px = map.cell_origin(cx, cy);
      out << cx << ',' << cy << ',' << px.x << ',' << px.y << ',' << c.dx << ',' << c.dy << ','
          << format_number(c.score) << ',' << (c.valid ? 1 : 0) << '\n';
    }
  }
}

std::vector<Artifact> write_match_artifacts(const ExperimentConfig& config, const RunInputs& inputs,
                                            const RunResult& result, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ImageError(ImageError::Kind::write_failed, "cannot create " + dir.string() + ": " + ec.message());

  std::vector<Artifact> artifacts = {
      {"disparity_csv", "disparity.csv"},
      {"disparity_x", "disparity_x.pgm"},
      {"disparity_y", "disparity_y.pgm"},
      {"disparity_scale", "disparity_scale.txt"},
      {"aligned", "aligned.pgm"},
      {"overlap_before", "overlap_before.ppm"},
      {"overlap_after", "overlap_after.ppm"},
      {"report_text", "report.txt"},
      {"report_kv", "report.kv"},
      {"timing", "timing.log"},
  };

  {
    std::ofstream csv(dir / "disparity.csv", std::ios::binary);
    write_disparity_csv(csv, result.map);
    if (!csv) throw ImageError(ImageError::Kind::write_failed, "cannot write " + (dir / "disparity.csv").string());
  }

  const Image& t = inputs.template_image;
  const DenseDisparity dense = densify(result.map, t.cols(), t.rows());
  const Range rx = disparity_range(result.map, true);
  const Range ry = disparity_range(result.map, false);
  save_gray(dir / "disparity_x.pgm", visualize(dense.dx, dense.valid, rx));
  save_gray(dir / "disparity_y.pgm", visualize(dense.dy, dense.valid, ry));
  write_text(dir / "disparity_scale.txt", scale_sidecar(rx, ry));

  save_gray(dir / "aligned.pgm", result.aligned);
  save_rgb(dir / "overlap_before.ppm", t, inputs.reference, inputs.reference);
  save_rgb(dir / "overlap_after.ppm", result.aligned, inputs.reference, inputs.reference);

  write_text(dir / "report.txt", format_report_text(config, result, artifacts));
  write_text(dir / "report.kv", format_report_kv(config, result, artifacts));
  write_text(dir / "timing.log", "match_seconds=" + format_number(result.seconds) + "\n");
  return artifacts;
}

std::string format_report_kv(const ExperimentConfig& config, const RunResult& result,
                             const std::vector<Artifact>& artifacts) {
  const MatchConfig& m = config.match;
  std::ostringstream out;
  out << "variant=" << to_string(m.variant) << '\n';
  out << "image.width=" << result.aligned.cols() << '\n';
  out << "image.height=" << result.aligned.rows() << '\n';
  out << "block=" << result.grid.block << '\n';
  out << "overlap=" << result.grid.overlap << '\n';
  out << "stride=" << result.grid.stride << '\n';
  out << "margin=" << result.grid.margin << '\n';
  out << "window.u_min=" << result.window.u_min << '\n';
  out << "window.u_max=" << result.window.u_max << '\n';
  out << "window.v_min=" << result.window.v_min << '\n';
  out << "window.v_max=" << result.window.v_max << '\n';
  out << "shifts=" << result.window.count() << '\n';
  if (m.variant == Variant::diagonal_ncc) {
    out << "ma_window=" << m.moving_average_window() << '\n';
    out << "diagonal=" << to_string(m.diagonal) << '\n';
  }
  out << "noise.enabled=" << (config.noise ? 1 : 0) << '\n';
  if (config.noise) {
    out << "noise.multiplier_pct=" << format_number(config.noise->multiplier_pct) << '\n';
    out << "noise.integrator_pct=" << format_number(config.noise->integrator_pct) << '\n';
    out << "noise.seed=" << config.noise->seed << '\n';
    out << "noise.rms_source=" << to_string(config.noise->rms_source) << '\n';
    out << "noise.signal_rms=" << format_number(result.signal_rms) << '\n';
  }
  out << "blocks=" << result.grid.size() << '\n';
  out << "blocks.valid=" << result.map.valid_count() << '\n';
  out << "corr.pre=" << format_number(result.corr_pre) << '\n';
  out << "corr.post=" << format_number(result.corr_post) << '\n';
  out << "rms_disparity_error=" << (result.rms_error ? format_number(*result.rms_error) : "na") << '\n';
  out << "ops.multiplies=" << result.ops.multiplies << '\n';
  out << "ops.adds=" << result.ops.adds << '\n';
  out << "ops.abs_diffs=" << result.ops.abs_diffs << '\n';
  for (const auto& [key, path] : artifacts) out << "artifact." << key << '=' << path.generic_string() << '\n';
  return out.str();
}

std::string format_report_text(const ExperimentConfig& config, const RunResult& result,
                               const std::vector<Artifact>& artifacts) {
  const MatchConfig& m = config.match;
  std::ostringstream out;
  out << "Stereo correspondence report\n\n";
  out << "template   " << config.images.template_path.string() << '\n';
  out << "reference  " << config.images.reference_path.string() << '\n';
  if (config.images.ground_truth_path) out << "truth      " << config.images.ground_truth_path->string() << '\n';
  out << "image      " << result.aligned.cols() << " x " << result.aligned.rows() << "\n\n";

  out << "variant    " << to_string(m.variant);
  if (m.variant == Variant::diagonal_ncc)
    out << " (" << to_string(m.diagonal) << " diagonal, moving average " << m.moving_average_window() << ")";
  out << '\n';
  out << "block      " << result.grid.block << "  overlap " << result.grid.overlap << "  stride "
      << result.grid.stride << "  margin " << result.grid.margin << '\n';
  out << "window     u [" << result.window.u_min << ", " << result.window.u_max << "]  v [" << result.window.v_min
      << ", " << result.window.v_max << "]  (" << result.window.count() << " shifts)\n";
  if (config.noise)
    out << "noise      multiplier " << format_number(100 * config.noise->multiplier_pct) << " %, integrator "
        << format_number(100 * config.noise->integrator_pct) << " % of RMS " << format_number(result.signal_rms)
        << " (" << to_string(config.noise->rms_source) << "), seed " << config.noise->seed << '\n';
  else
    out << "noise      none\n";
  out << '\n';

  out << "blocks                 " << result.grid.size() << " (" << result.map.valid_count() << " valid)\n";
  out << "correlation before     " << format_number(result.corr_pre) << '\n';
  out << "correlation after      " << format_number(result.corr_post) << '\n';
  out << "RMS disparity error    " << (result.rms_error ? format_number(*result.rms_error) : "n/a") << '\n';
  out << "multiplies             " << result.ops.multiplies << '\n';
  out << "additions              " << result.ops.adds << '\n';
  out << "absolute differences   " << result.ops.abs_diffs << "\n\n";

  out << "artifacts (relative to this report)\n";
  for (const auto& [key, path] : artifacts) out << "  " << path.generic_string() << '\n';
  return out.str();
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "run,variant,block,overlap,stride,multiplier_pct,integrator_pct,blocks,valid_blocks,corr_pre,corr_post,"
         "rms_error,multiplies,adds,abs_diffs,status,error\n";
  for (const SweepRow& row : rows) {
    const MatchConfig& m = row.config.match;
    out << row.run << ',' << to_string(m.variant) << ',' << m.block << ',' << m.overlap << ','
        << m.block - m.overlap << ',';
    if (row.config.noise)
      out << format_number(row.config.noise->multiplier_pct) << ',' << format_number(row.config.noise->integrator_pct);
    else
      out << "0,0";
    out << ',';
    if (row.result) {
      const RunResult& r = *row.result;
      out << r.grid.size() << ',' << r.map.valid_count() << ',' << format_number(r.corr_pre) << ','
          << format_number(r.corr_post) << ',' << (r.rms_error ? format_number(*r.rms_error) : "") << ','
          << r.ops.multiplies << ',' << r.ops.adds << ',' << r.ops.abs_diffs << ",ok,\n";
    } else {
      out << ",,,,,,,,failed," << csv_field(row.error) << '\n';
    }
  }
}

}  // namespace stereocorr
