#include "stereocorr/experiment.hpp"

#include "stereocorr/image_io.hpp"
#include "stereocorr/matching.hpp"
#include "stereocorr/metrics.hpp"

#include <chrono>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace stereocorr {

namespace fs = std::filesystem;

RunInputs load_inputs(const ExperimentConfig& config) {
  RunInputs in;
  in.template_image = load_gray(config.images.template_path);
  in.reference = load_gray(config.images.reference_path);
  if (config.images.ground_truth_path)
    in.truth = load_ground_truth(*config.images.ground_truth_path, config.images.truth_scale,
                                 config.images.truth_unknown);

  if (in.template_image.rows() != in.reference.rows() || in.template_image.cols() != in.reference.cols())
    throw DataError("template is " + std::to_string(in.template_image.cols()) + "x" +
                    std::to_string(in.template_image.rows()) + " but reference is " +
                    std::to_string(in.reference.cols()) + "x" + std::to_string(in.reference.rows()));
  if (in.truth && (in.truth->width() != in.template_image.cols() || in.truth->height() != in.template_image.rows()))
    throw DataError("ground truth is " + std::to_string(in.truth->width()) + "x" +
                    std::to_string(in.truth->height()) + " but the template is " +
                    std::to_string(in.template_image.cols()) + "x" + std::to_string(in.template_image.rows()));

  const PerturbConfig& p = config.perturb;
  if (p.intensity_scale != 1.0) in.template_image = scale_intensity(in.template_image, p.intensity_scale);
  if (p.jitter_amplitude > 0.0)
    in.template_image = jitter_regions(in.template_image, p.jitter_region, p.jitter_amplitude, p.jitter_seed);
  return in;
}

RunResult run_experiment(const ExperimentConfig& config, const RunInputs& inputs) {
  const MatchConfig& m = config.match;
  const Image& t = inputs.template_image;
  const Image& r = inputs.reference;
  RunResult result;
  try {
    result.grid = partition(t.cols(), t.rows(), m.block, m.overlap, m.margin);
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("cannot lay out blocks: ") + e.what());
  }
  result.window = resolve_window(m, t.cols(), t.rows());

  std::optional<NoiseSpec> noise;
  if (config.noise) {
    result.signal_rms = image_rms(config.noise->rms_source == RmsSource::template_image ? t : r);
    noise = NoiseSpec{config.noise->multiplier_pct, config.noise->integrator_pct, config.noise->seed,
                      result.signal_rms};
  }

  MatchOptions options;
  options.threads = m.threads;
  options.diagonal = m.diagonal;
  options.use_sum_tables = m.sum_tables;
  options.counts = &result.ops;

  const auto start = std::chrono::steady_clock::now();
  switch (m.variant) {
    case Variant::full_ncc:
      result.map = match_ncc(t, r, result.grid, result.window, NccVariant::full, m.moving_average_window(), noise,
                             options);
      break;
    case Variant::diagonal_ncc:
      result.map = match_ncc(t, r, result.grid, result.window, NccVariant::diagonal, m.moving_average_window(),
                             noise, options);
      break;
    case Variant::sad:
      result.map = match_sad(t, r, result.grid, result.window, noise, options);
      break;
  }
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  result.aligned = apply_disparity(t, result.map, result.grid);
  try {
    result.corr_pre = correlation_coefficient(t, r);
    result.corr_post = correlation_coefficient(result.aligned, r);
  } catch (const std::domain_error& e) {
    throw DataError(std::string("correlation undefined: ") + e.what());
  }
  if (inputs.truth && result.map.valid_count() > 0) {
    try {
      result.rms_error = rms_disparity_error(result.map, *inputs.truth, config.images.truth_sign);
    } catch (const std::domain_error&) {
      // no pixel valid in both maps; reported as absent
    }
  }
  return result;
}

std::vector<SweepRow> run_sweep(const ExperimentConfig& config, const fs::path& dir, std::ostream& log) {
  const std::vector<ExperimentConfig> runs = expand_sweep(config);
  fs::create_directories(dir);
  auto run_dir = [&](int i) {
    std::ostringstream name;
    name << "run_" << std::setw(3) << std::setfill('0') << i;
    return dir / name.str();
  };

  {
    std::ofstream manifest(dir / "manifest.txt");
    manifest << "runs=" << runs.size() << '\n';
    for (std::size_t i = 0; i < runs.size(); ++i) {
      const ExperimentConfig& c = runs[i];
      manifest << run_dir(static_cast<int>(i)).filename().string() << " variant=" << to_string(c.match.variant)
               << " block=" << c.match.block << " overlap=" << c.match.overlap;
      if (c.noise)
        manifest << " multiplier_pct=" << format_number(c.noise->multiplier_pct)
                 << " integrator_pct=" << format_number(c.noise->integrator_pct);
      manifest << '\n';
    }
    if (!manifest) throw ImageError(ImageError::Kind::write_failed, "cannot write " + (dir / "manifest.txt").string());
  }

  std::vector<SweepRow> rows;
  std::optional<RunInputs> inputs;
  std::string input_error;
  try {
    inputs = load_inputs(runs.front());
  } catch (const std::exception& e) {
    input_error = e.what();
  }

  for (std::size_t i = 0; i < runs.size(); ++i) {
    SweepRow row;
    row.run = static_cast<int>(i);
    row.config = runs[i];
    row.config.output_dir = run_dir(row.run);
    try {
      if (!inputs) throw DataError(input_error);
      row.result = run_experiment(row.config, *inputs);
      write_match_artifacts(row.config, *inputs, *row.result, row.config.output_dir);
      log << row.config.output_dir.filename().string() << " block=" << row.config.match.block
          << " overlap=" << row.config.match.overlap << " corr_post=" << format_number(row.result->corr_post)
          << '\n';
    } catch (const std::exception& e) {
      row.result.reset();
      row.error = e.what();
      log << row.config.output_dir.filename().string() << " failed: " << row.error << '\n';
    }
    rows.push_back(std::move(row));
  }

  std::ofstream csv(dir / "sweep.csv");
  write_sweep_csv(csv, rows);
  if (!csv) throw ImageError(ImageError::Kind::write_failed, "cannot write " + (dir / "sweep.csv").string());
  return rows;
}

}  // namespace stereocorr
