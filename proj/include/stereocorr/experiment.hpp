#pragma once

#include "stereocorr/config.hpp"
#include "stereocorr/disparity_map.hpp"
#include "stereocorr/image.hpp"
#include "stereocorr/op_count.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace stereocorr {

/// Inputs that load fine but cannot be matched as configured (size
/// mismatches, a block larger than the image, no valid block).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunInputs {
  Image template_image;  // after any configured perturbation
  Image reference;
  std::optional<GroundTruthDisparity> truth;
};

RunInputs load_inputs(const ExperimentConfig& config);

struct RunResult {
  BlockGrid grid;
  SearchWindow window;
  DisparityMap map;
  Image aligned;
  double signal_rms = 0.0;  // scales injected noise; 0 when noiseless
  double corr_pre = 0.0;
  double corr_post = 0.0;
  std::optional<double> rms_error;
  OpCounts ops;
  double seconds = 0.0;  // matching wall time
};

/// Matches, aligns and scores one configuration. Throws DataError for
/// inputs the configuration cannot be applied to.
RunResult run_experiment(const ExperimentConfig& config, const RunInputs& inputs);

/// Artifact name (report key) and path relative to the output directory.
using Artifact = std::pair<std::string, std::filesystem::path>;

/// Writes disparity.csv, the disparity visualizations and their scale
/// sidecar, the aligned and overlap images, report.txt, report.kv and
/// timing.log into dir. Returns every artifact written.
std::vector<Artifact> write_match_artifacts(const ExperimentConfig& config, const RunInputs& inputs,
                                            const RunResult& result, const std::filesystem::path& dir);

void write_disparity_csv(std::ostream& out, const DisparityMap& map);

/// Flat "key=value" lines with stable names; no timing information.
std::string format_report_kv(const ExperimentConfig& config, const RunResult& result,
                             const std::vector<Artifact>& artifacts);
std::string format_report_text(const ExperimentConfig& config, const RunResult& result,
                               const std::vector<Artifact>& artifacts);

/// Shortest decimal text that reads back to the same double.
std::string format_number(double v);

struct SweepRow {
  int run = 0;
  ExperimentConfig config;
  std::optional<RunResult> result;
  std::string error;  // set when the run failed
};

/// Runs every expanded configuration into dir/run_NNN, writes manifest.txt
/// before computing and sweep.csv after the last run. A failing run is
/// recorded in its row and the sweep moves on. Progress goes to log.
std::vector<SweepRow> run_sweep(const ExperimentConfig& config, const std::filesystem::path& dir, std::ostream& log);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace stereocorr
