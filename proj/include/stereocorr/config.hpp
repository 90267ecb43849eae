#pragma once

#include "stereocorr/analog.hpp"
#include "stereocorr/grid.hpp"
#include "stereocorr/op_count.hpp"
#include "stereocorr/surface.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace stereocorr {

/// Raised for malformed documents and invalid values. key() names the
/// offending "section.key" (empty only for structural errors without one).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what) : std::runtime_error(what), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

enum class RmsSource { template_image, reference_image };

struct ImagesConfig {
  std::filesystem::path template_path;
  std::filesystem::path reference_path;
  std::optional<std::filesystem::path> ground_truth_path;
  double truth_scale = 3.0;
  std::uint32_t truth_unknown = 0;
  double truth_sign = 1.0;  // -1 when dx and the stored truth point in opposite directions

  friend bool operator==(const ImagesConfig&, const ImagesConfig&) = default;
};

struct MatchConfig {
  Variant variant = Variant::sad;
  int block = 15;
  int overlap = 10;  // round(0.65 * block) unless set
  int margin = 0;
  int max_disparity = 16;
  int max_vertical = 2;
  std::optional<SearchWindow> window;  // explicit u/v bounds win over the max_* pair
  bool exhaustive_search = false;
  std::optional<int> ma_window;  // follows block when unset
  Diagonal diagonal = Diagonal::main;
  bool sum_tables = true;
  int threads = 1;

  int moving_average_window() const { return ma_window.value_or(block); }
  friend bool operator==(const MatchConfig&, const MatchConfig&) = default;
};

struct NoiseConfig {
  double multiplier_pct = 0.0;  // fractions of the signal RMS
  double integrator_pct = 0.0;
  std::uint64_t seed = 0;
  RmsSource rms_source = RmsSource::template_image;

  friend bool operator==(const NoiseConfig&, const NoiseConfig&) = default;
};

/// Template-side illumination changes applied before matching.
struct PerturbConfig {
  double intensity_scale = 1.0;
  double jitter_amplitude = 0.0;
  int jitter_region = 32;
  std::uint64_t jitter_seed = 0;

  bool identity() const { return intensity_scale == 1.0 && jitter_amplitude == 0.0; }
  friend bool operator==(const PerturbConfig&, const PerturbConfig&) = default;
};

/// One item of an overlap axis: a literal value or an inclusive range whose
/// bounds may be relative to the block ("0..block-1").
struct OverlapTerm {
  int first = 0;
  int last = 0;
  bool first_from_block = false;  // bound means block + first
  bool last_from_block = false;

  friend bool operator==(const OverlapTerm&, const OverlapTerm&) = default;
};

struct SweepConfig {
  std::vector<int> blocks;
  std::vector<OverlapTerm> overlaps;
  std::vector<double> multiplier_pcts;
  std::vector<double> integrator_pcts;
  std::vector<double> noise_pcts;  // sets both stages at once

  bool empty() const {
    return blocks.empty() && overlaps.empty() && multiplier_pcts.empty() && integrator_pcts.empty() &&
           noise_pcts.empty();
  }
  friend bool operator==(const SweepConfig&, const SweepConfig&) = default;
};

struct ExperimentConfig {
  ImagesConfig images;
  MatchConfig match;
  std::optional<NoiseConfig> noise;
  PerturbConfig perturb;
  SweepConfig sweep;
  std::filesystem::path output_dir = "out";

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// A "section.key" = value pair applied on top of the document, e.g. from
/// command-line flags.
using ConfigOverride = std::pair<std::string, std::string>;

struct ParseOptions {
  std::filesystem::path base_dir;  // relative image paths resolve here (cwd when empty)
  bool use_environment = true;     // STEREOCORR_DATA_ROOT, when set, anchors relative image paths
  bool check_files = true;
  std::vector<ConfigOverride> overrides;
};

/// Every accepted "section.key", in document order.
const std::vector<std::string>& config_keys();

/// Parses the line-oriented format:
///   # comment
///   [section]
///   key = value          lists are comma separated
/// Unknown sections or keys, repeated keys, bad values and violated
/// constraints throw ConfigError naming the key.
ExperimentConfig parse_config(std::string_view text, const ParseOptions& options = {});

/// Reads the file and parses it with relative paths anchored at its directory.
ExperimentConfig load_config(const std::filesystem::path& path, ParseOptions options = {});

/// Canonical document for config; parse_config(render_config(c)) == c.
std::string render_config(const ExperimentConfig& config);

/// Overlaps an axis term contributes for the given block, clipped to [0, block - 1].
std::vector<int> expand_overlaps(const std::vector<OverlapTerm>& terms, int block);

/// One concrete configuration per sweep point, sweep axes cleared, in the order
/// block, overlap, multiplier, integrator. An empty sweep yields {config}.
std::vector<ExperimentConfig> expand_sweep(const ExperimentConfig& config);

/// Window used for a template/reference pair of the given size.
SearchWindow resolve_window(const MatchConfig& match, Eigen::Index width, Eigen::Index height);

std::string_view to_string(RmsSource source);
std::string_view to_string(Diagonal which);

}  // namespace stereocorr
