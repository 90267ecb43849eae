// stereocorr: block-matching experiments, sweeps and power estimates.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 data error,
// 3 internal error.

#include "stereocorr/analog.hpp"
#include "stereocorr/config.hpp"
#include "stereocorr/experiment.hpp"
#include "stereocorr/image_io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

using namespace stereocorr;

namespace {

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kInternal = 3 };

// "match.ma_window" -> "--ma-window"; sweep axes keep their section as a prefix.
std::string flag_for(const std::string& key) {
  const std::string section = key.substr(0, key.find('.'));
  std::string name = key.substr(key.find('.') + 1);
  if (section == "sweep") name = "sweep_" + name;
  if (section == "output") name = "output_" + name;
  std::replace(name.begin(), name.end(), '_', '-');
  return "--" + name;
}

struct ConfigFlags {
  std::string config_path;
  std::map<std::string, std::string> values;  // key -> flag value
  std::vector<std::string> sets;              // raw "section.key=value"
  std::map<std::string, CLI::Option*> options;

  void attach(CLI::App* cmd, bool config_positional) {
    if (config_positional)
      cmd->add_option("config", config_path, "Experiment configuration file")->required()->check(CLI::ExistingFile);
    else
      cmd->add_option("-c,--config", config_path, "Experiment configuration file")->check(CLI::ExistingFile);
    for (const std::string& key : config_keys()) {
      std::string flag = flag_for(key);
      if (key == "output.dir") flag = "-o," + flag;
      options[key] = cmd->add_option(flag, values[key], "Overrides " + key)->group("Configuration overrides");
    }
    cmd->add_option("--set", sets, "Override any key as section.key=value")->group("Configuration overrides");
  }

  ExperimentConfig load() const {
    ParseOptions parse;
    for (const std::string& key : config_keys())
      if (options.at(key)->count() > 0) parse.overrides.emplace_back(key, values.at(key));
    for (const std::string& s : sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw ConfigError(s, "--set expects section.key=value, got '" + s + "'");
      parse.overrides.emplace_back(s.substr(0, eq), s.substr(eq + 1));
    }
    if (config_path.empty()) return parse_config("", parse);
    return load_config(config_path, parse);
  }
};

int cmd_match(const ConfigFlags& flags) {
  const ExperimentConfig config = flags.load();
  const RunInputs inputs = load_inputs(config);
  const RunResult result = run_experiment(config, inputs);
  const auto artifacts = write_match_artifacts(config, inputs, result, config.output_dir);
  std::cout << format_report_text(config, result, artifacts);
  std::cout << "wrote " << (config.output_dir / "report.txt").string() << '\n';
  return kOk;
}

int cmd_sweep(const ConfigFlags& flags) {
  const ExperimentConfig config = flags.load();
  const auto rows = run_sweep(config, config.output_dir, std::cerr);
  const auto failed = std::count_if(rows.begin(), rows.end(), [](const SweepRow& r) { return !r.result; });
  std::cout << rows.size() << " runs, " << failed << " failed; wrote "
            << (config.output_dir / "sweep.csv").string() << '\n';
  return failed == static_cast<long>(rows.size()) ? kData : kOk;
}

int cmd_validate(const ConfigFlags& flags) {
  const ExperimentConfig config = flags.load();
  const auto runs = expand_sweep(config);
  std::cout << render_config(config);
  std::cout << "# valid; " << runs.size() << (runs.size() == 1 ? " run\n" : " runs\n");
  return kOk;
}

int cmd_power(int channels) {
  std::cout << format_power_report(power_estimate(channels));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stereo block matching with full and diagonal NCC, SAD, and an analog noise and power model"};
  app.require_subcommand(1);

  ConfigFlags match_flags, sweep_flags, validate_flags;
  CLI::App* match = app.add_subcommand("match", "Run one experiment and write its artifacts");
  match_flags.attach(match, false);
  CLI::App* sweep = app.add_subcommand("sweep", "Run every point of the configured sweep");
  sweep_flags.attach(sweep, false);
  CLI::App* validate = app.add_subcommand("validate-config", "Check a configuration and print it canonically");
  validate_flags.attach(validate, true);
  CLI::App* power = app.add_subcommand("power", "Print the analog power estimate");
  int channels = 64;
  power->add_option("channels", channels, "Analog channel count (even)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*match) return cmd_match(match_flags);
    if (*sweep) return cmd_sweep(sweep_flags);
    if (*validate) return cmd_validate(validate_flags);
    if (*power) return cmd_power(channels);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const ImageError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kInternal;
}
