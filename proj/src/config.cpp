#include "stereocorr/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace stereocorr {
namespace {

namespace fs = std::filesystem;

const std::vector<std::string> kKeys = {
    "images.template",        "images.reference",     "images.ground_truth",  "images.truth_scale",
    "images.truth_unknown",   "images.truth_sign",    "match.variant",        "match.block",
    "match.overlap",          "match.margin",         "match.max_disparity",  "match.max_vertical",
    "match.u_min",            "match.u_max",          "match.v_min",          "match.v_max",
    "match.exhaustive_search", "match.ma_window",     "match.diagonal",       "match.sum_tables",
    "match.threads",          "noise.multiplier_pct", "noise.integrator_pct", "noise.seed",
    "noise.rms_source",       "perturb.intensity_scale", "perturb.jitter_amplitude", "perturb.jitter_region",
    "perturb.jitter_seed",    "sweep.block",          "sweep.overlap",        "sweep.multiplier_pct",
    "sweep.integrator_pct",   "sweep.noise_pct",      "output.dir",
};

struct Entry {
  std::string value;
  int line = 0;  // 0 for overrides
};

using Entries = std::map<std::string, Entry>;

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string where(const std::string& key, const Entry& e) {
  return e.line > 0 ? key + " (line " + std::to_string(e.line) + ")" : key;
}

[[noreturn]] void fail(const std::string& key, const Entry& e, const std::string& message) {
  throw ConfigError(key, where(key, e) + ": " + message);
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::stringstream in(value);
  std::string item;
  while (std::getline(in, item, ',')) items.push_back(trim(item));
  if (!value.empty() && value.back() == ',') items.emplace_back();
  return items;
}

template <typename T>
T parse_number(const std::string& key, const Entry& e, const std::string& text) {
  T out{};
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, out);
  if (ec != std::errc() || ptr != end || text.empty()) fail(key, e, "expected a number, got '" + text + "'");
  if constexpr (std::is_floating_point_v<T>) {
    if (!std::isfinite(out)) fail(key, e, "value must be finite");
  }
  return out;
}

bool parse_bool(const std::string& key, const Entry& e) {
  const std::string& v = e.value;
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  fail(key, e, "expected true or false, got '" + v + "'");
}

std::string unquote(const std::string& key, const Entry& e) {
  std::string v = e.value;
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') v = v.substr(1, v.size() - 2);
  if (v.empty()) fail(key, e, "value must not be empty");
  return v;
}

// "block", "block-3", "block−3" (U+2212) or a plain integer
std::pair<int, bool> parse_overlap_bound(const std::string& key, const Entry& e, std::string text) {
  const std::string minus_sign = "\xE2\x88\x92";
  for (std::size_t p; (p = text.find(minus_sign)) != std::string::npos;) text.replace(p, minus_sign.size(), "-");
  text = trim(text);
  if (text.rfind("block", 0) == 0) {
    std::string rest = trim(text.substr(5));
    if (rest.empty()) return {0, true};
    if (rest[0] != '-' && rest[0] != '+') fail(key, e, "cannot read overlap bound '" + text + "'");
    const int sign = rest[0] == '-' ? -1 : 1;
    return {sign * parse_number<int>(key, e, trim(rest.substr(1))), true};
  }
  return {parse_number<int>(key, e, text), false};
}

OverlapTerm parse_overlap_term(const std::string& key, const Entry& e, const std::string& item) {
  const auto dots = item.find("..");
  OverlapTerm term;
  if (dots == std::string::npos) {
    std::tie(term.first, term.first_from_block) = parse_overlap_bound(key, e, item);
    term.last = term.first;
    term.last_from_block = term.first_from_block;
  } else {
    std::tie(term.first, term.first_from_block) = parse_overlap_bound(key, e, item.substr(0, dots));
    std::tie(term.last, term.last_from_block) = parse_overlap_bound(key, e, item.substr(dots + 2));
  }
  return term;
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string format_overlap_bound(int value, bool from_block) {
  if (!from_block) return std::to_string(value);
  if (value == 0) return "block";
  return value < 0 ? "block-" + std::to_string(-value) : "block+" + std::to_string(value);
}

template <typename T, typename F>
std::string join(const std::vector<T>& items, F&& format) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ", " : "") + format(items[i]);
  return out;
}

// Drops a trailing "# ..." or "; ..." that follows whitespace outside quotes.
std::string strip_inline_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (!quoted && (line[i] == '#' || line[i] == ';') && i > 0 && (line[i - 1] == ' ' || line[i - 1] == '\t'))
      return line.substr(0, i);
  }
  return line;
}

Entries read_entries(std::string_view text) {
  Entries entries;
  std::set<std::string> sections;
  std::string section;
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(strip_inline_comment(raw));
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("", "line " + std::to_string(line_no) + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      const bool known = std::any_of(kKeys.begin(), kKeys.end(),
                                     [&](const std::string& k) { return k.rfind(section + ".", 0) == 0; });
      if (!known) throw ConfigError(section, "line " + std::to_string(line_no) + ": unknown section [" + section + "]");
      if (!sections.insert(section).second)
        throw ConfigError(section, "line " + std::to_string(line_no) + ": section [" + section + "] repeated");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("", "line " + std::to_string(line_no) + ": expected 'key = value'");
    if (section.empty()) {
      const std::string bare = trim(line.substr(0, eq));
      throw ConfigError(bare, "line " + std::to_string(line_no) + ": key " + bare + " outside of any [section]");
    }
    const std::string key = section + "." + trim(line.substr(0, eq));
    if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end())
      throw ConfigError(key, "line " + std::to_string(line_no) + ": unknown key " + key);
    const Entry entry{trim(line.substr(eq + 1)), line_no};
    if (!entries.emplace(key, entry).second) fail(key, entry, "key given more than once");
  }
  return entries;
}

// Relative paths anchor at the data root when it is set. Otherwise document
// paths anchor at the config directory and override paths stay relative to
// the working directory.
fs::path resolve_path(const fs::path& p, const ParseOptions& options, bool from_override) {
  if (p.is_absolute()) return p;
  if (options.use_environment) {
    if (const char* root = std::getenv("STEREOCORR_DATA_ROOT"); root && *root) return fs::path(root) / p;
  }
  return options.base_dir.empty() || from_override ? p : options.base_dir / p;
}

void require_file(const std::string& key, const Entry& e, const fs::path& p, const ParseOptions& options) {
  if (!options.check_files) return;
  std::error_code ec;
  if (!fs::is_regular_file(p, ec)) fail(key, e, "file not found: " + p.string());
}

class Builder {
 public:
  Builder(const Entries& entries, const ParseOptions& options) : entries_(entries), options_(options) {}

  ExperimentConfig build() {
    ExperimentConfig c;
    build_images(c.images);
    build_match(c.match);
    build_noise(c.noise);
    build_perturb(c.perturb);
    build_sweep(c.sweep);
    if (const Entry* e = find("output.dir")) c.output_dir = unquote("output.dir", *e);
    check_sweep(c);
    return c;
  }

 private:
  const Entry* find(const std::string& key) const {
    const auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
  }

  bool has_section(const std::string& section) const {
    return std::any_of(entries_.begin(), entries_.end(),
                       [&](const auto& kv) { return kv.first.rfind(section + ".", 0) == 0; });
  }

  template <typename T>
  void number(const std::string& key, T& out) const {
    if (const Entry* e = find(key)) out = parse_number<T>(key, *e, e->value);
  }

  template <typename T>
  T in_range(const std::string& key, T value, T lo, T hi, const std::string& what) const {
    if (value < lo || value > hi) {
      const Entry* e = find(key);
      const std::string msg = what + ", got " + (std::is_floating_point_v<T> ? format_double(static_cast<double>(value))
                                                                           : std::to_string(value));
      if (e) fail(key, *e, msg);
      throw ConfigError(key, key + ": " + msg);
    }
    return value;
  }

  fs::path path(const std::string& key, bool required) const {
    const Entry* e = find(key);
    if (!e) {
      if (required) throw ConfigError(key, key + ": required key is missing");
      return {};
    }
    const fs::path p = resolve_path(unquote(key, *e), options_, e->line == 0);
    require_file(key, *e, p, options_);
    return p;
  }

  void build_images(ImagesConfig& img) const {
    img.template_path = path("images.template", true);
    img.reference_path = path("images.reference", true);
    if (find("images.ground_truth")) img.ground_truth_path = path("images.ground_truth", true);
    number("images.truth_scale", img.truth_scale);
    in_range("images.truth_scale", img.truth_scale, 1e-12, 1e12, "must be positive");
    if (const Entry* e = find("images.truth_unknown")) {
      const auto code = parse_number<std::int64_t>("images.truth_unknown", *e, e->value);
      img.truth_unknown = static_cast<std::uint32_t>(
          in_range<std::int64_t>("images.truth_unknown", code, 0, 65535, "must lie in [0, 65535]"));
    }
    number("images.truth_sign", img.truth_sign);
    if (img.truth_sign != 1.0 && img.truth_sign != -1.0)
      fail("images.truth_sign", *find("images.truth_sign"), "must be 1 or -1");
  }

  void build_match(MatchConfig& m) const {
    if (const Entry* e = find("match.variant")) {
      const auto v = parse_variant(e->value);
      if (!v) fail("match.variant", *e, "expected full_ncc, diagonal_ncc or sad, got '" + e->value + "'");
      m.variant = *v;
    }
    number("match.block", m.block);
    in_range("match.block", m.block, 2, 1 << 20, "must be at least 2");
    if (find("match.overlap")) {
      number("match.overlap", m.overlap);
      in_range("match.overlap", m.overlap, 0, m.block - 1, "must lie in [0, block - 1] = [0, " +
                                                            std::to_string(m.block - 1) + "]");
    } else {
      m.overlap = static_cast<int>(std::lround(0.65 * m.block));
    }
    number("match.margin", m.margin);
    in_range("match.margin", m.margin, 0, 1 << 20, "must be non-negative");
    number("match.max_disparity", m.max_disparity);
    in_range("match.max_disparity", m.max_disparity, 0, 1 << 20, "must be non-negative");
    number("match.max_vertical", m.max_vertical);
    in_range("match.max_vertical", m.max_vertical, 0, 1 << 20, "must be non-negative");

    const char* bounds[] = {"match.u_min", "match.u_max", "match.v_min", "match.v_max"};
    const int given = static_cast<int>(std::count_if(std::begin(bounds), std::end(bounds),
                                                     [&](const char* k) { return find(k) != nullptr; }));
    if (given > 0 && given < 4) {
      for (const char* k : bounds)
        if (!find(k)) throw ConfigError(k, std::string(k) + ": u_min, u_max, v_min and v_max must be given together");
    }
    if (given == 4) {
      SearchWindow w;
      number("match.u_min", w.u_min);
      number("match.u_max", w.u_max);
      number("match.v_min", w.v_min);
      number("match.v_max", w.v_max);
      in_range("match.u_max", w.u_max, w.u_min, 1 << 20, "must not be below u_min");
      in_range("match.v_max", w.v_max, w.v_min, 1 << 20, "must not be below v_min");
      m.window = w;
    }
    if (const Entry* e = find("match.exhaustive_search")) m.exhaustive_search = parse_bool("match.exhaustive_search", *e);
    if (find("match.ma_window")) {
      int ma = 0;
      number("match.ma_window", ma);
      m.ma_window = in_range("match.ma_window", ma, 1, m.block, "must lie in [1, block]");
    }
    if (const Entry* e = find("match.diagonal")) {
      if (e->value == "main") m.diagonal = Diagonal::main;
      else if (e->value == "anti") m.diagonal = Diagonal::anti;
      else fail("match.diagonal", *e, "expected main or anti, got '" + e->value + "'");
    }
    if (const Entry* e = find("match.sum_tables")) m.sum_tables = parse_bool("match.sum_tables", *e);
    number("match.threads", m.threads);
    in_range("match.threads", m.threads, 1, 1024, "must lie in [1, 1024]");
  }

  void build_noise(std::optional<NoiseConfig>& noise) const {
    if (!has_section("noise")) return;
    NoiseConfig n;
    number("noise.multiplier_pct", n.multiplier_pct);
    in_range("noise.multiplier_pct", n.multiplier_pct, 0.0, 1e6, "must be non-negative");
    number("noise.integrator_pct", n.integrator_pct);
    in_range("noise.integrator_pct", n.integrator_pct, 0.0, 1e6, "must be non-negative");
    number("noise.seed", n.seed);
    if (const Entry* e = find("noise.rms_source")) {
      if (e->value == "template") n.rms_source = RmsSource::template_image;
      else if (e->value == "reference") n.rms_source = RmsSource::reference_image;
      else fail("noise.rms_source", *e, "expected template or reference, got '" + e->value + "'");
    }
    noise = n;
  }

  void build_perturb(PerturbConfig& p) const {
    number("perturb.intensity_scale", p.intensity_scale);
    in_range("perturb.intensity_scale", p.intensity_scale, 1e-12, 1e12, "must be positive");
    number("perturb.jitter_amplitude", p.jitter_amplitude);
    in_range("perturb.jitter_amplitude", p.jitter_amplitude, 0.0, 1.0, "must lie in [0, 1]");
    number("perturb.jitter_region", p.jitter_region);
    in_range("perturb.jitter_region", p.jitter_region, 1, 1 << 20, "must be at least 1");
    number("perturb.jitter_seed", p.jitter_seed);
  }

  template <typename T>
  std::vector<T> list(const std::string& key, T lo, T hi, const std::string& what) const {
    std::vector<T> out;
    const Entry* e = find(key);
    if (!e) return out;
    for (const std::string& item : split_list(e->value)) {
      if (item.empty()) fail(key, *e, "empty list item");
      out.push_back(in_range(key, parse_number<T>(key, *e, item), lo, hi, what));
    }
    if (out.empty()) fail(key, *e, "list is empty");
    return out;
  }

  void build_sweep(SweepConfig& s) const {
    s.blocks = list<int>("sweep.block", 2, 1 << 20, "block sizes must be at least 2");
    if (const Entry* e = find("sweep.overlap")) {
      for (const std::string& item : split_list(e->value)) {
        if (item.empty()) fail("sweep.overlap", *e, "empty list item");
        s.overlaps.push_back(parse_overlap_term("sweep.overlap", *e, item));
      }
    }
    s.multiplier_pcts = list<double>("sweep.multiplier_pct", 0.0, 1e6, "must be non-negative");
    s.integrator_pcts = list<double>("sweep.integrator_pct", 0.0, 1e6, "must be non-negative");
    s.noise_pcts = list<double>("sweep.noise_pct", 0.0, 1e6, "must be non-negative");
    if (!s.noise_pcts.empty() && (!s.multiplier_pcts.empty() || !s.integrator_pcts.empty()))
      throw ConfigError("sweep.noise_pct", "sweep.noise_pct cannot be combined with per-stage noise axes");
  }

  void check_sweep(const ExperimentConfig& c) const {
    const std::vector<int> blocks = c.sweep.blocks.empty() ? std::vector<int>{c.match.block} : c.sweep.blocks;
    for (int b : blocks) {
      if (!c.sweep.overlaps.empty() && expand_overlaps(c.sweep.overlaps, b).empty())
        throw ConfigError("sweep.overlap", "sweep.overlap: no overlap in [0, " + std::to_string(b - 1) +
                                               "] for block " + std::to_string(b));
      if (c.match.ma_window && *c.match.ma_window > b)
        throw ConfigError("match.ma_window", "match.ma_window: exceeds swept block " + std::to_string(b));
    }
  }

  const Entries& entries_;
  const ParseOptions& options_;
};

}  // namespace

const std::vector<std::string>& config_keys() { return kKeys; }

std::string_view to_string(RmsSource source) {
  return source == RmsSource::template_image ? "template" : "reference";
}

std::string_view to_string(Diagonal which) { return which == Diagonal::main ? "main" : "anti"; }

ExperimentConfig parse_config(std::string_view text, const ParseOptions& options) {
  Entries entries = read_entries(text);
  for (const auto& [key, value] : options.overrides) {
    if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end())
      throw ConfigError(key, "unknown key " + key);
    entries[key] = Entry{trim(value), 0};
  }
  return Builder(entries, options).build();
}

ExperimentConfig load_config(const fs::path& path, ParseOptions options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", "cannot read config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  if (options.base_dir.empty()) options.base_dir = path.parent_path();
  return parse_config(text.str(), options);
}

std::string render_config(const ExperimentConfig& c) {
  std::ostringstream out;
  auto quoted = [](const fs::path& p) { return "\"" + p.string() + "\""; };
  out << "[images]\n";
  out << "template = " << quoted(c.images.template_path) << '\n';
  out << "reference = " << quoted(c.images.reference_path) << '\n';
  if (c.images.ground_truth_path) out << "ground_truth = " << quoted(*c.images.ground_truth_path) << '\n';
  out << "truth_scale = " << format_double(c.images.truth_scale) << '\n';
  out << "truth_unknown = " << c.images.truth_unknown << '\n';
  out << "truth_sign = " << format_double(c.images.truth_sign) << '\n';

  const MatchConfig& m = c.match;
  out << "\n[match]\n";
  out << "variant = " << to_string(m.variant) << '\n';
  out << "block = " << m.block << '\n';
  out << "overlap = " << m.overlap << '\n';
  out << "margin = " << m.margin << '\n';
  out << "max_disparity = " << m.max_disparity << '\n';
  out << "max_vertical = " << m.max_vertical << '\n';
  if (m.window) {
    out << "u_min = " << m.window->u_min << '\n' << "u_max = " << m.window->u_max << '\n';
    out << "v_min = " << m.window->v_min << '\n' << "v_max = " << m.window->v_max << '\n';
  }
  out << "exhaustive_search = " << (m.exhaustive_search ? "true" : "false") << '\n';
  if (m.ma_window) out << "ma_window = " << *m.ma_window << '\n';
  out << "diagonal = " << to_string(m.diagonal) << '\n';
  out << "sum_tables = " << (m.sum_tables ? "true" : "false") << '\n';
  out << "threads = " << m.threads << '\n';

  if (c.noise) {
    out << "\n[noise]\n";
    out << "multiplier_pct = " << format_double(c.noise->multiplier_pct) << '\n';
    out << "integrator_pct = " << format_double(c.noise->integrator_pct) << '\n';
    out << "seed = " << c.noise->seed << '\n';
    out << "rms_source = " << to_string(c.noise->rms_source) << '\n';
  }

  out << "\n[perturb]\n";
  out << "intensity_scale = " << format_double(c.perturb.intensity_scale) << '\n';
  out << "jitter_amplitude = " << format_double(c.perturb.jitter_amplitude) << '\n';
  out << "jitter_region = " << c.perturb.jitter_region << '\n';
  out << "jitter_seed = " << c.perturb.jitter_seed << '\n';

  const SweepConfig& s = c.sweep;
  if (!s.empty()) {
    out << "\n[sweep]\n";
    auto num = [](int v) { return std::to_string(v); };
    if (!s.blocks.empty()) out << "block = " << join(s.blocks, num) << '\n';
    if (!s.overlaps.empty()) {
      out << "overlap = " << join(s.overlaps, [](const OverlapTerm& t) {
        const std::string first = format_overlap_bound(t.first, t.first_from_block);
        const std::string last = format_overlap_bound(t.last, t.last_from_block);
        return first == last ? first : first + ".." + last;
      }) << '\n';
    }
    if (!s.multiplier_pcts.empty()) out << "multiplier_pct = " << join(s.multiplier_pcts, format_double) << '\n';
    if (!s.integrator_pcts.empty()) out << "integrator_pct = " << join(s.integrator_pcts, format_double) << '\n';
    if (!s.noise_pcts.empty()) out << "noise_pct = " << join(s.noise_pcts, format_double) << '\n';
  }

  out << "\n[output]\n";
  out << "dir = " << quoted(c.output_dir) << '\n';
  return out.str();
}

std::vector<int> expand_overlaps(const std::vector<OverlapTerm>& terms, int block) {
  std::vector<int> out;
  for (const OverlapTerm& t : terms) {
    const int first = t.first_from_block ? block + t.first : t.first;
    const int last = t.last_from_block ? block + t.last : t.last;
    for (int o = std::max(first, 0); o <= std::min(last, block - 1); ++o) out.push_back(o);
  }
  return out;
}

std::vector<ExperimentConfig> expand_sweep(const ExperimentConfig& config) {
  const SweepConfig& s = config.sweep;
  ExperimentConfig base = config;
  base.sweep = {};
  if (s.empty()) return {base};

  const std::vector<int> blocks = s.blocks.empty() ? std::vector<int>{config.match.block} : s.blocks;
  struct NoisePoint {
    double multiplier;
    double integrator;
  };
  std::vector<std::optional<NoisePoint>> noise_points;
  const NoiseConfig noise_base = config.noise.value_or(NoiseConfig{});
  if (!s.noise_pcts.empty()) {
    for (double p : s.noise_pcts) noise_points.push_back(NoisePoint{p, p});
  } else if (!s.multiplier_pcts.empty() || !s.integrator_pcts.empty()) {
    const auto ms = s.multiplier_pcts.empty() ? std::vector<double>{noise_base.multiplier_pct} : s.multiplier_pcts;
    const auto is = s.integrator_pcts.empty() ? std::vector<double>{noise_base.integrator_pct} : s.integrator_pcts;
    for (double m : ms)
      for (double i : is) noise_points.push_back(NoisePoint{m, i});
  } else {
    noise_points.push_back(std::nullopt);
  }

  std::vector<ExperimentConfig> runs;
  for (int b : blocks) {
    std::vector<int> overlaps;
    if (!s.overlaps.empty()) overlaps = expand_overlaps(s.overlaps, b);
    else if (b == config.match.block) overlaps = {config.match.overlap};
    else overlaps = {static_cast<int>(std::lround(0.65 * b))};
    for (int o : overlaps) {
      for (const auto& np : noise_points) {
        ExperimentConfig run = base;
        run.match.block = b;
        run.match.overlap = o;
        if (np) {
          run.noise = noise_base;
          run.noise->multiplier_pct = np->multiplier;
          run.noise->integrator_pct = np->integrator;
        }
        runs.push_back(std::move(run));
      }
    }
  }
  return runs;
}

SearchWindow resolve_window(const MatchConfig& match, Eigen::Index width, Eigen::Index height) {
  if (match.exhaustive_search) {
    const int u = static_cast<int>(width) - match.block;
    const int v = static_cast<int>(height) - match.block;
    return SearchWindow::symmetric(std::max(u, 0), std::max(v, 0));
  }
  if (match.window) return *match.window;
  return SearchWindow::symmetric(match.max_disparity, match.max_vertical);
}

}  // namespace stereocorr
