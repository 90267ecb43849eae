#pragma once

#include "stereocorr/image.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace stereocorr {

// Behavioral model of the analog correlator: additive Gaussian noise scaled to
// the image RMS at each circuit stage, plus a per-component power rollup.

enum class NoiseStage : std::uint32_t {
  multiplier = 1,  // also the absolute-difference circuit of the SAD path
  integrator = 2,
};

struct NoiseSpec {
  double multiplier_pct = 0.0;  // fraction of signal_rms, 0.01 == 1 %
  double integrator_pct = 0.0;
  std::uint64_t seed = 0;
  double signal_rms = 0.0;

  bool silent() const { return multiplier_pct == 0.0 && integrator_pct == 0.0; }
  double stage_pct(NoiseStage stage) const {
    return stage == NoiseStage::multiplier ? multiplier_pct : integrator_pct;
  }
};

/// Identifies one injected sample independently of evaluation order.
struct NoiseKey {
  std::uint64_t block_id = 0;
  std::uint64_t shift_id = 0;
  std::uint64_t sample_idx = 0;
};

template <typename Derived>
double image_rms(const Eigen::ArrayBase<Derived>& img) {
  if (img.size() == 0) throw std::invalid_argument("image_rms: empty image");
  return std::sqrt(img.template cast<double>().square().mean());
}

namespace detail {

// splitmix64 finalizer
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t absorb(std::uint64_t state, std::uint64_t word) {
  return mix64(state + 0x9e3779b97f4a7c15ULL + mix64(word));
}

}  // namespace detail

/// Inverse of the standard normal CDF for p in (0, 1); rational
/// approximation with relative error below 1.2e-9.
inline double inverse_normal_cdf(double p) {
  constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                          1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
  constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                          6.680131188771972e+01,  -1.328068155288572e+01};
  constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                          -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
  constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                          3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("inverse_normal_cdf: p must lie in (0, 1)");
  if (p < p_low || p > 1.0 - p_low) {
    const double q = std::sqrt(-2.0 * (p < p_low ? std::log(p) : std::log1p(-p)));
    const double x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
                     ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    return p < p_low ? x : -x;
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

struct StageNormals {
  double multiplier = 0.0;
  double integrator = 0.0;
};

/// Counter-based deviates for one (seed, block, shift): sample k draws one
/// 64-bit hash whose high half feeds the multiplier stage and low half the
/// integrator stage, each through inverse_normal_cdf.
class NoiseStream {
 public:
  NoiseStream(std::uint64_t seed, std::uint64_t block_id, std::uint64_t shift_id)
      : state_(detail::absorb(detail::absorb(detail::mix64(seed), block_id), shift_id)) {}

  double standard_normal(NoiseStage stage, std::uint64_t sample_idx) const {
    const std::uint64_t bits = detail::absorb(state_, sample_idx);
    return to_normal(stage == NoiseStage::multiplier ? static_cast<std::uint32_t>(bits >> 32)
                                                     : static_cast<std::uint32_t>(bits));
  }

  StageNormals both(std::uint64_t sample_idx) const {
    const std::uint64_t bits = detail::absorb(state_, sample_idx);
    return {to_normal(static_cast<std::uint32_t>(bits >> 32)), to_normal(static_cast<std::uint32_t>(bits))};
  }

 private:
  static double to_normal(std::uint32_t half) {
    return inverse_normal_cdf((static_cast<double>(half) + 0.5) * 0x1.0p-32);
  }

  std::uint64_t state_;
};

/// Standard normal deviate that is a pure function of (seed, stage, key).
inline double keyed_standard_normal(std::uint64_t seed, NoiseStage stage, const NoiseKey& key) {
  return NoiseStream(seed, key.block_id, key.shift_id).standard_normal(stage, key.sample_idx);
}

/// signal_rms * stage_pct * g with g = keyed_standard_normal(seed, stage, key).
inline double noise_sample(const NoiseSpec& spec, NoiseStage stage, const NoiseKey& key) {
  const double scale = spec.signal_rms * spec.stage_pct(stage);
  if (scale == 0.0) return 0.0;
  return scale * keyed_standard_normal(spec.seed, stage, key);
}

/// Noise amplitude that a circuit with the given dynamic range contributes:
/// 10^(-dB / 20), e.g. 40 dB -> 0.01.
inline double dynamic_range_to_noise_pct(double dr_db) { return std::pow(10.0, -dr_db / 20.0); }

struct PowerEntry {
  std::string name;
  double unit_power_mw = 0.0;
  int quantity = 0;
  double subtotal_mw = 0.0;
};

struct PowerReport {
  int channels = 0;
  std::vector<PowerEntry> entries;
  double total_mw = 0.0;
};

/// Channels pair into template/reference readers: one low-pass filter and
/// one summer per channel, one multiplier and one integrator per pair.
/// Throws std::invalid_argument for odd or negative channel counts.
PowerReport power_estimate(int channels);

std::string format_power_report(const PowerReport& report);

}  // namespace stereocorr
