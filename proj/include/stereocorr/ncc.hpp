#pragma once

#include "stereocorr/analog.hpp"
#include "stereocorr/grid.hpp"
#include "stereocorr/op_count.hpp"
#include "stereocorr/sum_tables.hpp"
#include "stereocorr/surface.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <type_traits>

namespace stereocorr {

/// Noise injection context for one template block.
struct BlockNoise {
  NoiseSpec spec;
  std::uint64_t block_id = 0;
};

namespace detail {

// Energies at or below this (per sample) are treated as zero variance.
inline constexpr double kDegenerateVariancePerSample = 1e-12;

inline bool degenerate(double energy, Eigen::Index samples, double rounding_floor = 0.0) {
  return !(energy > kDegenerateVariancePerSample * static_cast<double>(samples) + rounding_floor);
}

// Analog numerator: every product sample leaves the multiplier with additive
// noise and the integrator adds its own noise at each accumulation step.
inline double numerator_noise(const std::optional<BlockNoise>& noise, std::uint64_t shift_id, Eigen::Index samples) {
  if (!noise || noise->spec.silent()) return 0.0;
  const NoiseSpec& spec = noise->spec;
  const double m_scale = spec.signal_rms * spec.multiplier_pct;
  const double i_scale = spec.signal_rms * spec.integrator_pct;
  const NoiseStream stream(spec.seed, noise->block_id, shift_id);
  double sum = 0.0;
  for (Eigen::Index k = 0; k < samples; ++k) {
    const StageNormals g = stream.both(static_cast<std::uint64_t>(k));
    sum += m_scale * g.multiplier;
    sum += i_scale * g.integrator;
  }
  return sum;
}

// Noiseless correlations can only leave [-1, 1] through rounding. Noisy
// numerators are the analog output and are kept as they are.
inline double bound_correlation(double c, const std::optional<BlockNoise>& noise) {
  if (noise && !noise->spec.silent()) return c;
  return std::clamp(c, -1.0, 1.0);
}

}  // namespace detail

/// Causal trailing mean: out[k] = mean(signal[max(0, k - window_len + 1) ..= k]).
template <typename Derived>
Signal<typename Derived::Scalar> moving_average(const Eigen::ArrayBase<Derived>& signal, Eigen::Index window_len) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = signal.size();
  if (n == 0) throw std::invalid_argument("moving_average: empty signal");
  if (window_len < 1 || window_len > n)
    throw std::invalid_argument("moving_average: window length must lie in [1, signal length]");
  Signal<Scalar> out(n);
  double acc = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    acc += static_cast<double>(signal(k));
    if (k >= window_len) acc -= static_cast<double>(signal(k - window_len));
    out(k) = static_cast<Scalar>(acc / static_cast<double>(std::min(k + 1, window_len)));
  }
  return out;
}

/// Zero-mean normalized cross-correlation of a square template block against
/// the equally sized reference region at origin + (u, v), for every shift in
/// the window. Shifts whose region leaves the reference, or whose region has
/// zero variance, are invalid; a zero-variance template invalidates all of them.
/// With tables the reference mean and variance come from four lookups each.
template <typename Scalar>
ScoreSurface<Scalar> ncc_full(const GrayImage<Scalar>& template_block, const GrayImage<Scalar>& reference,
                              Offset origin, const SearchWindow& window,
                              const std::type_identity_t<SumTables<Scalar>>* tables = nullptr,
                              const std::optional<BlockNoise>& noise = std::nullopt, OpCounts* counts = nullptr) {
  window.validate();
  if (template_block.rows() != template_block.cols())
    throw std::invalid_argument("ncc_full: template block must be square");
  ScoreSurface<Scalar> surface(window);
  const int b = static_cast<int>(template_block.rows());
  const Eigen::Index n = template_block.size();

  const double t_mean = template_block.template cast<double>().mean();
  const GrayImage<double> t_zero = template_block.template cast<double>() - t_mean;
  const double t_energy = t_zero.square().sum();
  if (detail::degenerate(t_energy, n)) return surface;

  for (int v = window.v_min; v <= window.v_max; ++v) {
    for (int u = window.u_min; u <= window.u_max; ++u) {
      const Offset at = origin + Offset{u, v};
      if (!block_fits(reference.cols(), reference.rows(), at, b)) continue;
      const auto region = reference.block(at.y, at.x, b, b).template cast<double>();

      // sum_xy r * (t - t_mean) equals the mean-removed product sum since t_zero sums to zero
      double numerator = (region * t_zero).sum();
      if (counts) {
        counts->multiplies += static_cast<std::uint64_t>(n);
        counts->adds += static_cast<std::uint64_t>(n);
      }
      numerator += detail::numerator_noise(noise, window.shift_id(u, v), n);

      double r_energy = 0.0;
      double floor = 0.0;
      if (tables) {
        const double s = static_cast<double>(tables->rect_sum(at.x, at.y, b, b));
        const double s2 = static_cast<double>(tables->rect_sum_sq(at.x, at.y, b, b));
        r_energy = s2 - s * s / static_cast<double>(n);
        // cancellation error grows with the magnitude of the table corners
        floor = 64.0 * std::numeric_limits<double>::epsilon() *
                static_cast<double>(tables->running_sum_sq()(at.y + b, at.x + b));
      } else {
        r_energy = (region - region.mean()).square().sum();
      }
      if (detail::degenerate(r_energy, n, floor)) continue;
      surface.set(u, v, static_cast<Scalar>(detail::bound_correlation(numerator / std::sqrt(t_energy * r_energy), noise)));
    }
  }
  return surface;
}

/// Diagonal-only NCC: both diagonals have their causal moving average removed
/// and are correlated as 1-D signals, one multiply per diagonal element.
template <typename Scalar, typename Derived>
ScoreSurface<Scalar> ncc_diagonal(const Eigen::ArrayBase<Derived>& template_diag, const GrayImage<Scalar>& reference,
                                  Offset origin, const SearchWindow& window, int ma_window,
                                  Diagonal which = Diagonal::main,
                                  const std::optional<BlockNoise>& noise = std::nullopt, OpCounts* counts = nullptr) {
  window.validate();
  ScoreSurface<Scalar> surface(window);
  const int b = static_cast<int>(template_diag.size());
  const Signal<double> t = template_diag.template cast<double>();
  const Signal<double> t_filtered = t - moving_average(t, ma_window);
  const double t_energy = t_filtered.square().sum();
  if (detail::degenerate(t_energy, b)) return surface;

  for (int v = window.v_min; v <= window.v_max; ++v) {
    for (int u = window.u_min; u <= window.u_max; ++u) {
      const Offset at = origin + Offset{u, v};
      if (!block_fits(reference.cols(), reference.rows(), at, b)) continue;
      const Signal<double> r = extract_diagonal(reference, at, b, which).template cast<double>();
      const Signal<double> r_filtered = r - moving_average(r, ma_window);

      double numerator = (t_filtered * r_filtered).sum();
      if (counts) {
        counts->multiplies += static_cast<std::uint64_t>(b);
        counts->adds += static_cast<std::uint64_t>(b);
      }
      numerator += detail::numerator_noise(noise, window.shift_id(u, v), b);

      const double r_energy = r_filtered.square().sum();
      if (detail::degenerate(r_energy, b)) continue;
      surface.set(u, v, static_cast<Scalar>(detail::bound_correlation(numerator / std::sqrt(t_energy * r_energy), noise)));
    }
  }
  return surface;
}

}  // namespace stereocorr
