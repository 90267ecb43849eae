#pragma once

#include "stereocorr/analog.hpp"
#include "stereocorr/grid.hpp"
#include "stereocorr/ncc.hpp"
#include "stereocorr/op_count.hpp"
#include "stereocorr/surface.hpp"

#include <optional>

namespace stereocorr {

/// Sum of absolute differences over two equally shaped blocks.
template <typename DerivedA, typename DerivedB>
double sad_block(const Eigen::ArrayBase<DerivedA>& reference_block, const Eigen::ArrayBase<DerivedB>& template_block) {
  if (reference_block.rows() != template_block.rows() || reference_block.cols() != template_block.cols())
    throw std::invalid_argument("sad_block: block shapes differ");
  return (reference_block.template cast<double>() - template_block.template cast<double>()).abs().sum();
}

/// SAD of the template block against the reference region at origin + (u, v)
/// for every in-bounds shift; lower is better. Noise enters after the
/// absolute-difference circuit and at every integrator accumulation step.
template <typename Scalar>
ScoreSurface<Scalar> sad_search(const GrayImage<Scalar>& template_block, const GrayImage<Scalar>& reference,
                                Offset origin, const SearchWindow& window,
                                const std::optional<BlockNoise>& noise = std::nullopt, OpCounts* counts = nullptr) {
  window.validate();
  if (template_block.rows() != template_block.cols())
    throw std::invalid_argument("sad_search: template block must be square");
  ScoreSurface<Scalar> surface(window);
  const int b = static_cast<int>(template_block.rows());
  const Eigen::Index n = template_block.size();
  for (int v = window.v_min; v <= window.v_max; ++v) {
    for (int u = window.u_min; u <= window.u_max; ++u) {
      const Offset at = origin + Offset{u, v};
      if (!block_fits(reference.cols(), reference.rows(), at, b)) continue;
      double score = sad_block(reference.block(at.y, at.x, b, b), template_block);
      if (counts) {
        counts->abs_diffs += static_cast<std::uint64_t>(n);
        counts->adds += static_cast<std::uint64_t>(n);
      }
      score += detail::numerator_noise(noise, window.shift_id(u, v), n);
      surface.set(u, v, static_cast<Scalar>(score));
    }
  }
  return surface;
}

}  // namespace stereocorr
