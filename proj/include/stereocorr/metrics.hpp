#pragma once

#include "stereocorr/disparity_map.hpp"
#include "stereocorr/grid.hpp"
#include "stereocorr/image.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stereocorr {

/// Moves every valid block of the template by its (dx, dy) onto a canvas that
/// starts as a copy of the template. Blocks are pasted in grid order, so later
/// blocks win where footprints overlap; pixels landing off-canvas are dropped.
template <typename Scalar>
GrayImage<Scalar> apply_disparity(const GrayImage<Scalar>& template_image, const DisparityMap& map,
                                  const BlockGrid& grid) {
  if (map.cells.size() != grid.size()) throw std::invalid_argument("apply_disparity: map does not match grid");
  GrayImage<Scalar> canvas = template_image;
  const int w = static_cast<int>(canvas.cols());
  const int h = static_cast<int>(canvas.rows());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const DisparityCell& cell = map.cells[i];
    if (!cell.valid) continue;
    const Offset src = grid.origins[i];
    const Offset dst = src + Offset{cell.dx, cell.dy};
    const int x0 = std::max(dst.x, 0), x1 = std::min(dst.x + grid.block, w);
    const int y0 = std::max(dst.y, 0), y1 = std::min(dst.y + grid.block, h);
    if (x0 >= x1 || y0 >= y1) continue;
    canvas.block(y0, x0, y1 - y0, x1 - x0) =
        template_image.block(y0 - cell.dy, x0 - cell.dx, y1 - y0, x1 - x0);
  }
  return canvas;
}

/// Global zero-shift zero-mean normalized correlation of two equally sized
/// images. Throws std::domain_error when both are constant; a single
/// constant image correlates to 0.
template <typename DerivedA, typename DerivedB>
double correlation_coefficient(const Eigen::ArrayBase<DerivedA>& a, const Eigen::ArrayBase<DerivedB>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("correlation_coefficient: image shapes differ");
  if (a.size() == 0) throw std::invalid_argument("correlation_coefficient: empty images");
  const auto da = (a.template cast<double>() - a.template cast<double>().mean()).eval();
  const auto db = (b.template cast<double>() - b.template cast<double>().mean()).eval();
  const double ea = da.square().sum();
  const double eb = db.square().sum();
  if (ea == 0.0 && eb == 0.0) throw std::domain_error("correlation_coefficient: both images are constant");
  if (ea == 0.0 || eb == 0.0) return 0.0;
  return std::clamp((da * db).sum() / std::sqrt(ea * eb), -1.0, 1.0);
}

/// Pixel-resolution horizontal/vertical disparity from a lattice map. Each
/// pixel takes the cell whose block center is nearest (clamped to the lattice).
struct DenseDisparity {
  Eigen::ArrayXXd dx;  // rows = height
  Eigen::ArrayXXd dy;
  Mask valid;
};

DenseDisparity densify(const DisparityMap& map, Eigen::Index width, Eigen::Index height);

/// sqrt(mean((sign * dx - truth)^2)) over pixels valid in both. sign = -1
/// compares against truth stored as positive left-view disparities when the
/// template is the left view. Throws std::domain_error when nothing overlaps.
double rms_disparity_error(const DisparityMap& map, const GroundTruthDisparity& truth, double sign = 1.0);

/// Multiplies every intensity by factor (uniform illumination change).
template <typename Scalar>
GrayImage<Scalar> scale_intensity(const GrayImage<Scalar>& img, double factor) {
  return (img.template cast<double>() * factor).cwiseMax(0.0).cwiseMin(1.0).template cast<Scalar>();
}

/// Multiplies each region x region tile by its own gain drawn uniformly from
/// [1 - amplitude, 1 + amplitude], clamping to [0, 1]. Deterministic in seed.
Image jitter_regions(const Image& img, int region, double amplitude, std::uint64_t seed);

}  // namespace stereocorr
