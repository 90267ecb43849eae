#include "stereocorr/metrics.hpp"

#include <random>

namespace stereocorr {
namespace {

std::vector<int> nearest_cells(Eigen::Index pixels, int offset, int pitch, int block, int cells) {
  std::vector<int> index(static_cast<std::size_t>(pixels));
  const double half = (block - 1) / 2.0;
  for (Eigen::Index p = 0; p < pixels; ++p) {
    const long c = std::lround((static_cast<double>(p) - offset - half) / pitch);
    index[static_cast<std::size_t>(p)] = static_cast<int>(std::clamp<long>(c, 0, cells - 1));
  }
  return index;
}

}  // namespace

DenseDisparity densify(const DisparityMap& map, Eigen::Index width, Eigen::Index height) {
  DenseDisparity dense{Eigen::ArrayXXd::Zero(height, width), Eigen::ArrayXXd::Zero(height, width),
                       Mask::Constant(height, width, false)};
  if (map.cells.empty()) return dense;
  const auto col = nearest_cells(width, map.origin_offset.x, map.pitch, map.block, map.lattice_width);
  const auto row = nearest_cells(height, map.origin_offset.y, map.pitch, map.block, map.lattice_height);
  for (Eigen::Index y = 0; y < height; ++y) {
    for (Eigen::Index x = 0; x < width; ++x) {
      const DisparityCell& c = map.at(col[static_cast<std::size_t>(x)], row[static_cast<std::size_t>(y)]);
      dense.dx(y, x) = c.dx;
      dense.dy(y, x) = c.dy;
      dense.valid(y, x) = c.valid;
    }
  }
  return dense;
}

double rms_disparity_error(const DisparityMap& map, const GroundTruthDisparity& truth, double sign) {
  const DenseDisparity dense = densify(map, truth.width(), truth.height());
  double sum = 0.0;
  std::size_t n = 0;
  for (Eigen::Index y = 0; y < truth.height(); ++y) {
    for (Eigen::Index x = 0; x < truth.width(); ++x) {
      if (!dense.valid(y, x) || !truth.valid(y, x)) continue;
      const double e = sign * dense.dx(y, x) - truth.disparity(y, x);
      sum += e * e;
      ++n;
    }
  }
  if (n == 0) throw std::domain_error("rms_disparity_error: no pixel is valid in both maps");
  return std::sqrt(sum / static_cast<double>(n));
}

Image jitter_regions(const Image& img, int region, double amplitude, std::uint64_t seed) {
  if (region < 1) throw std::invalid_argument("jitter region must be at least 1 pixel");
  if (amplitude < 0 || amplitude > 1) throw std::invalid_argument("jitter amplitude must lie in [0, 1]");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> gain(1.0 - amplitude, 1.0 + amplitude);
  Image out = img;
  for (Eigen::Index y = 0; y < img.rows(); y += region) {
    for (Eigen::Index x = 0; x < img.cols(); x += region) {
      const Eigen::Index h = std::min<Eigen::Index>(region, img.rows() - y);
      const Eigen::Index w = std::min<Eigen::Index>(region, img.cols() - x);
      out.block(y, x, h, w) = (out.block(y, x, h, w) * gain(rng)).cwiseMin(1.0);
    }
  }
  return out;
}

}  // namespace stereocorr
