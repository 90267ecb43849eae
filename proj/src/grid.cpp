#include "stereocorr/grid.hpp"

#include <algorithm>

namespace stereocorr {

BlockGrid partition(Eigen::Index image_width, Eigen::Index image_height, int block, int overlap,
                    int margin) {
  if (block < 2) throw std::invalid_argument("block must be at least 2 pixels");
  if (overlap < 0 || overlap >= block)
    throw std::invalid_argument("overlap " + std::to_string(overlap) + " must lie in [0, " +
                                std::to_string(block - 1) + "]");
  if (margin < 0) throw std::invalid_argument("margin must be non-negative");
  const Eigen::Index usable_w = image_width - 2 * Eigen::Index{margin};
  const Eigen::Index usable_h = image_height - 2 * Eigen::Index{margin};
  if (block > std::min(usable_w, usable_h))
    throw std::invalid_argument("block " + std::to_string(block) + " exceeds the usable " +
                                std::to_string(usable_w) + "x" + std::to_string(usable_h) + " area");

  BlockGrid grid;
  grid.block = block;
  grid.overlap = overlap;
  grid.stride = block - overlap;
  grid.margin = margin;
  grid.columns = static_cast<int>((usable_w - block) / grid.stride + 1);
  grid.rows = static_cast<int>((usable_h - block) / grid.stride + 1);
  grid.origins.reserve(static_cast<std::size_t>(grid.columns) * grid.rows);
  for (int r = 0; r < grid.rows; ++r)
    for (int c = 0; c < grid.columns; ++c)
      grid.origins.push_back({margin + c * grid.stride, margin + r * grid.stride});
  return grid;
}

}  // namespace stereocorr
