#pragma once

#include "stereocorr/image.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace stereocorr {

/// Square template blocks laid out on a regular lattice with pitch
/// stride = block - overlap, inset by margin on every side.
struct BlockGrid {
  int block = 0;
  int overlap = 0;
  int stride = 0;
  int margin = 0;
  int columns = 0;  // lattice cells per row
  int rows = 0;
  std::vector<Offset> origins;  // row-major, top-left corners

  std::size_t size() const { return origins.size(); }
};

/// Throws std::invalid_argument when the block does not fit the usable area
/// or overlap is outside [0, block - 1].
BlockGrid partition(Eigen::Index image_width, Eigen::Index image_height, int block, int overlap,
                    int margin = 0);

inline bool block_fits(Eigen::Index width, Eigen::Index height, Offset origin, int block) {
  return block >= 1 && origin.x >= 0 && origin.y >= 0 && origin.x + block <= width &&
         origin.y + block <= height;
}

template <typename Derived>
GrayImage<typename Derived::Scalar> extract_block(const Eigen::ArrayBase<Derived>& img, Offset origin,
                                                  int block) {
  if (!block_fits(img.cols(), img.rows(), origin, block))
    throw std::out_of_range("extract_block: block " + std::to_string(block) + " at (" +
                            std::to_string(origin.x) + ", " + std::to_string(origin.y) +
                            ") leaves the image");
  return img.block(origin.y, origin.x, block, block);
}

enum class Diagonal { main, anti };

/// main: element k is img(origin + (k, k)); anti: img(origin + (block - 1 - k, k)).
template <typename Derived>
Signal<typename Derived::Scalar> extract_diagonal(const Eigen::ArrayBase<Derived>& img, Offset origin,
                                                  int block, Diagonal which = Diagonal::main) {
  if (!block_fits(img.cols(), img.rows(), origin, block))
    throw std::out_of_range("extract_diagonal: block leaves the image");
  Signal<typename Derived::Scalar> diag(block);
  for (int k = 0; k < block; ++k) {
    const int x = which == Diagonal::main ? origin.x + k : origin.x + block - 1 - k;
    diag(k) = img(origin.y + k, x);
  }
  return diag;
}

}  // namespace stereocorr
