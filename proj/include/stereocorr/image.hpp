#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <vector>

namespace stereocorr {

/// Row-major intensity grid: rows() is the image height, cols() the width,
/// and pixel (x, y) is img(y, x). Intensities are normalized to [0, 1].
template <typename Scalar>
using GrayImage = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using Image = GrayImage<double>;

template <typename Scalar>
using Signal = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

using Mask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Pixel position or displacement in image coordinates (x right, y down).
struct Offset {
  int x = 0;
  int y = 0;

  friend constexpr Offset operator+(Offset a, Offset b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr bool operator==(Offset, Offset) = default;
};

template <typename Derived>
bool is_normalized(const Eigen::ArrayBase<Derived>& img) {
  return img.size() > 0 && (img >= 0).all() && (img <= 1).all();
}

/// Horizontal ground-truth disparity with a per-pixel validity flag.
struct GroundTruthDisparity {
  Eigen::ArrayXXd disparity;  // rows = height
  Mask valid;

  Eigen::Index width() const { return disparity.cols(); }
  Eigen::Index height() const { return disparity.rows(); }
};

}  // namespace stereocorr
