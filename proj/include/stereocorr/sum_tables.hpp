#pragma once

#include "stereocorr/image.hpp"

#include <type_traits>

namespace stereocorr {

/// Summed-area tables of r and r^2 with a zero first row and column, so
/// sum(x, y) covers [0, x) x [0, y). Accumulates in at least double precision.
template <typename Scalar>
class SumTables {
 public:
  using Accum = std::conditional_t<(sizeof(Scalar) < sizeof(double)), double, Scalar>;
  using Table = Eigen::Array<Accum, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  SumTables() = default;

  template <typename Derived>
  explicit SumTables(const Eigen::ArrayBase<Derived>& img)
      : sum_(Table::Zero(img.rows() + 1, img.cols() + 1)), sum_sq_(Table::Zero(img.rows() + 1, img.cols() + 1)) {
    for (Eigen::Index y = 0; y < img.rows(); ++y) {
      Accum row = 0, row_sq = 0;
      for (Eigen::Index x = 0; x < img.cols(); ++x) {
        const Accum v = static_cast<Accum>(img(y, x));
        row += v;
        row_sq += v * v;
        sum_(y + 1, x + 1) = sum_(y, x + 1) + row;
        sum_sq_(y + 1, x + 1) = sum_sq_(y, x + 1) + row_sq;
      }
    }
  }

  /// Sum of r over the w x h rectangle with top-left corner (x, y).
  Accum rect_sum(Eigen::Index x, Eigen::Index y, Eigen::Index w, Eigen::Index h) const {
    return corner_sum(sum_, x, y, w, h);
  }
  Accum rect_sum_sq(Eigen::Index x, Eigen::Index y, Eigen::Index w, Eigen::Index h) const {
    return corner_sum(sum_sq_, x, y, w, h);
  }

  const Table& running_sum() const { return sum_; }
  const Table& running_sum_sq() const { return sum_sq_; }
  Eigen::Index width() const { return sum_.cols() - 1; }
  Eigen::Index height() const { return sum_.rows() - 1; }

 private:
  static Accum corner_sum(const Table& t, Eigen::Index x, Eigen::Index y, Eigen::Index w, Eigen::Index h) {
    if (w <= 0 || h <= 0) return Accum{0};
    return t(y + h, x + w) - t(y, x + w) - t(y + h, x) + t(y, x);
  }

  Table sum_;
  Table sum_sq_;
};

template <typename Derived>
SumTables<typename Derived::Scalar> build_sum_tables(const Eigen::ArrayBase<Derived>& reference) {
  return SumTables<typename Derived::Scalar>(reference);
}

}  // namespace stereocorr
