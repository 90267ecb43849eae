#pragma once

// Straight-line reference implementations. Each one follows its formula
// literally with plain loops and shares no code with the library beyond the
// image container.

#include "stereocorr/image.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <tuple>
#include <vector>

namespace oracle {

using stereocorr::Image;

inline Image random_image(int width, int height, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Image img(height, width);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) img(y, x) = u(rng);
  return img;
}

inline bool inside(const Image& img, int x, int y, int w, int h) {
  return x >= 0 && y >= 0 && x + w <= img.cols() && y + h <= img.rows();
}

/// Zero-mean normalized correlation of t against ref at (ox + u, oy + v);
/// nullopt when the region leaves ref or either side has zero variance.
inline std::optional<double> ncc(const Image& t, const Image& ref, int ox, int oy, int u, int v) {
  const int n = static_cast<int>(t.rows());
  const int x0 = ox + u, y0 = oy + v;
  if (!inside(ref, x0, y0, n, n)) return std::nullopt;
  double t_mean = 0.0, r_mean = 0.0;
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) {
      t_mean += t(y, x);
      r_mean += ref(y0 + y, x0 + x);
    }
  t_mean /= n * n;
  r_mean /= n * n;
  double num = 0.0, tt = 0.0, rr = 0.0;
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) {
      const double a = t(y, x) - t_mean;
      const double b = ref(y0 + y, x0 + x) - r_mean;
      num += a * b;
      tt += a * a;
      rr += b * b;
    }
  if (tt <= 1e-12 * n * n || rr <= 1e-12 * n * n) return std::nullopt;
  return num / std::sqrt(tt * rr);
}

inline std::optional<double> sad(const Image& t, const Image& ref, int ox, int oy, int u, int v) {
  const int n = static_cast<int>(t.rows());
  const int x0 = ox + u, y0 = oy + v;
  if (!inside(ref, x0, y0, n, n)) return std::nullopt;
  double s = 0.0;
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) s += std::fabs(ref(y0 + y, x0 + x) - t(y, x));
  return s;
}

inline std::vector<double> causal_mean(const std::vector<double>& s, int window) {
  std::vector<double> out(s.size());
  for (std::size_t k = 0; k < s.size(); ++k) {
    const std::size_t first = k + 1 >= static_cast<std::size_t>(window) ? k + 1 - window : 0;
    double acc = 0.0;
    for (std::size_t j = first; j <= k; ++j) acc += s[j];
    out[k] = acc / static_cast<double>(k - first + 1);
  }
  return out;
}

/// Diagonal-only NCC: main diagonal of the template block at (ox, oy) and of
/// the reference region at the shifted origin, each minus its causal mean.
inline std::optional<double> diagonal_ncc(const Image& tmpl, const Image& ref, int ox, int oy, int block, int u,
                                          int v, int ma) {
  const int x0 = ox + u, y0 = oy + v;
  if (!inside(ref, x0, y0, block, block)) return std::nullopt;
  std::vector<double> t(block), r(block);
  for (int k = 0; k < block; ++k) {
    t[k] = tmpl(oy + k, ox + k);
    r[k] = ref(y0 + k, x0 + k);
  }
  const auto tm = causal_mean(t, ma);
  const auto rm = causal_mean(r, ma);
  double num = 0.0, tt = 0.0, rr = 0.0;
  for (int k = 0; k < block; ++k) {
    const double a = t[k] - tm[k];
    const double b = r[k] - rm[k];
    num += a * b;
    tt += a * a;
    rr += b * b;
  }
  if (tt <= 1e-12 * block || rr <= 1e-12 * block) return std::nullopt;
  return num / std::sqrt(tt * rr);
}

inline double rect_sum(const Image& img, int x, int y, int w, int h, bool squared) {
  double s = 0.0;
  for (int yy = y; yy < y + h; ++yy)
    for (int xx = x; xx < x + w; ++xx) s += squared ? img(yy, xx) * img(yy, xx) : img(yy, xx);
  return s;
}

struct Candidate {
  int u, v;
  double score;
};

/// Extremal candidate; equal scores resolved by (|u| + |v|, v, u).
inline Candidate best(std::vector<Candidate> c, bool maximize) {
  std::sort(c.begin(), c.end(), [&](const Candidate& a, const Candidate& b) {
    if (a.score != b.score) return maximize ? a.score > b.score : a.score < b.score;
    return std::make_tuple(std::abs(a.u) + std::abs(a.v), a.v, a.u) <
           std::make_tuple(std::abs(b.u) + std::abs(b.v), b.v, b.u);
  });
  return c.front();
}

inline double correlation(const Image& a, const Image& b) {
  const double n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    ma += a(i);
    mb += b(i);
  }
  ma /= n;
  mb /= n;
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    ab += (a(i) - ma) * (b(i) - mb);
    aa += (a(i) - ma) * (a(i) - ma);
    bb += (b(i) - mb) * (b(i) - mb);
  }
  return ab / std::sqrt(aa * bb);
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

/// Copy of src moved by (dx, dy): out(x, y) = src(x - dx, y - dy); uncovered
/// pixels repeat the nearest edge.
inline Image translate(const Image& src, int dx, int dy) {
  Image out(src.rows(), src.cols());
  for (int y = 0; y < src.rows(); ++y)
    for (int x = 0; x < src.cols(); ++x) {
      const int sx = std::clamp(x - dx, 0, static_cast<int>(src.cols()) - 1);
      const int sy = std::clamp(y - dy, 0, static_cast<int>(src.rows()) - 1);
      out(y, x) = src(sy, sx);
    }
  return out;
}

}  // namespace oracle
