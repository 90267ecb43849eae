#pragma once

#include "stereocorr/image.hpp"

#include <cstdint>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>
#include <tuple>

namespace stereocorr {

/// Inclusive shift bounds; u is horizontal, v vertical.
struct SearchWindow {
  int u_min = 0;
  int u_max = 0;
  int v_min = 0;
  int v_max = 0;

  static SearchWindow symmetric(int max_u, int max_v) { return {-max_u, max_u, -max_v, max_v}; }

  int width() const { return u_max - u_min + 1; }
  int height() const { return v_max - v_min + 1; }
  std::size_t count() const { return static_cast<std::size_t>(width()) * static_cast<std::size_t>(height()); }
  bool contains(int u, int v) const { return u >= u_min && u <= u_max && v >= v_min && v <= v_max; }

  /// Row-major index of (u, v) within the window; keys noise per shift.
  std::uint64_t shift_id(int u, int v) const {
    return static_cast<std::uint64_t>(v - v_min) * static_cast<std::uint64_t>(width()) +
           static_cast<std::uint64_t>(u - u_min);
  }

  void validate() const {
    if (u_min > u_max || v_min > v_max)
      throw std::invalid_argument("search window bounds are inverted: u [" + std::to_string(u_min) + ", " +
                                  std::to_string(u_max) + "], v [" + std::to_string(v_min) + ", " +
                                  std::to_string(v_max) + "]");
  }

  friend bool operator==(const SearchWindow&, const SearchWindow&) = default;
};

/// Similarity per shift. scores(v - v_min, u - u_min); invalid entries carry no meaning.
template <typename Scalar>
struct ScoreSurface {
  SearchWindow window;
  GrayImage<Scalar> scores;
  Mask valid;

  explicit ScoreSurface(const SearchWindow& w)
      : window(w), scores(GrayImage<Scalar>::Zero(w.height(), w.width())), valid(Mask::Constant(w.height(), w.width(), false)) {}

  Scalar at(int u, int v) const { return scores(v - window.v_min, u - window.u_min); }
  bool is_valid(int u, int v) const { return valid(v - window.v_min, u - window.u_min); }
  void set(int u, int v, Scalar s) {
    scores(v - window.v_min, u - window.u_min) = s;
    valid(v - window.v_min, u - window.u_min) = true;
  }
  bool any_valid() const { return valid.any(); }
};

enum class Extremum { maximize, minimize };

struct BestShift {
  int u = 0;
  int v = 0;
  double score = 0.0;
};

class NoValidShift : public std::runtime_error {
 public:
  NoValidShift() : std::runtime_error("score surface has no valid shift") {}
};

/// Extremal valid score. Exact ties go to the smallest |u| + |v|, then the
/// smallest (v, u) lexicographically.
template <typename Scalar>
BestShift best_shift(const ScoreSurface<Scalar>& surface, Extremum mode) {
  const SearchWindow& w = surface.window;
  bool found = false;
  BestShift best;
  auto rank = [](int u, int v) { return std::make_tuple(std::abs(u) + std::abs(v), v, u); };
  for (int v = w.v_min; v <= w.v_max; ++v) {
    for (int u = w.u_min; u <= w.u_max; ++u) {
      if (!surface.is_valid(u, v)) continue;
      const double s = static_cast<double>(surface.at(u, v));
      const bool better = mode == Extremum::maximize ? s > best.score : s < best.score;
      if (!found || better || (s == best.score && rank(u, v) < rank(best.u, best.v))) {
        best = {u, v, s};
        found = true;
      }
    }
  }
  if (!found) throw NoValidShift();
  return best;
}

}  // namespace stereocorr
