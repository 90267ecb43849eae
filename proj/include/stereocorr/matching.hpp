#pragma once

#include "stereocorr/disparity_map.hpp"
#include "stereocorr/ncc.hpp"
#include "stereocorr/sad.hpp"

#include <algorithm>
#include <exception>
#include <optional>
#include <thread>
#include <vector>

namespace stereocorr {

enum class NccVariant { full, diagonal };

struct MatchOptions {
  int threads = 1;
  Diagonal diagonal = Diagonal::main;
  bool use_sum_tables = true;
  OpCounts* counts = nullptr;  // receives the summed per-block counts when set
};

namespace detail {

// Runs score_block(i, counts) for every block, splitting contiguous ranges
// across threads. Results land in per-block slots, so the outcome does not
// depend on the schedule.
template <typename ScoreBlock>
void for_each_block(std::size_t blocks, const MatchOptions& options, ScoreBlock&& score_block) {
  const std::size_t workers = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(options.threads, 1)), 1,
                                                      std::max<std::size_t>(blocks, 1));
  std::vector<OpCounts> partial(workers);
  std::vector<std::exception_ptr> errors(workers);
  auto run = [&](std::size_t w) {
    const std::size_t begin = blocks * w / workers;
    const std::size_t end = blocks * (w + 1) / workers;
    try {
      for (std::size_t i = begin; i < end; ++i) score_block(i, partial[w]);
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  if (options.counts)
    for (const auto& c : partial) *options.counts += c;
}

template <typename Scalar>
void record(DisparityCell& cell, const ScoreSurface<Scalar>& surface, Extremum mode) {
  if (!surface.any_valid()) {
    cell = {};
    return;
  }
  const BestShift best = best_shift(surface, mode);
  cell = {best.u, best.v, best.score, true};
}

inline std::optional<BlockNoise> block_noise(const std::optional<NoiseSpec>& noise, std::size_t block_id) {
  if (!noise) return std::nullopt;
  return BlockNoise{*noise, static_cast<std::uint64_t>(block_id)};
}

}  // namespace detail

/// Per block: best (maximal) NCC shift over the window. Blocks whose template
/// or every candidate region is degenerate stay invalid.
template <typename Scalar>
DisparityMap match_ncc(const GrayImage<Scalar>& template_image, const GrayImage<Scalar>& reference,
                       const BlockGrid& grid, const SearchWindow& window, NccVariant variant, int ma_window,
                       const std::optional<NoiseSpec>& noise = std::nullopt, const MatchOptions& options = {}) {
  window.validate();
  if (variant == NccVariant::diagonal && (ma_window < 1 || ma_window > grid.block))
    throw std::invalid_argument("moving-average window must lie in [1, block]");
  DisparityMap map = DisparityMap::for_grid(grid);
  std::optional<SumTables<Scalar>> tables;
  if (variant == NccVariant::full && options.use_sum_tables) tables.emplace(reference);

  detail::for_each_block(grid.size(), options, [&](std::size_t i, OpCounts& counts) {
    const Offset origin = grid.origins[i];
    const auto block_noise = detail::block_noise(noise, i);
    if (variant == NccVariant::full) {
      const GrayImage<Scalar> block = extract_block(template_image, origin, grid.block);
      detail::record(map.cells[i],
                     ncc_full(block, reference, origin, window, tables ? &*tables : nullptr, block_noise, &counts),
                     Extremum::maximize);
    } else {
      const Signal<Scalar> diag = extract_diagonal(template_image, origin, grid.block, options.diagonal);
      detail::record(map.cells[i],
                     ncc_diagonal(diag, reference, origin, window, ma_window, options.diagonal, block_noise, &counts),
                     Extremum::maximize);
    }
  });
  return map;
}

/// Per block: minimal-SAD shift, recorded at the block's lattice cell.
template <typename Scalar>
DisparityMap match_sad(const GrayImage<Scalar>& template_image, const GrayImage<Scalar>& reference,
                       const BlockGrid& grid, const SearchWindow& window,
                       const std::optional<NoiseSpec>& noise = std::nullopt, const MatchOptions& options = {}) {
  window.validate();
  DisparityMap map = DisparityMap::for_grid(grid);
  detail::for_each_block(grid.size(), options, [&](std::size_t i, OpCounts& counts) {
    const Offset origin = grid.origins[i];
    const GrayImage<Scalar> block = extract_block(template_image, origin, grid.block);
    detail::record(map.cells[i], sad_search(block, reference, origin, window, detail::block_noise(noise, i), &counts),
                   Extremum::minimize);
  });
  return map;
}

}  // namespace stereocorr
