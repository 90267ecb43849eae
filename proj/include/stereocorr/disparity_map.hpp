#pragma once

#include "stereocorr/grid.hpp"
#include "stereocorr/image.hpp"

#include <vector>

namespace stereocorr {

struct DisparityCell {
  int dx = 0;
  int dy = 0;
  double score = 0.0;
  bool valid = false;

  friend bool operator==(const DisparityCell&, const DisparityCell&) = default;
};

/// One displacement per lattice cell. Cell (cx, cy) belongs to the block whose
/// top-left corner is origin_offset + pitch * (cx, cy).
struct DisparityMap {
  int lattice_width = 0;
  int lattice_height = 0;
  int pitch = 1;
  int block = 1;
  Offset origin_offset;
  std::vector<DisparityCell> cells;

  static DisparityMap for_grid(const BlockGrid& grid) {
    DisparityMap map;
    map.lattice_width = grid.columns;
    map.lattice_height = grid.rows;
    map.pitch = grid.stride;
    map.block = grid.block;
    map.origin_offset = {grid.margin, grid.margin};
    map.cells.resize(grid.size());
    return map;
  }

  DisparityCell& at(int cx, int cy) { return cells[static_cast<std::size_t>(cy) * lattice_width + cx]; }
  const DisparityCell& at(int cx, int cy) const { return cells[static_cast<std::size_t>(cy) * lattice_width + cx]; }
  Offset cell_origin(int cx, int cy) const {
    return {origin_offset.x + cx * pitch, origin_offset.y + cy * pitch};
  }
  bool per_pixel() const { return pitch == 1; }
  std::size_t valid_count() const {
    std::size_t n = 0;
    for (const auto& c : cells) n += c.valid ? 1 : 0;
    return n;
  }

  friend bool operator==(const DisparityMap&, const DisparityMap&) = default;
};

}  // namespace stereocorr
