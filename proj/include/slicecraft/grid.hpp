#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "slicecraft/errors.hpp"

namespace slicecraft {

/// Frame geometry quantized to CTU units. Boundary CTUs may be partial in
/// pixels but occupy one grid cell.
struct CtuGrid {
  int frame_width = 0;   // pixels
  int frame_height = 0;  // pixels
  int ctu_size = 128;    // pixels, one of {32, 64, 128}
  int cols = 0;          // ceil(frame_width / ctu_size)
  int rows = 0;          // ceil(frame_height / ctu_size)

  static CtuGrid make(int frame_width, int frame_height, int ctu_size = 128);

  int cell_count() const { return cols * rows; }

  /// Width in pixels of the CTU in grid column x (partial at the border).
  int cell_width(int x) const;
  /// Height in pixels of the CTU in grid row y.
  int cell_height(int y) const;
  /// Pixel count of cell (x, y).
  std::int64_t cell_pixels(int x, int y) const {
    return static_cast<std::int64_t>(cell_width(x)) * cell_height(y);
  }

  bool operator==(const CtuGrid&) const = default;
};

/// Tile grid as column widths and row heights, in CTU counts.
struct TileGrid {
  std::vector<int> col_widths;
  std::vector<int> row_heights;

  bool operator==(const TileGrid&) const = default;
};

/// Rectangular slice in CTU coordinates; the unit assigned to one thread.
struct RectSlice {
  int x0 = 0;
  int y0 = 0;
  int w = 0;
  int h = 0;
  int id = 0;

  std::int64_t area() const { return static_cast<std::int64_t>(w) * h; }
  bool contains(int x, int y) const {
    return x >= x0 && x < x0 + w && y >= y0 && y < y0 + h;
  }

  bool operator==(const RectSlice&) const = default;
};

enum class PartitionOrigin { Uniform, Proposed, Custom };

std::string to_string(PartitionOrigin origin);
PartitionOrigin partition_origin_from_string(const std::string& s);

/// A validated set of rectangular slices over a tile grid, covering the CTU
/// grid exactly. Construct through validate_partition or uniform_partition;
/// instances are immutable by convention and safe to share across threads.
struct Partition {
  CtuGrid grid;
  TileGrid tiles;
  std::vector<RectSlice> slices;
  PartitionOrigin origin = PartitionOrigin::Custom;

  int slice_count() const { return static_cast<int>(slices.size()); }

  bool operator==(const Partition&) const = default;
};

/// Checks that `slices` is an exact disjoint cover of the grid and that each
/// slice is either a contiguous rectangle of complete tiles or a run of
/// consecutive complete CTU rows spanning the full width of a single tile.
/// Slice ids must be a permutation of 0..n-1.
///
/// Throws GeometryError, OverlapError, CoverageError or StructureError.
Partition validate_partition(const CtuGrid& grid, TileGrid tiles,
                             std::vector<RectSlice> slices,
                             PartitionOrigin origin = PartitionOrigin::Custom);

/// Grid-shaped partition with n slices of near-equal area. Picks the r x c
/// factorization of n minimizing the largest slice area, ties broken toward
/// more columns; remainder strips go to the first columns/rows. When no
/// factorization fits the grid, falls back to a column layout with balanced
/// slice counts per column so that any n <= cols*rows is served.
Partition uniform_partition(const CtuGrid& grid, int n_slices);

/// A_max(P) / A_min(P) in CTU cells.
double area_ratio(const Partition& p);

/// One character per CTU cell, slice ids rendered as symbols.
std::string render_ascii(const Partition& p);

/// Splits `total` into `parts` near-equal positive integers, larger parts
/// first. Requires 1 <= parts <= total.
std::vector<int> split_even(int total, int parts);

}  // namespace slicecraft
