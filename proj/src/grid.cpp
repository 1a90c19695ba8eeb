#include "slicecraft/grid.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace slicecraft {

CtuGrid CtuGrid::make(int frame_width, int frame_height, int ctu_size) {
  if (ctu_size != 32 && ctu_size != 64 && ctu_size != 128) {
    throw GeometryError("ctu_size must be one of {32, 64, 128}, got " +
                        std::to_string(ctu_size));
  }
  if (frame_width < 1 || frame_height < 1) {
    throw GeometryError("frame dimensions must be positive");
  }
  CtuGrid g;
  g.frame_width = frame_width;
  g.frame_height = frame_height;
  g.ctu_size = ctu_size;
  g.cols = (frame_width + ctu_size - 1) / ctu_size;
  g.rows = (frame_height + ctu_size - 1) / ctu_size;
  return g;
}

int CtuGrid::cell_width(int x) const {
  return std::min(ctu_size, frame_width - x * ctu_size);
}

int CtuGrid::cell_height(int y) const {
  return std::min(ctu_size, frame_height - y * ctu_size);
}

std::string to_string(PartitionOrigin origin) {
  switch (origin) {
    case PartitionOrigin::Uniform:
      return "Uniform";
    case PartitionOrigin::Proposed:
      return "Proposed";
    case PartitionOrigin::Custom:
      return "Custom";
  }
  return "Custom";
}

PartitionOrigin partition_origin_from_string(const std::string& s) {
  if (s == "Uniform") return PartitionOrigin::Uniform;
  if (s == "Proposed") return PartitionOrigin::Proposed;
  if (s == "Custom") return PartitionOrigin::Custom;
  throw FormatError("unknown partition origin: " + s);
}

std::vector<int> split_even(int total, int parts) {
  std::vector<int> out(static_cast<std::size_t>(parts));
  const int base = total / parts;
  const int rem = total % parts;
  for (int i = 0; i < parts; ++i) {
    out[static_cast<std::size_t>(i)] = base + (i < rem ? 1 : 0);
  }
  return out;
}

namespace {

// Cumulative boundaries of a composition: {0, w0, w0+w1, ...}.
std::vector<int> boundaries(const std::vector<int>& parts) {
  std::vector<int> b;
  b.reserve(parts.size() + 1);
  b.push_back(0);
  for (int p : parts) b.push_back(b.back() + p);
  return b;
}

bool is_boundary(const std::vector<int>& b, int v) {
  return std::binary_search(b.begin(), b.end(), v);
}

// Index i such that b[i] <= v < b[i+1].
int interval_of(const std::vector<int>& b, int v) {
  auto it = std::upper_bound(b.begin(), b.end(), v);
  return static_cast<int>(it - b.begin()) - 1;
}

}  // namespace

Partition validate_partition(const CtuGrid& grid, TileGrid tiles,
                             std::vector<RectSlice> slices,
                             PartitionOrigin origin) {
  if (tiles.col_widths.empty() || tiles.row_heights.empty()) {
    throw GeometryError("tile grid must have at least one column and row");
  }
  for (int w : tiles.col_widths) {
    if (w < 1) throw GeometryError("tile column width must be >= 1");
  }
  for (int h : tiles.row_heights) {
    if (h < 1) throw GeometryError("tile row height must be >= 1");
  }
  const int col_sum =
      std::accumulate(tiles.col_widths.begin(), tiles.col_widths.end(), 0);
  const int row_sum =
      std::accumulate(tiles.row_heights.begin(), tiles.row_heights.end(), 0);
  if (col_sum != grid.cols || row_sum != grid.rows) {
    std::ostringstream os;
    os << "tile sums (" << col_sum << "x" << row_sum << ") do not match grid ("
       << grid.cols << "x" << grid.rows << ")";
    throw GeometryError(os.str());
  }
  if (slices.empty()) throw CoverageError("partition has no slices");

  // Bounds and id permutation.
  std::vector<char> id_seen(slices.size(), 0);
  for (const RectSlice& s : slices) {
    if (s.w < 1 || s.h < 1 || s.x0 < 0 || s.y0 < 0 || s.x0 + s.w > grid.cols ||
        s.y0 + s.h > grid.rows) {
      std::ostringstream os;
      os << "slice " << s.id << " (" << s.x0 << "," << s.y0 << " " << s.w
         << "x" << s.h << ") outside the " << grid.cols << "x" << grid.rows
         << " grid";
      throw GeometryError(os.str());
    }
    if (s.id < 0 || s.id >= static_cast<int>(slices.size()) ||
        id_seen[static_cast<std::size_t>(s.id)]) {
      throw GeometryError("slice ids must be a permutation of 0..n-1");
    }
    id_seen[static_cast<std::size_t>(s.id)] = 1;
  }

  // Exact disjoint cover.
  std::vector<int> owner(static_cast<std::size_t>(grid.cell_count()), -1);
  for (const RectSlice& s : slices) {
    for (int y = s.y0; y < s.y0 + s.h; ++y) {
      for (int x = s.x0; x < s.x0 + s.w; ++x) {
        int& cell = owner[static_cast<std::size_t>(y * grid.cols + x)];
        if (cell >= 0) {
          std::ostringstream os;
          os << "slices " << cell << " and " << s.id << " both cover cell ("
             << x << "," << y << ")";
          throw OverlapError(os.str());
        }
        cell = s.id;
      }
    }
  }
  for (int y = 0; y < grid.rows; ++y) {
    for (int x = 0; x < grid.cols; ++x) {
      if (owner[static_cast<std::size_t>(y * grid.cols + x)] < 0) {
        std::ostringstream os;
        os << "cell (" << x << "," << y << ") is not covered by any slice";
        throw CoverageError(os.str());
      }
    }
  }

  // Structural legality. Either all four slice edges lie on tile boundaries
  // (a contiguous rectangle of complete tiles), or the slice spans the full
  // width of one tile and its rows stay inside that tile.
  const std::vector<int> bx = boundaries(tiles.col_widths);
  const std::vector<int> by = boundaries(tiles.row_heights);
  for (const RectSlice& s : slices) {
    const bool tile_union = is_boundary(bx, s.x0) && is_boundary(bx, s.x0 + s.w) &&
                            is_boundary(by, s.y0) && is_boundary(by, s.y0 + s.h);
    if (tile_union) continue;
    const int tc = interval_of(bx, s.x0);
    const int tr = interval_of(by, s.y0);
    const bool row_run = s.x0 == bx[static_cast<std::size_t>(tc)] &&
                         s.x0 + s.w == bx[static_cast<std::size_t>(tc) + 1] &&
                         s.y0 >= by[static_cast<std::size_t>(tr)] &&
                         s.y0 + s.h <= by[static_cast<std::size_t>(tr) + 1];
    if (!row_run) {
      std::ostringstream os;
      os << "slice " << s.id
         << " is neither a rectangle of complete tiles nor a CTU-row run "
            "inside a single tile";
      throw StructureError(os.str());
    }
  }

  Partition p;
  p.grid = grid;
  p.tiles = std::move(tiles);
  p.slices = std::move(slices);
  p.origin = origin;
  return p;
}

Partition uniform_partition(const CtuGrid& grid, int n_slices) {
  if (n_slices < 1) throw GeometryError("slice count must be >= 1");
  if (n_slices > grid.cell_count()) {
    throw GeometryError("slice count " + std::to_string(n_slices) +
                        " exceeds CTU cell count " +
                        std::to_string(grid.cell_count()));
  }

  // Best r x c factorization of n by max slice area; ties toward more columns.
  int best_c = -1;
  int best_r = -1;
  std::int64_t best_area = -1;
  for (int c = 1; c <= std::min(n_slices, grid.cols); ++c) {
    if (n_slices % c != 0) continue;
    const int r = n_slices / c;
    if (r > grid.rows) continue;
    const std::int64_t max_area =
        static_cast<std::int64_t>((grid.cols + c - 1) / c) *
        ((grid.rows + r - 1) / r);
    if (best_area < 0 || max_area < best_area ||
        (max_area == best_area && c > best_c)) {
      best_area = max_area;
      best_c = c;
      best_r = r;
    }
  }

  Partition p;
  p.grid = grid;
  p.origin = PartitionOrigin::Uniform;
  if (best_c > 0) {
    p.tiles.col_widths = split_even(grid.cols, best_c);
    p.tiles.row_heights = split_even(grid.rows, best_r);
    const std::vector<int> bx = boundaries(p.tiles.col_widths);
    const std::vector<int> by = boundaries(p.tiles.row_heights);
    int id = 0;
    for (int r = 0; r < best_r; ++r) {
      for (int c = 0; c < best_c; ++c) {
        RectSlice s;
        s.x0 = bx[static_cast<std::size_t>(c)];
        s.y0 = by[static_cast<std::size_t>(r)];
        s.w = p.tiles.col_widths[static_cast<std::size_t>(c)];
        s.h = p.tiles.row_heights[static_cast<std::size_t>(r)];
        s.id = id++;
        p.slices.push_back(s);
      }
    }
    return p;
  }

  // No factorization fits (e.g. prime n larger than both dimensions): fall
  // back to a column layout, each column cut into near-equal CTU-row runs.
  const int c = std::min(n_slices, grid.cols);
  p.tiles.col_widths = split_even(grid.cols, c);
  p.tiles.row_heights = {grid.rows};
  const std::vector<int> counts = split_even(n_slices, c);
  int x = 0;
  int id = 0;
  for (int col = 0; col < c; ++col) {
    const int width = p.tiles.col_widths[static_cast<std::size_t>(col)];
    const std::vector<int> heights =
        split_even(grid.rows, counts[static_cast<std::size_t>(col)]);
    int y = 0;
    for (int height : heights) {
      RectSlice s;
      s.x0 = x;
      s.y0 = y;
      s.w = width;
      s.h = height;
      s.id = id++;
      p.slices.push_back(s);
      y += height;
    }
    x += width;
  }
  return p;
}

double area_ratio(const Partition& p) {
  std::int64_t amin = p.slices.front().area();
  std::int64_t amax = amin;
  for (const RectSlice& s : p.slices) {
    amin = std::min(amin, s.area());
    amax = std::max(amax, s.area());
  }
  return static_cast<double>(amax) / static_cast<double>(amin);
}

std::string render_ascii(const Partition& p) {
  static const char symbols[] =
      "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz";
  std::string out;
  out.reserve(static_cast<std::size_t>((p.grid.cols + 1) * p.grid.rows));
  std::vector<char> row(static_cast<std::size_t>(p.grid.cols), '?');
  for (int y = 0; y < p.grid.rows; ++y) {
    std::fill(row.begin(), row.end(), '?');
    for (const RectSlice& s : p.slices) {
      if (y < s.y0 || y >= s.y0 + s.h) continue;
      const char sym = s.id < 62 ? symbols[s.id] : '#';
      for (int x = s.x0; x < s.x0 + s.w; ++x) {
        row[static_cast<std::size_t>(x)] = sym;
      }
    }
    out.append(row.begin(), row.end());
    out.push_back('\n');
  }
  return out;
}

}  // namespace slicecraft
