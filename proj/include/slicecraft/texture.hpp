#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "slicecraft/grid.hpp"

namespace slicecraft {

/// Luma plane of one raw video frame. 10-bit samples are stored one per
/// uint16; chroma is never loaded.
struct LumaPlane {
  int width = 0;
  int height = 0;
  int bit_depth = 8;
  std::vector<std::uint16_t> samples;  // row-major, width*height

  std::uint16_t at(int x, int y) const {
    return samples[static_cast<std::size_t>(y) * width + x];
  }
};

/// Number of whole frames in a raw planar 4:2:0 file.
/// Throws IoError or FormatError (size not a multiple of the frame size).
int yuv_frame_count(const std::filesystem::path& path, int frame_w, int frame_h,
                    int bit_depth);

/// Reads the luma plane of frame `poc` from a raw planar 4:2:0 file,
/// 8-bit or 10-bit little-endian. Throws IoError, RangeError, FormatError.
LumaPlane load_yuv_frame(const std::filesystem::path& path, int frame_w,
                         int frame_h, int poc, int bit_depth);

/// Per-CTU sufficient statistics: sample count, sum and sum of squares.
struct CtuRecord {
  std::uint64_t count = 0;
  std::uint64_t sum = 0;
  std::uint64_t sumsq = 0;

  bool operator==(const CtuRecord&) const = default;
};

/// Exact per-slice pixel moments aggregated from CTU records.
struct SliceMoments {
  std::uint64_t count = 0;
  std::uint64_t sum = 0;
  std::uint64_t sumsq = 0;

  /// Within-slice sum of squared deviations from the slice pixel mean,
  /// (count*sumsq - sum^2) / count evaluated in 128-bit integers.
  double sse() const;
};

/// Immutable per-CTU luminance statistics for one frame, with prefix tables
/// for O(1) rectangle aggregation. Safe for concurrent reads.
class TextureStats {
 public:
  /// Builds records plus prefix tables; `records` must have cols*rows entries
  /// whose counts match the grid cell pixel counts and satisfy
  /// count*sumsq >= sum^2. Throws GeometryError / FormatError.
  TextureStats(CtuGrid grid, std::vector<CtuRecord> records, int poc);

  const CtuGrid& grid() const { return grid_; }
  int poc() const { return poc_; }
  const std::vector<CtuRecord>& records() const { return records_; }
  const CtuRecord& record(int x, int y) const {
    return records_[static_cast<std::size_t>(y) * grid_.cols + x];
  }

  /// Aggregated moments over the CTU rectangle [x0, x0+w) x [y0, y0+h).
  SliceMoments rect_moments(int x0, int y0, int w, int h) const;

 private:
  CtuGrid grid_;
  int poc_ = 0;
  std::vector<CtuRecord> records_;
  // (cols+1) x (rows+1) inclusion-exclusion tables.
  std::vector<std::uint64_t> pre_count_, pre_sum_, pre_sumsq_;
};

/// Accumulates per-CTU statistics from a luma plane with exact integer
/// arithmetic. Plane dimensions must match the grid (GeometryError).
TextureStats ctu_stats(const LumaPlane& luma, const CtuGrid& grid, int poc = 0);

/// Eq-style clustering objective: sum over slices of the within-slice pixel
/// SSE, computed exactly from CTU aggregates. Throws GeometryError when the
/// stats and partition grids differ.
double partition_sse(const TextureStats& stats, const Partition& p);

/// Per-slice exact moments, in slice id order.
std::vector<SliceMoments> slice_moments(const TextureStats& stats,
                                        const Partition& p);

}  // namespace slicecraft
