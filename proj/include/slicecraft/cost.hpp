#pragma once

#include <cstdint>
#include <vector>

#include "slicecraft/grid.hpp"

namespace slicecraft {

/// How a cost map was obtained.
enum class CostSource {
  Measured,         // true times from a trace
  CoTemporalLayer,  // copy of the most recent frame at the same temporal layer
  MostRecentAny,    // fallback: most recent frame of any layer
  Uniform,          // fallback: all-ones map (empty history)
};

std::string to_string(CostSource source);

/// Per-CTU encoding times for one frame, in microseconds.
struct CostMap {
  CtuGrid grid;
  std::vector<double> times_us;  // row-major, cols*rows entries, finite, >= 0
  int poc = 0;
  int temporal_layer = 0;
  int qp = 0;
  CostSource source = CostSource::Measured;
  int source_poc = -1;  // poc the estimate was copied from, -1 if none

  double at(int x, int y) const {
    return times_us[static_cast<std::size_t>(y) * grid.cols + x];
  }
  double total_us() const;
};

/// Hierarchical-B temporal layer of a frame: 0 at GOP anchors, else
/// log2(gop) - trailing_zeros(poc mod gop). gop_size must be a power of two
/// (ConfigError otherwise).
int temporal_layer_of_poc(int poc, int gop_size);

/// Cost maps of already-encoded frames, in encode order. Append-only with a
/// single owner; snapshots handed out are immutable.
class CostHistory {
 public:
  CostHistory(CtuGrid grid, int gop_size);

  void append(CostMap map);

  const CtuGrid& grid() const { return grid_; }
  int gop_size() const { return gop_; }
  const std::vector<CostMap>& maps() const { return maps_; }
  bool empty() const { return maps_.empty(); }

 private:
  CtuGrid grid_;
  int gop_ = 16;
  std::vector<CostMap> maps_;
};

/// Estimated per-CTU times for frame `poc`: the times of the most recently
/// encoded frame with the same temporal layer, falling back to the most
/// recent frame of any layer, then to an all-ones map. Total by construction;
/// the result is tagged with its source.
CostMap estimate_ctu_times(const CostHistory& history, int poc);

/// Summed-area table over a cost map; rectangle sums in constant time.
class PrefixSumTable {
 public:
  PrefixSumTable(const std::vector<double>& values, int cols, int rows);
  explicit PrefixSumTable(const CostMap& costs);

  int cols() const { return cols_; }
  int rows() const { return rows_; }

  double rect_sum(int x0, int y0, int w, int h) const {
    const std::size_t stride = static_cast<std::size_t>(cols_) + 1;
    return table_[static_cast<std::size_t>(y0 + h) * stride + (x0 + w)] -
           table_[static_cast<std::size_t>(y0) * stride + (x0 + w)] -
           table_[static_cast<std::size_t>(y0 + h) * stride + x0] +
           table_[static_cast<std::size_t>(y0) * stride + x0];
  }

  double total() const { return rect_sum(0, 0, cols_, rows_); }

 private:
  int cols_ = 0;
  int rows_ = 0;
  std::vector<double> table_;
};

/// Per-slice encoding times under a partition; `max_us` is the frame time,
/// i.e. the time of the slowest slice.
struct SliceTimeTable {
  std::vector<double> slice_times_us;  // indexed by slice id
  std::size_t argmax = 0;
  double max_us = 0.0;
  double total_us = 0.0;
};

/// T(s_j) = sum of CTU times in slice j, T(P) = max over slices. Evaluated
/// through a summed-area table. Throws GeometryError on grid mismatch.
SliceTimeTable partition_time(const CostMap& costs, const Partition& p);

/// Same, against a prebuilt table shared across candidate evaluations.
SliceTimeTable partition_time(const PrefixSumTable& table, const Partition& p);

}  // namespace slicecraft
