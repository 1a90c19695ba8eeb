#include "slicecraft/cost.hpp"

#include <bit>
#include <cmath>

namespace slicecraft {

std::string to_string(CostSource source) {
  switch (source) {
    case CostSource::Measured:
      return "Measured";
    case CostSource::CoTemporalLayer:
      return "CoTemporalLayer";
    case CostSource::MostRecentAny:
      return "MostRecentAny";
    case CostSource::Uniform:
      return "Uniform";
  }
  return "Measured";
}

double CostMap::total_us() const {
  double t = 0.0;
  for (double v : times_us) t += v;
  return t;
}

int temporal_layer_of_poc(int poc, int gop_size) {
  if (gop_size < 1 || !std::has_single_bit(static_cast<unsigned>(gop_size))) {
    throw ConfigError("gop size must be a power of two, got " +
                      std::to_string(gop_size));
  }
  if (poc < 0) throw ConfigError("poc must be >= 0");
  const unsigned rem = static_cast<unsigned>(poc) % static_cast<unsigned>(gop_size);
  if (rem == 0) return 0;
  return std::countr_zero(static_cast<unsigned>(gop_size)) -
         std::countr_zero(rem);
}

CostHistory::CostHistory(CtuGrid grid, int gop_size) : grid_(grid), gop_(gop_size) {
  // Validates the gop eagerly.
  temporal_layer_of_poc(0, gop_size);
}

void CostHistory::append(CostMap map) {
  if (map.grid != grid_) {
    throw GeometryError("cost map grid does not match the history grid");
  }
  if (map.times_us.size() != static_cast<std::size_t>(grid_.cell_count())) {
    throw GeometryError("cost map has wrong number of entries");
  }
  for (double v : map.times_us) {
    if (!std::isfinite(v) || v < 0.0) {
      throw FormatError("CTU times must be finite and >= 0");
    }
  }
  for (const CostMap& m : maps_) {
    if (m.poc == map.poc) {
      throw TraceError("duplicate poc " + std::to_string(map.poc) +
                       " in cost history");
    }
  }
  maps_.push_back(std::move(map));
}

CostMap estimate_ctu_times(const CostHistory& history, int poc) {
  const int tl = temporal_layer_of_poc(poc, history.gop_size());
  const auto& maps = history.maps();
  for (auto it = maps.rbegin(); it != maps.rend(); ++it) {
    if (it->temporal_layer == tl) {
      CostMap est = *it;
      est.poc = poc;
      est.temporal_layer = tl;
      est.source = CostSource::CoTemporalLayer;
      est.source_poc = it->poc;
      return est;
    }
  }
  if (!maps.empty()) {
    CostMap est = maps.back();
    est.poc = poc;
    est.temporal_layer = tl;
    est.source = CostSource::MostRecentAny;
    est.source_poc = maps.back().poc;
    return est;
  }
  CostMap est;
  est.grid = history.grid();
  est.times_us.assign(static_cast<std::size_t>(history.grid().cell_count()), 1.0);
  est.poc = poc;
  est.temporal_layer = tl;
  est.source = CostSource::Uniform;
  est.source_poc = -1;
  return est;
}

PrefixSumTable::PrefixSumTable(const std::vector<double>& values, int cols,
                               int rows)
    : cols_(cols), rows_(rows) {
  if (values.size() != static_cast<std::size_t>(cols) * rows) {
    throw GeometryError("value count does not match table dimensions");
  }
  const std::size_t stride = static_cast<std::size_t>(cols_) + 1;
  table_.assign(stride * (static_cast<std::size_t>(rows_) + 1), 0.0);
  for (int y = 0; y < rows_; ++y) {
    for (int x = 0; x < cols_; ++x) {
      const std::size_t i = static_cast<std::size_t>(y + 1) * stride + (x + 1);
      table_[i] = values[static_cast<std::size_t>(y) * cols_ + x] +
                  table_[i - 1] + table_[i - stride] - table_[i - stride - 1];
    }
  }
}

PrefixSumTable::PrefixSumTable(const CostMap& costs)
    : PrefixSumTable(costs.times_us, costs.grid.cols, costs.grid.rows) {}

SliceTimeTable partition_time(const PrefixSumTable& table, const Partition& p) {
  if (table.cols() != p.grid.cols || table.rows() != p.grid.rows) {
    throw GeometryError("prefix table does not match the partition grid");
  }
  SliceTimeTable out;
  out.slice_times_us.resize(p.slices.size(), 0.0);
  for (const RectSlice& s : p.slices) {
    out.slice_times_us[static_cast<std::size_t>(s.id)] =
        table.rect_sum(s.x0, s.y0, s.w, s.h);
  }
  out.argmax = 0;
  out.max_us = out.slice_times_us.front();
  out.total_us = 0.0;
  for (std::size_t j = 0; j < out.slice_times_us.size(); ++j) {
    out.total_us += out.slice_times_us[j];
    if (out.slice_times_us[j] > out.max_us) {
      out.max_us = out.slice_times_us[j];
      out.argmax = j;
    }
  }
  return out;
}

SliceTimeTable partition_time(const CostMap& costs, const Partition& p) {
  if (costs.grid != p.grid) {
    throw GeometryError("cost map grid does not match the partition grid");
  }
  return partition_time(PrefixSumTable(costs), p);
}

}  // namespace slicecraft
