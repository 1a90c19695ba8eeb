#include "slicecraft/texture.hpp"

#include <fstream>

namespace slicecraft {

namespace {

int bytes_per_sample(int bit_depth) {
  if (bit_depth == 8) return 1;
  if (bit_depth == 10) return 2;
  throw FormatError("bit depth must be 8 or 10, got " +
                    std::to_string(bit_depth));
}

std::uintmax_t frame_bytes(int w, int h, int bit_depth) {
  const std::uintmax_t luma = static_cast<std::uintmax_t>(w) * h;
  const std::uintmax_t chroma =
      2u * (static_cast<std::uintmax_t>((w + 1) / 2) * ((h + 1) / 2));
  return (luma + chroma) * static_cast<std::uintmax_t>(bytes_per_sample(bit_depth));
}

}  // namespace

int yuv_frame_count(const std::filesystem::path& path, int frame_w, int frame_h,
                    int bit_depth) {
  if (frame_w < 1 || frame_h < 1) {
    throw FormatError("frame dimensions must be positive");
  }
  std::error_code ec;
  const std::uintmax_t size = std::filesystem::file_size(path, ec);
  if (ec) throw IoError("cannot stat " + path.string() + ": " + ec.message());
  const std::uintmax_t fb = frame_bytes(frame_w, frame_h, bit_depth);
  if (size % fb != 0) {
    throw FormatError(path.string() + ": file size " + std::to_string(size) +
                      " is not a multiple of the frame size " +
                      std::to_string(fb));
  }
  return static_cast<int>(size / fb);
}

LumaPlane load_yuv_frame(const std::filesystem::path& path, int frame_w,
                         int frame_h, int poc, int bit_depth) {
  const int frames = yuv_frame_count(path, frame_w, frame_h, bit_depth);
  if (poc < 0 || poc >= frames) {
    throw RangeError(path.string() + ": frame " + std::to_string(poc) +
                     " out of range, file holds " + std::to_string(frames));
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());

  const int bps = bytes_per_sample(bit_depth);
  const std::uintmax_t offset =
      static_cast<std::uintmax_t>(poc) * frame_bytes(frame_w, frame_h, bit_depth);
  in.seekg(static_cast<std::streamoff>(offset));

  LumaPlane plane;
  plane.width = frame_w;
  plane.height = frame_h;
  plane.bit_depth = bit_depth;
  const std::size_t n = static_cast<std::size_t>(frame_w) * frame_h;
  plane.samples.resize(n);
  if (bps == 2) {
    // Little-endian 16-bit containers holding 10-bit values.
    std::vector<unsigned char> raw(n * 2);
    in.read(reinterpret_cast<char*>(raw.data()),
            static_cast<std::streamsize>(raw.size()));
    if (!in) throw IoError("short read on " + path.string());
    for (std::size_t i = 0; i < n; ++i) {
      plane.samples[i] = static_cast<std::uint16_t>(
          raw[2 * i] | (static_cast<std::uint16_t>(raw[2 * i + 1]) << 8));
    }
  } else {
    std::vector<unsigned char> raw(n);
    in.read(reinterpret_cast<char*>(raw.data()),
            static_cast<std::streamsize>(raw.size()));
    if (!in) throw IoError("short read on " + path.string());
    for (std::size_t i = 0; i < n; ++i) plane.samples[i] = raw[i];
  }
  return plane;
}

double SliceMoments::sse() const {
  if (count == 0) return 0.0;
  const __int128 num = static_cast<__int128>(count) * static_cast<__int128>(sumsq) -
                       static_cast<__int128>(sum) * static_cast<__int128>(sum);
  return static_cast<double>(num) / static_cast<double>(count);
}

TextureStats::TextureStats(CtuGrid grid, std::vector<CtuRecord> records, int poc)
    : grid_(grid), poc_(poc), records_(std::move(records)) {
  if (records_.size() != static_cast<std::size_t>(grid_.cell_count())) {
    throw GeometryError("record count " + std::to_string(records_.size()) +
                        " does not match grid cell count " +
                        std::to_string(grid_.cell_count()));
  }
  for (int y = 0; y < grid_.rows; ++y) {
    for (int x = 0; x < grid_.cols; ++x) {
      const CtuRecord& r = record(x, y);
      if (r.count != static_cast<std::uint64_t>(grid_.cell_pixels(x, y))) {
        throw FormatError("CTU pixel count mismatch at (" + std::to_string(x) +
                          "," + std::to_string(y) + ")");
      }
      const __int128 lhs = static_cast<__int128>(r.count) * r.sumsq;
      const __int128 rhs = static_cast<__int128>(r.sum) * r.sum;
      if (lhs < rhs) {
        throw FormatError("CTU statistics violate count*sumsq >= sum^2 at (" +
                          std::to_string(x) + "," + std::to_string(y) + ")");
      }
    }
  }

  const std::size_t stride = static_cast<std::size_t>(grid_.cols) + 1;
  const std::size_t cells = stride * (static_cast<std::size_t>(grid_.rows) + 1);
  pre_count_.assign(cells, 0);
  pre_sum_.assign(cells, 0);
  pre_sumsq_.assign(cells, 0);
  for (int y = 0; y < grid_.rows; ++y) {
    for (int x = 0; x < grid_.cols; ++x) {
      const CtuRecord& r = record(x, y);
      const std::size_t i = static_cast<std::size_t>(y + 1) * stride + (x + 1);
      pre_count_[i] = r.count + pre_count_[i - 1] + pre_count_[i - stride] -
                      pre_count_[i - stride - 1];
      pre_sum_[i] = r.sum + pre_sum_[i - 1] + pre_sum_[i - stride] -
                    pre_sum_[i - stride - 1];
      pre_sumsq_[i] = r.sumsq + pre_sumsq_[i - 1] + pre_sumsq_[i - stride] -
                      pre_sumsq_[i - stride - 1];
    }
  }
}

SliceMoments TextureStats::rect_moments(int x0, int y0, int w, int h) const {
  const std::size_t stride = static_cast<std::size_t>(grid_.cols) + 1;
  const std::size_t a = static_cast<std::size_t>(y0) * stride + x0;
  const std::size_t b = static_cast<std::size_t>(y0) * stride + (x0 + w);
  const std::size_t c = static_cast<std::size_t>(y0 + h) * stride + x0;
  const std::size_t d = static_cast<std::size_t>(y0 + h) * stride + (x0 + w);
  SliceMoments m;
  m.count = pre_count_[d] - pre_count_[b] - pre_count_[c] + pre_count_[a];
  m.sum = pre_sum_[d] - pre_sum_[b] - pre_sum_[c] + pre_sum_[a];
  m.sumsq = pre_sumsq_[d] - pre_sumsq_[b] - pre_sumsq_[c] + pre_sumsq_[a];
  return m;
}

TextureStats ctu_stats(const LumaPlane& luma, const CtuGrid& grid, int poc) {
  if (luma.width != grid.frame_width || luma.height != grid.frame_height) {
    throw GeometryError("plane dimensions do not match the grid");
  }
  std::vector<CtuRecord> records(static_cast<std::size_t>(grid.cell_count()));
  for (int cy = 0; cy < grid.rows; ++cy) {
    for (int cx = 0; cx < grid.cols; ++cx) {
      CtuRecord r;
      const int x1 = cx * grid.ctu_size;
      const int y1 = cy * grid.ctu_size;
      const int x2 = x1 + grid.cell_width(cx);
      const int y2 = y1 + grid.cell_height(cy);
      for (int y = y1; y < y2; ++y) {
        for (int x = x1; x < x2; ++x) {
          const std::uint64_t v = luma.at(x, y);
          r.count += 1;
          r.sum += v;
          r.sumsq += v * v;
        }
      }
      records[static_cast<std::size_t>(cy) * grid.cols + cx] = r;
    }
  }
  return TextureStats(grid, std::move(records), poc);
}

std::vector<SliceMoments> slice_moments(const TextureStats& stats,
                                        const Partition& p) {
  if (stats.grid() != p.grid) {
    throw GeometryError("texture stats grid does not match the partition grid");
  }
  std::vector<SliceMoments> out(p.slices.size());
  for (const RectSlice& s : p.slices) {
    out[static_cast<std::size_t>(s.id)] = stats.rect_moments(s.x0, s.y0, s.w, s.h);
  }
  return out;
}

double partition_sse(const TextureStats& stats, const Partition& p) {
  double total = 0.0;
  for (const SliceMoments& m : slice_moments(stats, p)) {
    total += m.sse();
  }
  return total;
}

}  // namespace slicecraft
