#include "slicecraft/search.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <thread>

namespace slicecraft {

std::string to_string(CandidateFamily family) {
  switch (family) {
    case CandidateFamily::ColumnSplit:
      return "ColumnSplit";
    case CandidateFamily::UniformOnly:
      return "UniformOnly";
  }
  return "ColumnSplit";
}

CandidateFamily candidate_family_from_string(const std::string& s) {
  if (s == "ColumnSplit") return CandidateFamily::ColumnSplit;
  if (s == "UniformOnly") return CandidateFamily::UniformOnly;
  throw FormatError("unknown candidate family: " + s);
}

void SearchConfig::check() const {
  if (n_slices < 1) throw ConfigError("n_slices must be >= 1");
  if (!(k_area > 1.0)) throw ConfigError("k_area must be > 1");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw ConfigError("lambda must be finite and >= 0");
  }
  if (workers < 1) throw ConfigError("workers must be >= 1");
  if (max_tile_cols < 0) throw ConfigError("max_tile_cols must be >= 0");
}

namespace {

// Compact candidate description: tile columns, each split into CTU-row runs.
struct Layout {
  std::vector<int> col_widths;
  std::vector<int> runs_per_col;
  std::vector<int> run_heights;  // flattened, column-major
};

template <typename Fn>
void for_each_rect(const Layout& layout, Fn&& fn) {
  int x = 0;
  std::size_t run = 0;
  for (std::size_t col = 0; col < layout.col_widths.size(); ++col) {
    const int w = layout.col_widths[col];
    int y = 0;
    for (int j = 0; j < layout.runs_per_col[col]; ++j, ++run) {
      const int h = layout.run_heights[run];
      fn(x, y, w, h);
      y += h;
    }
    x += w;
  }
}

Partition layout_to_partition(const Layout& layout, const CtuGrid& grid,
                              PartitionOrigin origin) {
  Partition p;
  p.grid = grid;
  p.tiles.col_widths = layout.col_widths;
  p.tiles.row_heights = {grid.rows};
  p.origin = origin;
  int id = 0;
  for_each_rect(layout, [&](int x, int y, int w, int h) {
    p.slices.push_back(RectSlice{x, y, w, h, id++});
  });
  return p;
}

double layout_time(const Layout& layout, const PrefixSumTable& sat) {
  double worst = 0.0;
  for_each_rect(layout, [&](int x, int y, int w, int h) {
    worst = std::max(worst, sat.rect_sum(x, y, w, h));
  });
  return worst;
}

double layout_sse(const Layout& layout, const TextureStats& stats) {
  double total = 0.0;
  for_each_rect(layout, [&](int x, int y, int w, int h) {
    total += stats.rect_moments(x, y, w, h).sse();
  });
  return total;
}

std::int64_t min_slice_area(const Partition& p) {
  std::int64_t amin = p.slices.front().area();
  for (const RectSlice& s : p.slices) amin = std::min(amin, s.area());
  return amin;
}

std::int64_t max_slice_area(const Partition& p) {
  std::int64_t amax = p.slices.front().area();
  for (const RectSlice& s : p.slices) amax = std::max(amax, s.area());
  return amax;
}

bool area_constraint_ok(const Partition& p, double k) {
  return k * static_cast<double>(min_slice_area(p)) >
         static_cast<double>(max_slice_area(p));
}

// Depth-first generator over the ColumnSplit family: column count ascending,
// then column widths, slices per column and run heights, each lexicographic.
// The area constraint prunes partial assignments: adding slices can only
// lower A_min or raise A_max, so a violated prefix never recovers.
class ColumnSplitGenerator {
 public:
  ColumnSplitGenerator(const CtuGrid& grid, const SearchConfig& cfg,
                       const std::function<void(const Layout&)>& sink)
      : grid_(grid), cfg_(cfg), sink_(sink) {}

  void run() {
    const int max_c =
        std::min({cfg_.n_slices, cfg_.effective_max_cols(), grid_.cols});
    for (int c = 1; c <= max_c; ++c) {
      layout_.col_widths.assign(static_cast<std::size_t>(c), 0);
      layout_.runs_per_col.assign(static_cast<std::size_t>(c), 0);
      rec_widths(0, grid_.cols);
    }
  }

 private:
  int columns() const { return static_cast<int>(layout_.col_widths.size()); }

  void rec_widths(int col, int cols_left) {
    if (col == columns()) {
      rec_runs(0, cfg_.n_slices);
      return;
    }
    const int max_w = cols_left - (columns() - col - 1);
    for (int w = 1; w <= max_w; ++w) {
      layout_.col_widths[static_cast<std::size_t>(col)] = w;
      rec_widths(col + 1, cols_left - w);
    }
  }

  void rec_runs(int col, int slices_left) {
    if (col == columns()) {
      if (slices_left == 0) {
        layout_.run_heights.clear();
        rec_heights(0, 0, grid_.rows,
                    std::numeric_limits<std::int64_t>::max(), 0);
      }
      return;
    }
    const int cols_after = columns() - col - 1;
    const int lo = std::max(1, slices_left - cols_after * grid_.rows);
    const int hi = std::min(grid_.rows, slices_left - cols_after);
    for (int r = lo; r <= hi; ++r) {
      layout_.runs_per_col[static_cast<std::size_t>(col)] = r;
      rec_runs(col + 1, slices_left - r);
    }
  }

  void rec_heights(int col, int run, int rows_left, std::int64_t amin,
                   std::int64_t amax) {
    if (col == columns()) {
      sink_(layout_);
      return;
    }
    const int runs = layout_.runs_per_col[static_cast<std::size_t>(col)];
    if (run == runs) {
      rec_heights(col + 1, 0, grid_.rows, amin, amax);
      return;
    }
    const int w = layout_.col_widths[static_cast<std::size_t>(col)];
    const int runs_left = runs - run;
    const int lo = runs_left == 1 ? rows_left : 1;
    const int hi = rows_left - (runs_left - 1);
    for (int h = lo; h <= hi; ++h) {
      const std::int64_t area = static_cast<std::int64_t>(w) * h;
      const std::int64_t namin = std::min(amin, area);
      const std::int64_t namax = std::max(amax, area);
      if (!(cfg_.k_area * static_cast<double>(namin) >
            static_cast<double>(namax))) {
        continue;
      }
      layout_.run_heights.push_back(h);
      rec_heights(col, run + 1, rows_left - h, namin, namax);
      layout_.run_heights.pop_back();
    }
  }

  const CtuGrid& grid_;
  const SearchConfig& cfg_;
  const std::function<void(const Layout&)>& sink_;
  Layout layout_;
};

constexpr std::size_t kBlockSize = 4096;
constexpr std::size_t kChunk = 64;

// Streams candidates in enumeration order, evaluates blocks in parallel and
// reduces sequentially by candidate index, so results do not depend on the
// worker count.
template <typename Value, typename Eval, typename Reduce>
std::uint64_t run_blocked(const CtuGrid& grid, const SearchConfig& cfg,
                          Eval&& eval, Reduce&& reduce) {
  std::vector<Layout> block;
  std::vector<Value> values;
  std::uint64_t processed = 0;

  auto flush = [&]() {
    if (block.empty()) return;
    values.resize(block.size());
    const int workers = static_cast<int>(std::min<std::size_t>(
        static_cast<std::size_t>(cfg.workers), block.size()));
    if (workers <= 1) {
      for (std::size_t i = 0; i < block.size(); ++i) values[i] = eval(block[i]);
    } else {
      std::atomic<std::size_t> next{0};
      auto work = [&]() {
        for (;;) {
          const std::size_t i0 = next.fetch_add(kChunk);
          if (i0 >= block.size()) break;
          const std::size_t i1 = std::min(block.size(), i0 + kChunk);
          for (std::size_t i = i0; i < i1; ++i) values[i] = eval(block[i]);
        }
      };
      std::vector<std::thread> pool;
      pool.reserve(static_cast<std::size_t>(workers) - 1);
      for (int t = 1; t < workers; ++t) pool.emplace_back(work);
      work();
      for (std::thread& t : pool) t.join();
    }
    for (std::size_t i = 0; i < block.size(); ++i) {
      reduce(processed + i, block[i], values[i]);
    }
    processed += block.size();
    block.clear();
  };

  const std::function<void(const Layout&)> sink = [&](const Layout& layout) {
    block.push_back(layout);
    if (block.size() >= kBlockSize) flush();
  };
  ColumnSplitGenerator gen(grid, cfg, sink);
  gen.run();
  flush();
  return processed;
}

struct Step1Result {
  double t_min_us = 0.0;
  Partition argmin;
  std::uint64_t candidates = 0;
};

Step1Result run_step1(const CostMap& est, const SearchConfig& cfg) {
  cfg.check();
  const CtuGrid& grid = est.grid;
  if (cfg.n_slices > grid.cell_count()) {
    throw GeometryError("n_slices exceeds the CTU cell count");
  }
  const PrefixSumTable sat(est);

  if (cfg.family == CandidateFamily::UniformOnly) {
    Partition p = uniform_partition(grid, cfg.n_slices);
    if (!area_constraint_ok(p, cfg.k_area)) {
      throw NoCandidateError("uniform partition violates the area constraint");
    }
    Step1Result r;
    r.t_min_us = partition_time(sat, p).max_us;
    r.argmin = std::move(p);
    r.candidates = 1;
    return r;
  }

  double best_t = std::numeric_limits<double>::infinity();
  Layout best_layout;
  bool found = false;
  const std::uint64_t count = run_blocked<double>(
      grid, cfg,
      [&](const Layout& layout) { return layout_time(layout, sat); },
      [&](std::uint64_t, const Layout& layout, double t) {
        if (t < best_t) {  // strict: keeps the first-in-order argmin
          best_t = t;
          best_layout = layout;
          found = true;
        }
      });
  if (!found) {
    throw NoCandidateError("area constraint admits no candidate partition");
  }
  Step1Result r;
  r.t_min_us = best_t;
  r.argmin = layout_to_partition(best_layout, grid, PartitionOrigin::Proposed);
  r.candidates = count;
  return r;
}

}  // namespace

void for_each_candidate(const CtuGrid& grid, const SearchConfig& cfg,
                        const std::function<void(const Partition&)>& sink) {
  cfg.check();
  if (cfg.n_slices > grid.cell_count()) {
    throw GeometryError("n_slices exceeds the CTU cell count");
  }
  if (cfg.family == CandidateFamily::UniformOnly) {
    Partition p = uniform_partition(grid, cfg.n_slices);
    if (area_constraint_ok(p, cfg.k_area)) sink(p);
    return;
  }
  const std::function<void(const Layout&)> layout_sink =
      [&](const Layout& layout) {
        sink(layout_to_partition(layout, grid, PartitionOrigin::Proposed));
      };
  ColumnSplitGenerator gen(grid, cfg, layout_sink);
  gen.run();
}

std::vector<Partition> enumerate_candidates(const CtuGrid& grid,
                                            const SearchConfig& cfg) {
  std::vector<Partition> out;
  for_each_candidate(grid, cfg, [&](const Partition& p) { out.push_back(p); });
  return out;
}

std::pair<double, Partition> min_time_search(const CostMap& est,
                                             const SearchConfig& cfg) {
  Step1Result r = run_step1(est, cfg);
  return {r.t_min_us, std::move(r.argmin)};
}

SearchOutcome constrained_clustering_search(const CostMap& est,
                                            const TextureStats& stats,
                                            double t_min_us,
                                            const SearchConfig& cfg) {
  cfg.check();
  const CtuGrid& grid = est.grid;
  if (stats.grid() != grid) {
    throw GeometryError("texture stats grid does not match the cost map grid");
  }
  const PrefixSumTable sat(est);
  const double budget = t_min_us * (1.0 + cfg.lambda);

  SearchOutcome out;
  out.t_min_us = t_min_us;

  if (cfg.family == CandidateFamily::UniformOnly) {
    Partition p = uniform_partition(grid, cfg.n_slices);
    if (!area_constraint_ok(p, cfg.k_area)) {
      throw NoCandidateError("uniform partition violates the area constraint");
    }
    const double t = partition_time(sat, p).max_us;
    if (t > budget) {
      throw NoCandidateError("uniform partition exceeds the time budget");
    }
    out.t_best_us = t;
    out.sse_best = partition_sse(stats, p);
    out.best = std::move(p);
    out.candidates_step2 = 1;
    out.candidates_evaluated = 1;
    return out;
  }

  struct Eval {
    double t = 0.0;
    double sse = 0.0;
    bool feasible = false;
  };
  double best_sse = std::numeric_limits<double>::infinity();
  double best_t = std::numeric_limits<double>::infinity();
  Layout best_layout;
  bool found = false;
  const std::uint64_t count = run_blocked<Eval>(
      grid, cfg,
      [&](const Layout& layout) {
        Eval e;
        e.t = layout_time(layout, sat);
        if (e.t <= budget) {
          e.feasible = true;
          e.sse = layout_sse(layout, stats);
        }
        return e;
      },
      [&](std::uint64_t, const Layout& layout, const Eval& e) {
        if (!e.feasible) return;
        if (e.sse < best_sse || (e.sse == best_sse && e.t < best_t)) {
          best_sse = e.sse;
          best_t = e.t;
          best_layout = layout;
          found = true;
        }
      });
  if (!found) {
    // Unreachable when t_min came from the same enumeration.
    throw NoCandidateError("no candidate within the time budget");
  }
  out.best = layout_to_partition(best_layout, grid, PartitionOrigin::Proposed);
  out.t_best_us = best_t;
  out.sse_best = best_sse;
  out.candidates_step2 = count;
  out.candidates_evaluated = count;
  return out;
}

SearchOutcome two_step_partition(const CostHistory& history,
                                 const TextureStats& stats, int poc,
                                 const SearchConfig& cfg) {
  cfg.check();
  if (stats.grid() != history.grid()) {
    throw GeometryError("texture stats grid does not match the history grid");
  }
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  const CostMap est = estimate_ctu_times(history, poc);
  Step1Result step1 = run_step1(est, cfg);
  const auto t1 = clock::now();
  SearchOutcome out =
      constrained_clustering_search(est, stats, step1.t_min_us, cfg);
  const auto t2 = clock::now();

  const auto us = [](auto d) {
    return std::chrono::duration<double, std::micro>(d).count();
  };
  out.time_min_step_us = us(t1 - t0);
  out.clustering_step_us = us(t2 - t1);
  out.search_time_us = us(t2 - t0);
  out.candidates_step1 = step1.candidates;
  out.candidates_evaluated = step1.candidates + out.candidates_step2;
  out.est_source = est.source;
  out.est_source_poc = est.source_poc;
  return out;
}

}  // namespace slicecraft
