#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "slicecraft/cost.hpp"
#include "slicecraft/grid.hpp"
#include "slicecraft/texture.hpp"

namespace slicecraft {

/// Candidate partition family searched by the two-step stage.
/// ColumnSplit: tile columns, each cut into full-width CTU-row runs.
/// UniformOnly: the single uniform grid partition.
enum class CandidateFamily { ColumnSplit, UniformOnly };

std::string to_string(CandidateFamily family);
CandidateFamily candidate_family_from_string(const std::string& s);

struct SearchConfig {
  int n_slices = 4;
  double lambda = 0.0;   // trade-off parameter, >= 0
  double k_area = 3.0;   // area-ratio constant k, > 1
  CandidateFamily family = CandidateFamily::ColumnSplit;
  int max_tile_cols = 0;  // 0 means n_slices
  int workers = 1;        // parallel candidate evaluation

  int effective_max_cols() const {
    return max_tile_cols > 0 ? max_tile_cols : n_slices;
  }
  void check() const;
};

struct SearchOutcome {
  Partition best;
  double t_min_us = 0.0;   // minimum estimated frame time over the family
  double t_best_us = 0.0;  // estimated time of the chosen partition
  double sse_best = 0.0;   // clustering objective of the chosen partition
  std::uint64_t candidates_evaluated = 0;  // both steps combined
  std::uint64_t candidates_step1 = 0;
  std::uint64_t candidates_step2 = 0;
  double search_time_us = 0.0;  // wall clock, both steps
  double time_min_step_us = 0.0;
  double clustering_step_us = 0.0;
  CostSource est_source = CostSource::Uniform;
  int est_source_poc = -1;
};

/// Streams every admissible candidate of the configured family in a fixed
/// deterministic order (depth-first, lexicographic in column count, column
/// widths, slices per column, run heights). Only partitions satisfying
/// k * A_min(P) > A_max(P) are yielded. Throws GeometryError when n exceeds
/// the cell count; yields nothing when the constraint admits no candidate.
void for_each_candidate(const CtuGrid& grid, const SearchConfig& cfg,
                        const std::function<void(const Partition&)>& sink);

/// Materialized candidate list, in enumeration order.
std::vector<Partition> enumerate_candidates(const CtuGrid& grid,
                                            const SearchConfig& cfg);

/// Step 1: minimum estimated frame time over the candidate family, with the
/// first-in-order argmin. Throws NoCandidateError when the enumeration is
/// empty.
std::pair<double, Partition> min_time_search(const CostMap& est,
                                             const SearchConfig& cfg);

/// Step 2: among candidates with estimated time within t_min*(1+lambda),
/// picks the one minimizing the clustering objective; ties broken by smaller
/// estimated time, then enumeration order.
SearchOutcome constrained_clustering_search(const CostMap& est,
                                            const TextureStats& stats,
                                            double t_min_us,
                                            const SearchConfig& cfg);

/// Full partitioning stage: estimate CTU times from the history, minimize
/// the estimated time, then cluster under the lagrangian budget. Wall-clock
/// time of both steps is recorded for overhead accounting.
SearchOutcome two_step_partition(const CostHistory& history,
                                 const TextureStats& stats, int poc,
                                 const SearchConfig& cfg);

/// Brute-force reference: minimum estimated time over the identical family,
/// via an independent recursive enumeration with naive per-cell sums. Guarded
/// to grids <= 8x8 and n <= 4 (SizeError beyond).
double oracle_min_time(const CostMap& est, const SearchConfig& cfg);

}  // namespace slicecraft
