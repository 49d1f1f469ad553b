#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace perclab {

// One block of bad positions. A block is always span(C) intersected with the
// bad set, so storing the span endpoints (both bad positions) determines it.
struct Block {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  int mass = 0;
  int level = 0;
  int id = -1;
  int parent = -1;                 // block that absorbed this one; -1 if never
  std::vector<int> constituents;   // run members merged at formation
};

// Arena of every block ever formed plus the partition snapshots C_0..C_K.
// The first gamma.size() arena entries are the mass-1 singletons.
struct GroupingResult {
  std::vector<std::int64_t> gamma;
  int M = 3;
  int L = 3;
  std::vector<Block> blocks;
  std::vector<std::vector<int>> partitions;
  int stabilization_step = 0;
  bool truncated = false;
  std::int64_t window_width = -1;

  const std::vector<int>& partition_at(int k) const;
};

// L^k with saturation; gaps never exceed the window so a clamped value acts
// as infinity.
std::int64_t pow_clamped(std::int64_t base, int exp);

// Multi-scale merge: step 1 groups maximal runs of bad positions with gaps
// < M; step k+1 groups maximal runs (length >= 2) of blocks of mass >= k+1
// at distance < L^(k+1), the new block being the span closure with mass
// sum - k*(runlen - 1). Stops once at most one block of qualifying mass
// remains, which no later step could merge.
GroupingResult run_grouping(const std::vector<std::int64_t>& gamma, int M, int L,
                            std::int64_t window_width = -1);

struct SpacingReport {
  int chi = 0;
  bool m_spaced = true;
  bool truncated = false;
};

// chi = smallest k such that every block of mass > k among those appearing in
// some C_l, l >= 1, starts at position >= L^mass. Finite windows always give
// a finite value (the max mass among violators).
SpacingReport chi_and_spaced(const GroupingResult& g);

// Highest level of any block containing position x; 0 for an isolated bad
// position. Throws std::invalid_argument when x is not a bad position.
int kappa_of(const GroupingResult& g, std::int64_t x);

struct Violation {
  int step = -1;
  std::string clause;
  int block_a = -1;
  int block_b = -1;
  std::string detail;
};

struct VerifyReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

// Structural audit: span closure, partition coverage and disjointness,
// pairwise spacing d(C,C') >= L^min(m,m',k), level < mass, and merge mass
// bookkeeping. Runs on any GroupingResult, including corrupted copies.
VerifyReport verify_partition_properties(const GroupingResult& g);

// Cut-point representation of a block of mass m >= 2: segments [f_s, g_s]
// whose restricted grouping collapses to a single block, with masses
// descending from m-1 and inter-segment gaps f_s - g_(s-1) within
// [M^mass_s, M^(mass_s+1)], ending within distance M of the span top.
struct DescendingDecomposition {
  bool found = false;
  std::string failure;
  std::vector<std::int64_t> f;
  std::vector<std::int64_t> g;
  std::vector<int> masses;
};

DescendingDecomposition descending_decomposition(const GroupingResult& g, int block_id);

// Re-checks every clause of a decomposition independently of the search.
VerifyReport verify_decomposition(const GroupingResult& g, int block_id,
                                  const DescendingDecomposition& dd);

// One row per arena block: id,step,min,max,mass,level,parent_id.
void write_blocks_csv(std::ostream& os, const GroupingResult& g);

}  // namespace perclab
