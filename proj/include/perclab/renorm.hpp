#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "perclab/env.hpp"
#include "perclab/grid.hpp"
#include "perclab/grouping.hpp"

namespace perclab {

// Column range (inclusive, step-0 coordinates) of one renormalized site along
// an axis. members lists the previous-level slab indices it groups (empty at
// step 1, where the grouping is over raw columns).
struct AxisSlab {
  std::int64_t lo = 0, hi = 0;
  std::vector<int> members;
};

// Gap between consecutive slabs: a single good ladder (block_id -1, the two
// columns it joins) or the span [min, max+1] of a delimiter block.
struct AxisStrip {
  std::int64_t lo = 0, hi = 0;
  int block_id = -1;
  int mass = 0;
};

struct AxisLevel {
  int step = 1;
  std::vector<AxisSlab> slabs;
  std::vector<AxisStrip> strips;  // strips[i] lies between slabs[i] and slabs[i+1]
  bool truncated = false;         // window ended before a full final region
};

// Axis walk per step. Regions between delimiter blocks (mass >= step) are cut
// into groups of N columns (step 1) or N previous slabs (step >= 2), the last
// group absorbing the remainder, so group sizes stay in [N, 2N-1]. Slabs
// strictly inside a delimiter span are consumed by it. Interior regions must
// admit at least 3 groups; the trailing region may be shorter and sets the
// truncated flag when it cannot host a full region.
std::vector<AxisLevel> build_axis_levels(const GroupingResult& g, std::int64_t site_max,
                                         int N, int k_max);

struct Step0Bond {
  bool horizontal = true;
  std::int64_t x = 0, y = 0;  // bitfield indices of BondConfiguration
};

struct Skeleton {
  std::vector<std::pair<std::int64_t, std::int64_t>> sites;
  std::vector<Step0Bond> bonds;
};

struct RenormSite {
  bool open = false;
  Skeleton skel;  // nonempty iff open
  // Previous-level site coordinates inside the witness cluster (step >= 2).
  std::vector<std::pair<int, int>> cluster_members;
};

struct RenormBond {
  int block_id = -1;
  int mass = 0;  // 0 for a plain good-ladder gap
  bool good = true;
  std::optional<bool> open;  // never set for bad bonds
  Skeleton skel;
};

struct RenormLevel {
  int step = 1;
  int nx = 0, ny = 0;
  std::vector<RenormSite> sites;   // nx * ny, row-major
  std::vector<RenormBond> hbonds;  // (nx-1) * ny
  std::vector<RenormBond> vbonds;  // nx * (ny-1)

  RenormSite& site(int i, int j) { return sites[static_cast<std::size_t>(j) * nx + i]; }
  const RenormSite& site(int i, int j) const {
    return sites[static_cast<std::size_t>(j) * nx + i];
  }
  RenormBond& hbond(int i, int j) {
    return hbonds[static_cast<std::size_t>(j) * (nx - 1) + i];
  }
  const RenormBond& hbond(int i, int j) const {
    return hbonds[static_cast<std::size_t>(j) * (nx - 1) + i];
  }
  RenormBond& vbond(int i, int j) { return vbonds[static_cast<std::size_t>(j) * nx + i]; }
  const RenormBond& vbond(int i, int j) const {
    return vbonds[static_cast<std::size_t>(j) * nx + i];
  }
};

// Whether the connecting path of a renormalized bond must stay inside the
// bond's own rectangle (minus the flanking transverse bonds) or may use the
// whole window (still avoiding the flanking bonds).
enum class PathMode { Restricted, Unrestricted };

// Full: a site is judged on its whole span. CoreCollar: judged on a centred
// core of side floor(0.9 * span side); bonds absorb the collars.
enum class SiteGeometry { Full, CoreCollar };

struct RenormChain {
  int N = 0;
  int k_max = 1;
  std::int64_t site_max_h = 0, site_max_v = 0;
  GroupingResult group_h, group_v;
  std::vector<AxisLevel> h_axis, v_axis;  // index k-1 holds step k

  bool evaluated = false;
  double rho = 0.0;
  PathMode mode = PathMode::Restricted;
  SiteGeometry geometry = SiteGeometry::Full;
  std::vector<RenormLevel> levels;  // index k-1 holds step k
};

// Both environments must be M-spaced at M = 3N (throws std::invalid_argument
// otherwise). The grouping runs with L = M over the ladder index windows.
RenormChain build_chain(const LadderEnvironment& env, int N, int k_max);
RenormChain build_chain(const GroupingResult& gh, const GroupingResult& gv,
                        std::int64_t site_max_h, std::int64_t site_max_v, int N,
                        int k_max);

// Site open iff the box-crossing event holds on its subgrid; good bonds open
// iff both ends are open and a step-0 open connection exists (one ladder bond
// at step 1, a path query above). Bad bonds are left undecided.
void evaluate_openness(RenormChain& chain, const BondConfiguration& cfg, double rho,
                       PathMode mode = PathMode::Restricted,
                       SiteGeometry geometry = SiteGeometry::Full);

// Straight-plus-wander crossing of a level <= 1 block between two collinear
// step-0 sites on opposite sides of its strip. Orientation is inferred from
// the shared coordinate. Straight open runs are required through each
// constituent; detours are allowed only in the good gaps, inside a strip of
// max(1, floor(sqrt(N))) rows centred on the common row, and never across the
// strip's outer columns.
bool chained_level0(const BondConfiguration& cfg,
                    const std::vector<std::int64_t>& elements,
                    std::pair<std::int64_t, std::int64_t> psi0,
                    std::pair<std::int64_t, std::int64_t> upsilon0, int N);
bool chained_level0(const BondConfiguration& cfg, const GroupingResult& g, int block_id,
                    std::pair<std::int64_t, std::int64_t> psi0,
                    std::pair<std::int64_t, std::int64_t> upsilon0, int N);

struct ChainedResult {
  bool chained = false;
  bool budget_exhausted = false;
  std::int64_t calls = 0;
};

// Multi-scale structured crossing of the bond at the given step (its block
// mass must equal the step). Scales descend by matched facing pairs, budget
// max(1, J) per descent; at the block's own level the constituent
// decomposition is walked with connecting renormalized paths confined to a
// sqrt(N) transverse strip. A false result means the structured search
// failed, not that the bond is closed.
ChainedResult chained_through(const RenormChain& chain, const BondConfiguration& cfg,
                              int step, Orientation orient, int i, int j);

struct PercolationCheck {
  bool percolates = false;
  bool replay_ok = true;  // step-0 replay of the extracted skeleton path
  Skeleton path_union;
};

// True iff the site at the renormalized origin is open and joined to the far
// boundary of the built top-level lattice through open sites and open good
// bonds. On success the union of skeletons along one such path is replayed
// as a step-0 subgraph and must reconnect origin skeleton to window edge.
PercolationCheck origin_percolates_renormalized(const RenormChain& chain,
                                                const BondConfiguration& cfg);

// step,kind,i,j,x_lo,x_hi,y_lo,y_hi,good,open rows for every site and bond.
void write_lattice_csv(std::ostream& os, const RenormChain& chain);
// One step-0 element per line for the requested site's skeleton.
void write_skeleton_text(std::ostream& os, const RenormChain& chain, int step, int i,
                         int j);

}  // namespace perclab
