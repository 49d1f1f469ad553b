#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "perclab/grid.hpp"
#include "perclab/stats.hpp"

namespace perclab {

enum class CrossDir { LeftRight, TopBottom };

// Maximum number of vertex-disjoint open paths joining the two opposite
// sides (every path site open, every path bond open). Menger via unit
// vertex capacities.
int count_disjoint_crossings(const SiteBondGrid& g, CrossDir dir);

// True when some open cluster touches at least ceil(rho * side) open sites
// on each of the four sides and contains a circuit of open sites and bonds
// surrounding the rectangle center. Sides must lie in [N, 6N-1] and rho in
// (3/4, 1).
bool event_box_crossing(const SiteBondGrid& g, double rho, int N);

// The witnessing cluster of event_box_crossing, unique because two disjoint
// clusters cannot both touch more than half of one side.
struct BoxCrossingWitness {
  bool open = false;
  int cluster_root = -1;
  std::vector<std::pair<int, int>> sites;
  std::vector<std::tuple<char, int, int>> bonds;  // ('H'|'V', x, y)
};
BoxCrossingWitness box_crossing_witness(const SiteBondGrid& g, double rho, int N);

// Whether cluster `root` contains a circuit of open sites/bonds surrounding
// (cx, cy) without passing through it. Face flood fill: the center is
// surrounded iff its four incident unit faces cannot reach the outside when
// cluster bonds (minus those touching the center) block face adjacency.
bool cluster_surrounds(const SiteBondGrid& g, const ClusterLabels& lab, int root,
                       int cx, int cy);

// Open path between the midpoints of the two short sides, confined to the
// rectangle and barred from bonds lying along its boundary.
bool event_central_crossing(const SiteBondGrid& g);

// ceil(rho * l) with guards against binary rounding of rho * l.
int contact_threshold(double rho, int l);

struct CrossingSpec {
  enum class Kind {
    LrDisjoint,
    TbDisjoint,
    BoxCrossing,
    CentralCrossing,
    OriginToBoundary
  };
  Kind kind = Kind::LrDisjoint;
  int nx = 1;
  int ny = 1;
  double site_prob = 1.0;
  double bond_prob = 1.0;
  double rho = 0.8;        // BoxCrossing
  int scale_n = 3;         // BoxCrossing admissibility
  int path_threshold = 1;  // disjoint kinds: event = count >= threshold
};

bool event_occurs(const CrossingSpec& spec, const SiteBondGrid& g);

using GridSampler = std::function<SiteBondGrid(const CounterRng&)>;

EstimateResult estimate_event(const CrossingSpec& spec, std::int64_t replicates,
                              const CounterRng& rng);
EstimateResult estimate_event_with(const CrossingSpec& spec, const GridSampler& sampler,
                                   std::int64_t replicates, const CounterRng& rng);

// Shape sweep for the infimum over admissible rectangles; default shapes are
// N x mN for m = 1..5, N x (6N-1), and transposes.
struct ShapeEstimate {
  int nx = 0, ny = 0;
  EstimateResult estimate;
};
struct GnEstimate {
  EstimateResult minimum;
  std::vector<ShapeEstimate> per_shape;
};
std::vector<std::pair<int, int>> default_box_shapes(int N);
GnEstimate estimate_gn(double p, int N, double rho,
                       const std::vector<std::pair<int, int>>& shapes,
                       std::int64_t replicates, const CounterRng& rng);

// Exact two-point-probability combination check for increasing events on a
// small graph of `elements` independent 0/1 cells: for every p >= ptilde =
// 1-(1-p0)(1-p0'), P_p(E) >= 1-(1-P_p0(E))(1-P_p0'(E)). Margins returned per
// requested p; the indicator must be monotone (checked by enumeration).
// Events tight at ptilde (unions) give a margin of rounding size, so the
// flag tolerates -1e-12.
struct SandwichCheck {
  double ptilde = 0.0;
  std::vector<double> p_values;
  std::vector<double> margins;
  bool all_nonnegative = true;
};
SandwichCheck verify_sandwich_exact(int elements,
                                    const std::function<bool(std::uint64_t)>& event,
                                    double p0, double p0p,
                                    const std::vector<double>& p_list);

// Exact P(E) on a small grid by enumerating all site/bond states.
double enumerate_event_probability(int nx, int ny, double s, double p,
                                   const std::function<bool(const SiteBondGrid&)>& event);

// Exact P(E) enumerating only the listed elements; everything else is held
// open. Exact whenever the event provably never reads the unlisted elements
// (their weights marginalize to 1).
struct GridElement {
  char kind;  // 'S', 'H', 'V'
  int x, y;
};
double enumerate_event_probability_selected(
    int nx, int ny, double s, double p, const std::vector<GridElement>& elements,
    const std::function<bool(const SiteBondGrid&)>& event);

}  // namespace perclab
