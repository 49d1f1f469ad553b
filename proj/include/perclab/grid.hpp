#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "perclab/bitfield.hpp"
#include "perclab/env.hpp"
#include "perclab/rng.hpp"

namespace perclab {

// Finite site-bond grid: nx x ny sites, bonds between orthogonal neighbours.
struct SiteBondGrid {
  int nx = 0;
  int ny = 0;
  Bitfield2D site_open;   // nx x ny
  Bitfield2D hbond_open;  // (nx-1) x ny, bond (x,y)-(x+1,y)
  Bitfield2D vbond_open;  // nx x (ny-1), bond (x,y)-(x,y+1)

  bool site(int x, int y) const { return site_open.get(x, y); }
  bool hbond(int x, int y) const { return hbond_open.get(x, y); }
  bool vbond(int x, int y) const { return vbond_open.get(x, y); }
};

SiteBondGrid make_grid(int nx, int ny, bool sites_open = false, bool bonds_open = false);

// Independent Bernoulli states keyed per element, monotone in (s, p) under a
// fixed seed.
SiteBondGrid sample_grid(int nx, int ny, double s, double p, const CounterRng& rng);

// Copies the bond states of a sub-rectangle of a sampled configuration; all
// sites open. Rectangle given by inclusive site corners.
SiteBondGrid grid_from_config(const BondConfiguration& cfg, int x0, int y0, int x1,
                              int y1);

// Connected components of the graph (open sites, open bonds with both
// endpoints open). label = -1 for closed sites.
struct ClusterLabels {
  std::vector<int> label;  // size nx*ny, component root id or -1
  int nx = 0, ny = 0;
  int at(int x, int y) const { return label[static_cast<std::size_t>(y) * nx + x]; }
};

ClusterLabels label_clusters(const SiteBondGrid& g);

// Open path u -> v: intermediate and final sites open, traversed bonds open;
// the state of u itself is ignored, and u == v holds vacuously.
bool connected(const SiteBondGrid& g, int ux, int uy, int vx, int vy);

// Same path rule from u to any site on the far boundary x = nx-1 or y = ny-1.
bool connected_to_far_boundary(const SiteBondGrid& g, int ux, int uy);

// PBM-like text dump, one 0/1 raster per field.
void dump_grid(std::ostream& os, const SiteBondGrid& g);
SiteBondGrid parse_grid(std::istream& is);

}  // namespace perclab
