#include "perclab/grid.hpp"

#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

namespace perclab {

SiteBondGrid make_grid(int nx, int ny, bool sites_open, bool bonds_open) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("make_grid: sides must be positive");
  SiteBondGrid g;
  g.nx = nx;
  g.ny = ny;
  g.site_open = Bitfield2D(nx, ny, sites_open);
  g.hbond_open = Bitfield2D(nx > 1 ? nx - 1 : 0, ny, bonds_open);
  g.vbond_open = Bitfield2D(nx, ny > 1 ? ny - 1 : 0, bonds_open);
  return g;
}

SiteBondGrid sample_grid(int nx, int ny, double s, double p, const CounterRng& rng) {
  if (!(s >= 0.0 && s <= 1.0) || !(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("sample_grid: probabilities must lie in [0,1]");
  SiteBondGrid g = make_grid(nx, ny);
  for (int y = 0; y < ny; ++y)
    for (int x = 0; x < nx; ++x)
      if (rng.uniform(tag::site, static_cast<std::uint64_t>(x),
                      static_cast<std::uint64_t>(y)) < s)
        g.site_open.set(x, y, true);
  for (int y = 0; y < ny; ++y)
    for (int x = 0; x + 1 < nx; ++x)
      if (rng.uniform(tag::bond_h, static_cast<std::uint64_t>(x),
                      static_cast<std::uint64_t>(y)) < p)
        g.hbond_open.set(x, y, true);
  for (int y = 0; y + 1 < ny; ++y)
    for (int x = 0; x < nx; ++x)
      if (rng.uniform(tag::bond_v, static_cast<std::uint64_t>(x),
                      static_cast<std::uint64_t>(y)) < p)
        g.vbond_open.set(x, y, true);
  return g;
}

SiteBondGrid grid_from_config(const BondConfiguration& cfg, int x0, int y0, int x1,
                              int y1) {
  if (x0 < 0 || y0 < 0 || x1 > cfg.n1 || y1 > cfg.n2 || x0 > x1 || y0 > y1)
    throw std::out_of_range("grid_from_config: rectangle outside configuration box");
  SiteBondGrid g = make_grid(x1 - x0 + 1, y1 - y0 + 1, true, false);
  for (int y = y0; y <= y1; ++y)
    for (int x = x0; x < x1; ++x)
      if (cfg.h_open(x, y)) g.hbond_open.set(x - x0, y - y0, true);
  for (int y = y0; y < y1; ++y)
    for (int x = x0; x <= x1; ++x)
      if (cfg.v_open(x, y)) g.vbond_open.set(x - x0, y - y0, true);
  return g;
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    for (int i = 0; i < n; ++i) parent[i] = i;
  }
  int find(int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[b] = a;
  }
};

}  // namespace

ClusterLabels label_clusters(const SiteBondGrid& g) {
  int n = g.nx * g.ny;
  UnionFind uf(n);
  auto id = [&](int x, int y) { return y * g.nx + x; };
  for (int y = 0; y < g.ny; ++y)
    for (int x = 0; x + 1 < g.nx; ++x)
      if (g.hbond(x, y) && g.site(x, y) && g.site(x + 1, y))
        uf.unite(id(x, y), id(x + 1, y));
  for (int y = 0; y + 1 < g.ny; ++y)
    for (int x = 0; x < g.nx; ++x)
      if (g.vbond(x, y) && g.site(x, y) && g.site(x, y + 1))
        uf.unite(id(x, y), id(x, y + 1));
  ClusterLabels lab;
  lab.nx = g.nx;
  lab.ny = g.ny;
  lab.label.assign(n, -1);
  for (int y = 0; y < g.ny; ++y)
    for (int x = 0; x < g.nx; ++x)
      if (g.site(x, y)) lab.label[id(x, y)] = uf.find(id(x, y));
  return lab;
}

namespace {

template <typename Accept>
bool bfs_from(const SiteBondGrid& g, int ux, int uy, Accept accept) {
  if (ux < 0 || ux >= g.nx || uy < 0 || uy >= g.ny)
    throw std::out_of_range("path query: start outside grid");
  if (accept(ux, uy)) return true;
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(g.nx) * g.ny, 0);
  std::vector<std::pair<int, int>> queue;
  auto idx = [&](int x, int y) { return static_cast<std::size_t>(y) * g.nx + x; };
  seen[idx(ux, uy)] = 1;
  queue.emplace_back(ux, uy);
  for (std::size_t h = 0; h < queue.size(); ++h) {
    auto [x, y] = queue[h];
    auto step = [&](int nx2, int ny2, bool bond_open) {
      if (!bond_open || !g.site(nx2, ny2) || seen[idx(nx2, ny2)]) return false;
      if (accept(nx2, ny2)) return true;
      seen[idx(nx2, ny2)] = 1;
      queue.emplace_back(nx2, ny2);
      return false;
    };
    if (x + 1 < g.nx && step(x + 1, y, g.hbond(x, y))) return true;
    if (x - 1 >= 0 && step(x - 1, y, g.hbond(x - 1, y))) return true;
    if (y + 1 < g.ny && step(x, y + 1, g.vbond(x, y))) return true;
    if (y - 1 >= 0 && step(x, y - 1, g.vbond(x, y - 1))) return true;
  }
  return false;
}

}  // namespace

bool connected(const SiteBondGrid& g, int ux, int uy, int vx, int vy) {
  if (vx < 0 || vx >= g.nx || vy < 0 || vy >= g.ny)
    throw std::out_of_range("connected: target outside grid");
  return bfs_from(g, ux, uy, [&](int x, int y) { return x == vx && y == vy; });
}

bool connected_to_far_boundary(const SiteBondGrid& g, int ux, int uy) {
  return bfs_from(g, ux, uy,
                  [&](int x, int y) { return x == g.nx - 1 || y == g.ny - 1; });
}

namespace {

void dump_field(std::ostream& os, const char* name, const Bitfield2D& f) {
  os << name << ' ' << f.nx() << ' ' << f.ny() << '\n';
  for (int y = 0; y < f.ny(); ++y) {
    for (int x = 0; x < f.nx(); ++x) os << (f.get(x, y) ? '1' : '0');
    os << '\n';
  }
}

Bitfield2D parse_field(std::istream& is, const std::string& expect) {
  std::string name;
  int nx, ny;
  if (!(is >> name >> nx >> ny) || name != expect)
    throw std::invalid_argument("parse_grid: bad section header");
  Bitfield2D f(nx, ny);
  std::string row;
  for (int y = 0; y < ny; ++y) {
    if (!(is >> row) || static_cast<int>(row.size()) != nx)
      throw std::invalid_argument("parse_grid: bad raster row");
    for (int x = 0; x < nx; ++x) f.set(x, y, row[x] == '1');
  }
  return f;
}

}  // namespace

void dump_grid(std::ostream& os, const SiteBondGrid& g) {
  os << "grid " << g.nx << ' ' << g.ny << '\n';
  dump_field(os, "sites", g.site_open);
  dump_field(os, "hbonds", g.hbond_open);
  dump_field(os, "vbonds", g.vbond_open);
}

SiteBondGrid parse_grid(std::istream& is) {
  std::string name;
  SiteBondGrid g;
  if (!(is >> name >> g.nx >> g.ny) || name != "grid")
    throw std::invalid_argument("parse_grid: missing grid header");
  g.site_open = parse_field(is, "sites");
  g.hbond_open = parse_field(is, "hbonds");
  g.vbond_open = parse_field(is, "vbonds");
  return g;
}

}  // namespace perclab
