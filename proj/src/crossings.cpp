#include "perclab/crossings.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace perclab {

namespace {

// Dinic with unit vertex capacities via node splitting.
struct FlowGraph {
  struct Edge {
    int to, cap, rev;
  };
  std::vector<std::vector<Edge>> adj;
  std::vector<int> level, iter;

  explicit FlowGraph(int n) : adj(n) {}

  void add_edge(int from, int to, int cap) {
    adj[from].push_back({to, cap, static_cast<int>(adj[to].size())});
    adj[to].push_back({from, 0, static_cast<int>(adj[from].size()) - 1});
  }

  bool bfs(int s, int t) {
    level.assign(adj.size(), -1);
    std::vector<int> q;
    level[s] = 0;
    q.push_back(s);
    for (std::size_t h = 0; h < q.size(); ++h) {
      int v = q[h];
      for (const Edge& e : adj[v])
        if (e.cap > 0 && level[e.to] < 0) {
          level[e.to] = level[v] + 1;
          q.push_back(e.to);
        }
    }
    return level[t] >= 0;
  }

  int dfs(int v, int t, int f) {
    if (v == t) return f;
    for (int& i = iter[v]; i < static_cast<int>(adj[v].size()); ++i) {
      Edge& e = adj[v][i];
      if (e.cap > 0 && level[v] < level[e.to]) {
        int d = dfs(e.to, t, std::min(f, e.cap));
        if (d > 0) {
          e.cap -= d;
          adj[e.to][e.rev].cap += d;
          return d;
        }
      }
    }
    return 0;
  }

  int max_flow(int s, int t) {
    int flow = 0;
    while (bfs(s, t)) {
      iter.assign(adj.size(), 0);
      int f;
      while ((f = dfs(s, t, 1 << 29)) > 0) flow += f;
    }
    return flow;
  }
};

}  // namespace

int count_disjoint_crossings(const SiteBondGrid& g, CrossDir dir) {
  int n = g.nx * g.ny;
  FlowGraph fg(2 * n + 2);
  int S = 2 * n, T = 2 * n + 1;
  auto in = [&](int x, int y) { return 2 * (y * g.nx + x); };
  auto out = [&](int x, int y) { return 2 * (y * g.nx + x) + 1; };
  for (int y = 0; y < g.ny; ++y)
    for (int x = 0; x < g.nx; ++x)
      if (g.site(x, y)) fg.add_edge(in(x, y), out(x, y), 1);
  for (int y = 0; y < g.ny; ++y)
    for (int x = 0; x + 1 < g.nx; ++x)
      if (g.hbond(x, y)) {
        fg.add_edge(out(x, y), in(x + 1, y), 1);
        fg.add_edge(out(x + 1, y), in(x, y), 1);
      }
  for (int y = 0; y + 1 < g.ny; ++y)
    for (int x = 0; x < g.nx; ++x)
      if (g.vbond(x, y)) {
        fg.add_edge(out(x, y), in(x, y + 1), 1);
        fg.add_edge(out(x, y + 1), in(x, y), 1);
      }
  if (dir == CrossDir::LeftRight) {
    for (int y = 0; y < g.ny; ++y) {
      fg.add_edge(S, in(0, y), 1);
      fg.add_edge(out(g.nx - 1, y), T, 1);
    }
  } else {
    for (int x = 0; x < g.nx; ++x) {
      fg.add_edge(S, in(x, 0), 1);
      fg.add_edge(out(x, g.ny - 1), T, 1);
    }
  }
  return fg.max_flow(S, T);
}

int contact_threshold(double rho, int l) {
  double v = rho * static_cast<double>(l);
  return static_cast<int>(std::ceil(v - 1e-9));
}

bool cluster_surrounds(const SiteBondGrid& g, const ClusterLabels& lab, int root,
                       int cx, int cy) {
  auto hbond_blocks = [&](int x, int y) {
    if (x < 0 || x + 1 >= g.nx || y < 0 || y >= g.ny) return false;
    if (!g.hbond(x, y) || !g.site(x, y) || !g.site(x + 1, y)) return false;
    if (lab.at(x, y) != root || lab.at(x + 1, y) != root) return false;
    if ((x == cx && y == cy) || (x + 1 == cx && y == cy)) return false;
    return true;
  };
  auto vbond_blocks = [&](int x, int y) {
    if (x < 0 || x >= g.nx || y < 0 || y + 1 >= g.ny) return false;
    if (!g.vbond(x, y) || !g.site(x, y) || !g.site(x, y + 1)) return false;
    if (lab.at(x, y) != root || lab.at(x, y + 1) != root) return false;
    if ((x == cx && y == cy) || (x == cx && y + 1 == cy)) return false;
    return true;
  };

  // Faces [fx,fx+1]x[fy,fy+1], fx in [-1, nx-1]; the outer ring is escape.
  int fw = g.nx + 1, fh = g.ny + 1;
  auto fidx = [&](int fx, int fy) { return (fy + 1) * fw + (fx + 1); };
  auto escape = [&](int fx, int fy) {
    return fx == -1 || fy == -1 || fx == g.nx - 1 || fy == g.ny - 1;
  };
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(fw) * fh, 0);
  std::vector<std::pair<int, int>> q;
  auto push = [&](int fx, int fy) {
    if (seen[fidx(fx, fy)]) return false;
    seen[fidx(fx, fy)] = 1;
    if (escape(fx, fy)) return true;
    q.emplace_back(fx, fy);
    return false;
  };
  if (push(cx - 1, cy - 1) || push(cx, cy - 1) || push(cx - 1, cy) || push(cx, cy))
    return false;
  for (std::size_t h = 0; h < q.size(); ++h) {
    auto [fx, fy] = q[h];
    // East/west moves cross a vertical bond, north/south a horizontal one.
    if (!vbond_blocks(fx + 1, fy) && push(fx + 1, fy)) return false;
    if (!vbond_blocks(fx, fy) && push(fx - 1, fy)) return false;
    if (!hbond_blocks(fx, fy + 1) && push(fx, fy + 1)) return false;
    if (!hbond_blocks(fx, fy) && push(fx, fy - 1)) return false;
  }
  return true;
}

BoxCrossingWitness box_crossing_witness(const SiteBondGrid& g, double rho, int N) {
  if (!(rho > 0.75 && rho < 1.0))
    throw std::invalid_argument("box crossing: rho must lie in (3/4, 1)");
  if (N < 1) throw std::invalid_argument("box crossing: N must be positive");
  if (g.nx < N || g.nx > 6 * N - 1 || g.ny < N || g.ny > 6 * N - 1)
    throw std::invalid_argument("box crossing: sides must lie in [N, 6N-1]");

  ClusterLabels lab = label_clusters(g);
  int tx = contact_threshold(rho, g.nx);
  int ty = contact_threshold(rho, g.ny);
  std::vector<int> left(g.nx * g.ny, 0), right(g.nx * g.ny, 0), bottom(g.nx * g.ny, 0),
      top(g.nx * g.ny, 0);
  for (int y = 0; y < g.ny; ++y) {
    if (lab.at(0, y) >= 0) ++left[lab.at(0, y)];
    if (lab.at(g.nx - 1, y) >= 0) ++right[lab.at(g.nx - 1, y)];
  }
  for (int x = 0; x < g.nx; ++x) {
    if (lab.at(x, 0) >= 0) ++bottom[lab.at(x, 0)];
    if (lab.at(x, g.ny - 1) >= 0) ++top[lab.at(x, g.ny - 1)];
  }
  int cx = (g.nx - 1) / 2, cy = (g.ny - 1) / 2;
  BoxCrossingWitness w;
  for (int root = 0; root < g.nx * g.ny; ++root) {
    if (left[root] < ty || right[root] < ty || bottom[root] < tx || top[root] < tx)
      continue;
    if (!cluster_surrounds(g, lab, root, cx, cy)) continue;
    w.open = true;
    w.cluster_root = root;
    for (int y = 0; y < g.ny; ++y)
      for (int x = 0; x < g.nx; ++x)
        if (lab.at(x, y) == root) w.sites.emplace_back(x, y);
    for (int y = 0; y < g.ny; ++y)
      for (int x = 0; x + 1 < g.nx; ++x)
        if (g.hbond(x, y) && lab.at(x, y) == root && lab.at(x + 1, y) == root)
          w.bonds.emplace_back('H', x, y);
    for (int y = 0; y + 1 < g.ny; ++y)
      for (int x = 0; x < g.nx; ++x)
        if (g.vbond(x, y) && lab.at(x, y) == root && lab.at(x, y + 1) == root)
          w.bonds.emplace_back('V', x, y);
    break;
  }
  return w;
}

bool event_box_crossing(const SiteBondGrid& g, double rho, int N) {
  return box_crossing_witness(g, rho, N).open;
}

bool event_central_crossing(const SiteBondGrid& g) {
  bool wide = g.nx >= g.ny;  // short sides vertical when wide
  int sx, sy, txx, tyy;
  if (wide) {
    sy = tyy = (g.ny - 1) / 2;
    sx = 0;
    txx = g.nx - 1;
  } else {
    sx = txx = (g.nx - 1) / 2;
    sy = 0;
    tyy = g.ny - 1;
  }
  // Bonds lying along the rectangle outline are barred: horizontal ones on
  // the top and bottom rows, vertical ones on the leftmost and rightmost
  // columns.
  auto h_usable = [&](int x, int y) {
    if (!g.hbond(x, y)) return false;
    return !(y == 0 || y == g.ny - 1);
  };
  auto v_usable = [&](int x, int y) {
    if (!g.vbond(x, y)) return false;
    return !(x == 0 || x == g.nx - 1);
  };
  if (sx == txx && sy == tyy) return true;
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(g.nx) * g.ny, 0);
  std::vector<std::pair<int, int>> q;
  auto idx = [&](int x, int y) { return static_cast<std::size_t>(y) * g.nx + x; };
  seen[idx(sx, sy)] = 1;
  q.emplace_back(sx, sy);
  for (std::size_t h = 0; h < q.size(); ++h) {
    auto [x, y] = q[h];
    auto step = [&](int nx2, int ny2, bool usable) {
      if (!usable || !g.site(nx2, ny2) || seen[idx(nx2, ny2)]) return false;
      if (nx2 == txx && ny2 == tyy) return true;
      seen[idx(nx2, ny2)] = 1;
      q.emplace_back(nx2, ny2);
      return false;
    };
    if (x + 1 < g.nx && step(x + 1, y, h_usable(x, y))) return true;
    if (x - 1 >= 0 && step(x - 1, y, h_usable(x - 1, y))) return true;
    if (y + 1 < g.ny && step(x, y + 1, v_usable(x, y))) return true;
    if (y - 1 >= 0 && step(x, y - 1, v_usable(x, y - 1))) return true;
  }
  return false;
}

bool event_occurs(const CrossingSpec& spec, const SiteBondGrid& g) {
  switch (spec.kind) {
    case CrossingSpec::Kind::LrDisjoint:
      return count_disjoint_crossings(g, CrossDir::LeftRight) >= spec.path_threshold;
    case CrossingSpec::Kind::TbDisjoint:
      return count_disjoint_crossings(g, CrossDir::TopBottom) >= spec.path_threshold;
    case CrossingSpec::Kind::BoxCrossing:
      return event_box_crossing(g, spec.rho, spec.scale_n);
    case CrossingSpec::Kind::CentralCrossing:
      return event_central_crossing(g);
    case CrossingSpec::Kind::OriginToBoundary:
      return connected_to_far_boundary(g, 0, 0);
  }
  return false;
}

EstimateResult estimate_event_with(const CrossingSpec& spec, const GridSampler& sampler,
                                   std::int64_t replicates, const CounterRng& rng) {
  if (replicates <= 0)
    throw std::invalid_argument("estimate_event: replicates must be positive");
  std::int64_t hits = 0;
  for (std::int64_t r = 0; r < replicates; ++r) {
    SiteBondGrid g = sampler(rng.substream(static_cast<std::uint64_t>(r)));
    if (event_occurs(spec, g)) ++hits;
  }
  return wilson_interval(hits, replicates, rng.key());
}

EstimateResult estimate_event(const CrossingSpec& spec, std::int64_t replicates,
                              const CounterRng& rng) {
  return estimate_event_with(
      spec,
      [&spec](const CounterRng& r) {
        return sample_grid(spec.nx, spec.ny, spec.site_prob, spec.bond_prob, r);
      },
      replicates, rng);
}

std::vector<std::pair<int, int>> default_box_shapes(int N) {
  std::vector<std::pair<int, int>> shapes;
  for (int m = 1; m <= 5; ++m) shapes.emplace_back(N, m * N);
  shapes.emplace_back(N, 6 * N - 1);
  std::size_t base = shapes.size();
  for (std::size_t i = 0; i < base; ++i) {
    auto [a, b] = shapes[i];
    if (a != b) shapes.emplace_back(b, a);
  }
  return shapes;
}

GnEstimate estimate_gn(double p, int N, double rho,
                       const std::vector<std::pair<int, int>>& shapes,
                       std::int64_t replicates, const CounterRng& rng) {
  if (shapes.empty()) throw std::invalid_argument("estimate_gn: shape list empty");
  GnEstimate out;
  bool first = true;
  std::uint64_t shape_idx = 0;
  for (auto [nx, ny] : shapes) {
    CrossingSpec spec;
    spec.kind = CrossingSpec::Kind::BoxCrossing;
    spec.nx = nx;
    spec.ny = ny;
    spec.site_prob = p;
    spec.bond_prob = p;
    spec.rho = rho;
    spec.scale_n = N;
    EstimateResult e =
        estimate_event(spec, replicates, rng.substream(0x5a5a5a5aULL + shape_idx));
    out.per_shape.push_back({nx, ny, e});
    if (first || e.point < out.minimum.point) {
      out.minimum = e;
      first = false;
    }
    ++shape_idx;
  }
  return out;
}

SandwichCheck verify_sandwich_exact(int elements,
                                    const std::function<bool(std::uint64_t)>& event,
                                    double p0, double p0p,
                                    const std::vector<double>& p_list) {
  if (elements < 1 || elements > 24)
    throw std::invalid_argument("verify_sandwich_exact: elements must lie in [1,24]");
  std::uint64_t states = 1ULL << elements;
  std::vector<std::uint8_t> table(states);
  for (std::uint64_t m = 0; m < states; ++m) table[m] = event(m) ? 1 : 0;
  for (std::uint64_t m = 0; m < states; ++m) {
    if (!table[m]) continue;
    for (int b = 0; b < elements; ++b)
      if (!table[m | (1ULL << b)])
        throw std::invalid_argument("verify_sandwich_exact: indicator is not monotone");
  }
  auto prob = [&](double p) {
    std::vector<double> up(elements + 1), down(elements + 1);
    up[0] = down[0] = 1.0;
    for (int i = 1; i <= elements; ++i) {
      up[i] = up[i - 1] * p;
      down[i] = down[i - 1] * (1.0 - p);
    }
    double total = 0.0;
    for (std::uint64_t m = 0; m < states; ++m)
      if (table[m]) {
        int k = __builtin_popcountll(m);
        total += up[k] * down[elements - k];
      }
    return total;
  };
  SandwichCheck out;
  out.ptilde = 1.0 - (1.0 - p0) * (1.0 - p0p);
  double q0 = prob(p0), q0p = prob(p0p);
  double bound = 1.0 - (1.0 - q0) * (1.0 - q0p);
  for (double p : p_list) {
    out.p_values.push_back(p);
    double margin = prob(p) - bound;
    out.margins.push_back(margin);
    if (p >= out.ptilde - 1e-15 && margin < -1e-12) out.all_nonnegative = false;
  }
  return out;
}

double enumerate_event_probability(int nx, int ny, double s, double p,
                                   const std::function<bool(const SiteBondGrid&)>& event) {
  using Elem = GridElement;
  std::vector<Elem> elems;
  bool sites_fixed = s == 0.0 || s == 1.0;
  bool bonds_fixed = p == 0.0 || p == 1.0;
  if (!sites_fixed)
    for (int y = 0; y < ny; ++y)
      for (int x = 0; x < nx; ++x) elems.push_back({'S', x, y});
  int n_sites = static_cast<int>(elems.size());
  if (!bonds_fixed) {
    for (int y = 0; y < ny; ++y)
      for (int x = 0; x + 1 < nx; ++x) elems.push_back({'H', x, y});
    for (int y = 0; y + 1 < ny; ++y)
      for (int x = 0; x < nx; ++x) elems.push_back({'V', x, y});
  }
  int n = static_cast<int>(elems.size());
  if (n > 26)
    throw std::invalid_argument("enumerate_event_probability: state space too large");

  std::vector<double> s_up(n + 1), s_dn(n + 1), p_up(n + 1), p_dn(n + 1);
  s_up[0] = s_dn[0] = p_up[0] = p_dn[0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    s_up[i] = s_up[i - 1] * s;
    s_dn[i] = s_dn[i - 1] * (1.0 - s);
    p_up[i] = p_up[i - 1] * p;
    p_dn[i] = p_dn[i - 1] * (1.0 - p);
  }
  std::uint64_t site_mask = n_sites > 0 ? ((1ULL << n_sites) - 1) : 0;

  SiteBondGrid g = make_grid(nx, ny, s == 1.0, p == 1.0);
  double total = 0.0;
  std::uint64_t states = 1ULL << n;
  for (std::uint64_t m = 0; m < states; ++m) {
    for (int i = 0; i < n; ++i) {
      bool v = (m >> i) & 1;
      const Elem& e = elems[i];
      if (e.kind == 'S')
        g.site_open.set(e.x, e.y, v);
      else if (e.kind == 'H')
        g.hbond_open.set(e.x, e.y, v);
      else
        g.vbond_open.set(e.x, e.y, v);
    }
    if (!event(g)) continue;
    int ks = static_cast<int>(__builtin_popcountll(m & site_mask));
    int kb = static_cast<int>(__builtin_popcountll(m & ~site_mask & (states - 1)));
    double w = 1.0;
    if (!sites_fixed) w *= s_up[ks] * s_dn[n_sites - ks];
    if (!bonds_fixed) w *= p_up[kb] * p_dn[n - n_sites - kb];
    total += w;
  }
  return total;
}

double enumerate_event_probability_selected(
    int nx, int ny, double s, double p, const std::vector<GridElement>& elements,
    const std::function<bool(const SiteBondGrid&)>& event) {
  int n = static_cast<int>(elements.size());
  if (n < 1 || n > 26)
    throw std::invalid_argument("enumerate_event_probability_selected: bad element count");
  int n_sites = 0;
  for (const auto& e : elements)
    if (e.kind == 'S') ++n_sites;
  std::vector<double> s_up(n + 1), s_dn(n + 1), p_up(n + 1), p_dn(n + 1);
  s_up[0] = s_dn[0] = p_up[0] = p_dn[0] = 1.0;
  for (int i = 1; i <= n; ++i) {
    s_up[i] = s_up[i - 1] * s;
    s_dn[i] = s_dn[i - 1] * (1.0 - s);
    p_up[i] = p_up[i - 1] * p;
    p_dn[i] = p_dn[i - 1] * (1.0 - p);
  }
  SiteBondGrid g = make_grid(nx, ny, true, true);
  double total = 0.0;
  std::uint64_t states = 1ULL << n;
  for (std::uint64_t m = 0; m < states; ++m) {
    int ks = 0, kb = 0;
    for (int i = 0; i < n; ++i) {
      bool v = (m >> i) & 1;
      const GridElement& e = elements[i];
      if (e.kind == 'S') {
        g.site_open.set(e.x, e.y, v);
        ks += v;
      } else if (e.kind == 'H') {
        g.hbond_open.set(e.x, e.y, v);
        kb += v;
      } else {
        g.vbond_open.set(e.x, e.y, v);
        kb += v;
      }
    }
    if (!event(g)) continue;
    total += s_up[ks] * s_dn[n_sites - ks] * p_up[kb] * p_dn[n - n_sites - kb];
  }
  return total;
}

}  // namespace perclab
