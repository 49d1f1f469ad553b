#include "perclab/renorm.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>
#include <tuple>

#include "perclab/crossings.hpp"

namespace perclab {

namespace {

std::vector<int> delimiter_ids(const GroupingResult& g, int step) {
  std::vector<int> out;
  for (int id : g.partition_at(step))
    if (g.blocks[id].mass >= step) out.push_back(id);
  std::sort(out.begin(), out.end(), [&](int a, int b) {
    return g.blocks[a].lo < g.blocks[b].lo;
  });
  return out;
}

// Groups `count` positions starting at `first` into floor(count/N) runs of N
// with the last run absorbing the remainder.
std::vector<std::pair<std::int64_t, std::int64_t>> cut_region(std::int64_t first,
                                                              std::int64_t count,
                                                              int N) {
  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  std::int64_t l = count / N;
  for (std::int64_t r = 1; r < l; ++r)
    out.emplace_back(first + (r - 1) * N, first + r * N - 1);
  if (l >= 1) out.emplace_back(first + (l - 1) * N, first + count - 1);
  return out;
}

void sort_skeleton(Skeleton& s) {
  std::sort(s.sites.begin(), s.sites.end());
  s.sites.erase(std::unique(s.sites.begin(), s.sites.end()), s.sites.end());
  auto key = [](const Step0Bond& b) {
    return std::make_tuple(b.horizontal, b.x, b.y);
  };
  std::sort(s.bonds.begin(), s.bonds.end(),
            [&](const Step0Bond& a, const Step0Bond& b) { return key(a) < key(b); });
  s.bonds.erase(std::unique(s.bonds.begin(), s.bonds.end(),
                            [&](const Step0Bond& a, const Step0Bond& b) {
                              return key(a) == key(b);
                            }),
                s.bonds.end());
}

void merge_skeleton(Skeleton& dst, const Skeleton& src) {
  dst.sites.insert(dst.sites.end(), src.sites.begin(), src.sites.end());
  dst.bonds.insert(dst.bonds.end(), src.bonds.begin(), src.bonds.end());
}

bool skel_has_site(const Skeleton& s, std::int64_t x, std::int64_t y) {
  return std::binary_search(s.sites.begin(), s.sites.end(), std::make_pair(x, y));
}

int isqrt_floor(int n) {
  int r = static_cast<int>(std::floor(std::sqrt(static_cast<double>(n)) + 1e-9));
  return std::max(1, r);
}

std::pair<std::int64_t, std::int64_t> core_range(std::int64_t lo, std::int64_t hi) {
  std::int64_t side = hi - lo + 1;
  std::int64_t core = std::max<std::int64_t>(1, side * 9 / 10);
  std::int64_t off = (side - core) / 2;
  return {lo + off, lo + off + core - 1};
}

struct PathQuery {
  bool connected = false;
  Skeleton walk;
};

// Undirected reachability over open step-0 bonds inside [x0,x1]x[y0,y1];
// h_ok/v_ok veto individual bonds (flanking removals). walk holds the sites
// lying on some A-B walk and the surviving open bonds among them.
template <typename HOk, typename VOk>
PathQuery step0_path(const BondConfiguration& cfg, std::int64_t x0, std::int64_t y0,
                     std::int64_t x1, std::int64_t y1, HOk h_ok, VOk v_ok,
                     const std::vector<std::pair<std::int64_t, std::int64_t>>& a,
                     const std::vector<std::pair<std::int64_t, std::int64_t>>& b) {
  x0 = std::max<std::int64_t>(x0, 0);
  y0 = std::max<std::int64_t>(y0, 0);
  x1 = std::min<std::int64_t>(x1, cfg.n1);
  y1 = std::min<std::int64_t>(y1, cfg.n2);
  PathQuery out;
  if (x0 > x1 || y0 > y1 || a.empty() || b.empty()) return out;
  int w = static_cast<int>(x1 - x0 + 1), h = static_cast<int>(y1 - y0 + 1);
  auto in_box = [&](std::int64_t x, std::int64_t y) {
    return x >= x0 && x <= x1 && y >= y0 && y <= y1;
  };
  auto h_usable = [&](std::int64_t x, std::int64_t y) {
    return x >= 0 && x < cfg.n1 && cfg.h_open(static_cast<int>(x), static_cast<int>(y)) &&
           h_ok(x, y);
  };
  auto v_usable = [&](std::int64_t x, std::int64_t y) {
    return y >= 0 && y < cfg.n2 && cfg.v_open(static_cast<int>(x), static_cast<int>(y)) &&
           v_ok(x, y);
  };
  auto sweep = [&](const std::vector<std::pair<std::int64_t, std::int64_t>>& seeds,
                   Bitfield2D& vis) {
    std::deque<std::pair<std::int64_t, std::int64_t>> q;
    for (auto [x, y] : seeds) {
      if (!in_box(x, y)) continue;
      if (vis.get(static_cast<int>(x - x0), static_cast<int>(y - y0))) continue;
      vis.set(static_cast<int>(x - x0), static_cast<int>(y - y0), true);
      q.emplace_back(x, y);
    }
    while (!q.empty()) {
      auto [x, y] = q.front();
      q.pop_front();
      auto push = [&](std::int64_t nx, std::int64_t ny) {
        if (!in_box(nx, ny)) return;
        if (vis.get(static_cast<int>(nx - x0), static_cast<int>(ny - y0))) return;
        vis.set(static_cast<int>(nx - x0), static_cast<int>(ny - y0), true);
        q.emplace_back(nx, ny);
      };
      if (h_usable(x, y)) push(x + 1, y);
      if (h_usable(x - 1, y)) push(x - 1, y);
      if (v_usable(x, y)) push(x, y + 1);
      if (v_usable(x, y - 1)) push(x, y - 1);
    }
  };
  Bitfield2D from_a(w, h, false), from_b(w, h, false);
  sweep(a, from_a);
  sweep(b, from_b);
  for (auto [x, y] : b)
    if (in_box(x, y) && from_a.get(static_cast<int>(x - x0), static_cast<int>(y - y0)))
      out.connected = true;
  if (!out.connected) return out;
  auto on_walk = [&](std::int64_t x, std::int64_t y) {
    return in_box(x, y) &&
           from_a.get(static_cast<int>(x - x0), static_cast<int>(y - y0)) &&
           from_b.get(static_cast<int>(x - x0), static_cast<int>(y - y0));
  };
  for (std::int64_t y = y0; y <= y1; ++y)
    for (std::int64_t x = x0; x <= x1; ++x) {
      if (!on_walk(x, y)) continue;
      out.walk.sites.emplace_back(x, y);
      if (on_walk(x + 1, y) && h_usable(x, y)) out.walk.bonds.push_back({true, x, y});
      if (on_walk(x, y + 1) && v_usable(x, y)) out.walk.bonds.push_back({false, x, y});
    }
  sort_skeleton(out.walk);
  return out;
}

std::vector<std::int64_t> block_elements(const GroupingResult& g, const Block& b) {
  std::vector<std::int64_t> out;
  auto lo = std::lower_bound(g.gamma.begin(), g.gamma.end(), b.lo);
  auto hi = std::upper_bound(g.gamma.begin(), g.gamma.end(), b.hi);
  out.assign(lo, hi);
  return out;
}

}  // namespace

std::vector<AxisLevel> build_axis_levels(const GroupingResult& g, std::int64_t site_max,
                                         int N, int k_max) {
  if (N < 2) throw std::invalid_argument("build_axis_levels: N must be >= 2");
  if (k_max < 1) throw std::invalid_argument("build_axis_levels: k_max must be >= 1");
  if (site_max < 0) throw std::invalid_argument("build_axis_levels: empty site window");
  std::vector<AxisLevel> levels;

  // Step 1 walks raw columns [0, site_max].
  {
    AxisLevel lv;
    lv.step = 1;
    std::int64_t cursor = 0;  // first column of the pending region
    int pending_strip = -1;   // delimiter to emit before the next region's slabs
    auto emit_region = [&](std::int64_t lo_col, std::int64_t hi_col, bool interior) {
      std::int64_t d = hi_col - lo_col + 1;
      auto runs = cut_region(lo_col, d, N);
      if (interior && static_cast<std::int64_t>(runs.size()) < 3)
        throw std::logic_error("build_axis_levels: interior region shorter than 3N");
      if (!interior && runs.size() < 3) lv.truncated = true;
      if (runs.empty()) return;
      if (pending_strip >= 0) {
        const Block& b = g.blocks[pending_strip];
        lv.strips.push_back({b.lo, b.hi + 1, b.id, b.mass});
        pending_strip = -1;
      }
      for (std::size_t r = 0; r < runs.size(); ++r) {
        if (r > 0) lv.strips.push_back({runs[r - 1].second, runs[r].first, -1, 0});
        lv.slabs.push_back({runs[r].first, runs[r].second, {}});
      }
    };
    for (int id : delimiter_ids(g, 1)) {
      const Block& b = g.blocks[id];
      if (b.lo > site_max) break;
      emit_region(cursor, b.lo, true);
      pending_strip = id;
      cursor = b.hi + 1;
      if (cursor > site_max) {
        lv.truncated = true;
        break;
      }
    }
    if (cursor <= site_max) emit_region(cursor, site_max, false);
    if (lv.slabs.empty()) return levels;
    levels.push_back(std::move(lv));
  }

  for (int step = 2; step <= k_max; ++step) {
    const AxisLevel& prev = levels.back();
    AxisLevel lv;
    lv.step = step;
    auto delims = delimiter_ids(g, step);
    std::size_t di = 0;
    int pending_strip = -1;
    std::vector<int> region;  // previous-level slab indices
    auto emit_region = [&](bool interior) {
      std::int64_t n = static_cast<std::int64_t>(region.size());
      auto runs = cut_region(0, n, N);
      if (interior && static_cast<std::int64_t>(runs.size()) < 3)
        throw std::logic_error("build_axis_levels: interior region shorter than 3N");
      if (!interior && runs.size() < 3) lv.truncated = true;
      if (!runs.empty()) {
        if (pending_strip >= 0) {
          const Block& b = g.blocks[pending_strip];
          lv.strips.push_back({b.lo, b.hi + 1, b.id, b.mass});
          pending_strip = -1;
        }
        for (std::size_t r = 0; r < runs.size(); ++r) {
          AxisSlab s;
          for (std::int64_t m = runs[r].first; m <= runs[r].second; ++m)
            s.members.push_back(region[static_cast<std::size_t>(m)]);
          s.lo = prev.slabs[s.members.front()].lo;
          s.hi = prev.slabs[s.members.back()].hi;
          if (r > 0) lv.strips.push_back(prev.strips[s.members.front() - 1]);
          lv.slabs.push_back(std::move(s));
        }
      }
      region.clear();
    };
    for (int pi = 0; pi < static_cast<int>(prev.slabs.size()); ++pi) {
      const AxisSlab& s = prev.slabs[pi];
      while (di < delims.size() && g.blocks[delims[di]].hi + 1 <= s.lo) {
        emit_region(true);
        pending_strip = delims[di];
        ++di;
      }
      if (di < delims.size()) {
        const Block& b = g.blocks[delims[di]];
        if (s.lo > b.lo && s.hi < b.hi + 1) continue;  // consumed by the delimiter
        if (s.hi > b.lo)
          throw std::logic_error("build_axis_levels: slab straddles a delimiter span");
      }
      region.push_back(pi);
    }
    emit_region(false);
    lv.truncated = lv.truncated || prev.truncated;
    if (lv.slabs.empty()) break;
    levels.push_back(std::move(lv));
  }
  return levels;
}

RenormChain build_chain(const GroupingResult& gh, const GroupingResult& gv,
                        std::int64_t site_max_h, std::int64_t site_max_v, int N,
                        int k_max) {
  if (N < 2) throw std::invalid_argument("build_chain: N must be >= 2");
  if (gh.M != 3 * N || gv.M != 3 * N)
    throw std::invalid_argument("build_chain: grouping scale must be M = 3N");
  auto sh = chi_and_spaced(gh);
  auto sv = chi_and_spaced(gv);
  if (!sh.m_spaced || !sv.m_spaced)
    throw std::invalid_argument("build_chain: environment is not M-spaced");
  RenormChain c;
  c.N = N;
  c.group_h = gh;
  c.group_v = gv;
  c.site_max_h = site_max_h;
  c.site_max_v = site_max_v;
  c.h_axis = build_axis_levels(gh, site_max_h, N, k_max);
  c.v_axis = build_axis_levels(gv, site_max_v, N, k_max);
  c.k_max = static_cast<int>(std::min(c.h_axis.size(), c.v_axis.size()));
  if (c.k_max == 0) throw std::invalid_argument("build_chain: window hosts no site");
  c.h_axis.resize(c.k_max);
  c.v_axis.resize(c.k_max);
  return c;
}

RenormChain build_chain(const LadderEnvironment& env, int N, int k_max) {
  const int M = 3 * N;
  std::vector<std::int64_t> gh, gv;
  for (int i = 0; i < env.width_h(); ++i)
    if (env.xi_h[i]) gh.push_back(i);
  for (int j = 0; j < env.width_v(); ++j)
    if (env.xi_v[j]) gv.push_back(j);
  GroupingResult rh = run_grouping(gh, M, M, env.width_h());
  GroupingResult rv = run_grouping(gv, M, M, env.width_v());
  return build_chain(rh, rv, env.width_h() - 1, env.width_v() - 1, N, k_max);
}

namespace {

// Openness of one renormalized level, shared between step 1 (raw subgrids)
// and step k (abstract grids over the previous level).
void eval_level_sites_step1(const RenormChain& chain, const BondConfiguration& cfg,
                            RenormLevel& lv) {
  const AxisLevel& ha = chain.h_axis[0];
  const AxisLevel& va = chain.v_axis[0];
  const bool core = chain.geometry == SiteGeometry::CoreCollar;
  const int n_eff = core ? std::max(1, chain.N * 9 / 10) : chain.N;
  for (int j = 0; j < lv.ny; ++j)
    for (int i = 0; i < lv.nx; ++i) {
      auto [hx0, hx1] = core ? core_range(ha.slabs[i].lo, ha.slabs[i].hi)
                             : std::make_pair(ha.slabs[i].lo, ha.slabs[i].hi);
      auto [vy0, vy1] = core ? core_range(va.slabs[j].lo, va.slabs[j].hi)
                             : std::make_pair(va.slabs[j].lo, va.slabs[j].hi);
      SiteBondGrid g = grid_from_config(cfg, static_cast<int>(hx0),
                                        static_cast<int>(vy0), static_cast<int>(hx1),
                                        static_cast<int>(vy1));
      BoxCrossingWitness w = box_crossing_witness(g, chain.rho, n_eff);
      RenormSite& s = lv.site(i, j);
      s.open = w.open;
      if (!w.open) continue;
      for (auto [x, y] : w.sites) s.skel.sites.emplace_back(hx0 + x, vy0 + y);
      for (auto [kind, x, y] : w.bonds)
        s.skel.bonds.push_back({kind == 'H', hx0 + x, vy0 + y});
      sort_skeleton(s.skel);
    }
}

void eval_level_sites_stepk(const RenormChain& chain, RenormLevel& lv, int step) {
  const AxisLevel& ha = chain.h_axis[step - 1];
  const AxisLevel& va = chain.v_axis[step - 1];
  const RenormLevel& prev = chain.levels[step - 2];
  for (int j = 0; j < lv.ny; ++j)
    for (int i = 0; i < lv.nx; ++i) {
      const auto& mh = ha.slabs[i].members;
      const auto& mv = va.slabs[j].members;
      SiteBondGrid g = make_grid(static_cast<int>(mh.size()),
                                 static_cast<int>(mv.size()));
      for (std::size_t y = 0; y < mv.size(); ++y)
        for (std::size_t x = 0; x < mh.size(); ++x)
          g.site_open.set(static_cast<int>(x), static_cast<int>(y),
                          prev.site(mh[x], mv[y]).open);
      for (std::size_t y = 0; y < mv.size(); ++y)
        for (std::size_t x = 0; x + 1 < mh.size(); ++x) {
          const RenormBond& e = prev.hbond(mh[x], mv[y]);
          g.hbond_open.set(static_cast<int>(x), static_cast<int>(y),
                           e.open.has_value() && *e.open);
        }
      for (std::size_t y = 0; y + 1 < mv.size(); ++y)
        for (std::size_t x = 0; x < mh.size(); ++x) {
          const RenormBond& e = prev.vbond(mh[x], mv[y]);
          g.vbond_open.set(static_cast<int>(x), static_cast<int>(y),
                           e.open.has_value() && *e.open);
        }
      BoxCrossingWitness w = box_crossing_witness(g, chain.rho, chain.N);
      RenormSite& s = lv.site(i, j);
      s.open = w.open;
      if (!w.open) continue;
      for (auto [x, y] : w.sites) {
        s.cluster_members.emplace_back(mh[x], mv[y]);
        merge_skeleton(s.skel, prev.site(mh[x], mv[y]).skel);
      }
      for (auto [kind, x, y] : w.bonds) {
        const RenormBond& e = kind == 'H' ? prev.hbond(mh[x], mv[y])
                                          : prev.vbond(mh[x], mv[y]);
        merge_skeleton(s.skel, e.skel);
      }
      std::sort(s.cluster_members.begin(), s.cluster_members.end());
      sort_skeleton(s.skel);
    }
}

// Facing columns of a bond at any step, the flanking transverse removals, and
// the step-0 path query between the two skeletons.
void eval_bond(const RenormChain& chain, const BondConfiguration& cfg, RenormLevel& lv,
               int step, bool horizontal, int i, int j) {
  const AxisLevel& along = horizontal ? chain.h_axis[step - 1] : chain.v_axis[step - 1];
  const AxisLevel& trans = horizontal ? chain.v_axis[step - 1] : chain.h_axis[step - 1];
  const int ai = horizontal ? i : j;   // along-axis index of the left/lower site
  const int ti = horizontal ? j : i;   // transverse index
  const AxisStrip& strip = along.strips[ai];
  RenormBond& e = horizontal ? lv.hbond(i, j) : lv.vbond(i, j);
  e.block_id = strip.block_id;
  e.mass = strip.mass;
  e.good = strip.mass <= step;
  if (!e.good) return;  // left undecided on purpose
  const RenormSite& s1 = lv.site(i, j);
  const RenormSite& s2 = horizontal ? lv.site(i + 1, j) : lv.site(i, j + 1);
  if (!s1.open || !s2.open) {
    e.open = false;
    return;
  }
  const bool core = chain.geometry == SiteGeometry::CoreCollar;
  std::int64_t face1 = strip.lo, face2 = strip.hi;
  std::int64_t t_lo = trans.slabs[ti].lo, t_hi = trans.slabs[ti].hi;
  if (core) {
    face1 = core_range(along.slabs[ai].lo, along.slabs[ai].hi).second;
    face2 = core_range(along.slabs[ai + 1].lo, along.slabs[ai + 1].hi).first;
    std::tie(t_lo, t_hi) = core_range(t_lo, t_hi);
  }

  if (step == 1 && !core) {
    // Good step-1 strips are one ladder wide; a single open bond decides.
    if (face2 != face1 + 1)
      throw std::logic_error("renorm: good step-1 strip wider than one ladder");
    bool any = false;
    for (std::int64_t y = t_lo; y <= t_hi; ++y) {
      bool ok = horizontal
                    ? (skel_has_site(s1.skel, face1, y) &&
                       skel_has_site(s2.skel, face2, y) &&
                       cfg.h_open(static_cast<int>(face1), static_cast<int>(y)))
                    : (skel_has_site(s1.skel, y, face1) &&
                       skel_has_site(s2.skel, y, face2) &&
                       cfg.v_open(static_cast<int>(y), static_cast<int>(face1)));
      if (ok) {
        any = true;
        e.skel.bonds.push_back(horizontal ? Step0Bond{true, face1, y}
                                          : Step0Bond{false, y, face1});
      }
    }
    e.open = any;
    sort_skeleton(e.skel);
    return;
  }

  std::vector<std::pair<std::int64_t, std::int64_t>> a, b;
  for (auto [x, y] : s1.skel.sites)
    if ((horizontal ? x : y) == face1) a.emplace_back(x, y);
  for (auto [x, y] : s2.skel.sites)
    if ((horizontal ? x : y) == face2) b.emplace_back(x, y);

  std::int64_t x0, y0, x1, y1;
  if (chain.mode == PathMode::Restricted) {
    if (horizontal) {
      x0 = face1; x1 = face2; y0 = t_lo; y1 = t_hi;
    } else {
      x0 = t_lo; x1 = t_hi; y0 = face1; y1 = face2;
    }
  } else {
    x0 = 0; y0 = 0; x1 = cfg.n1; y1 = cfg.n2;
  }
  auto h_ok = [&](std::int64_t x, std::int64_t y) {
    if (horizontal) return true;
    return !((y == face1 || y == face2) && x >= t_lo && x < t_hi);
  };
  auto v_ok = [&](std::int64_t x, std::int64_t y) {
    if (!horizontal) return true;
    return !((x == face1 || x == face2) && y >= t_lo && y < t_hi);
  };
  PathQuery q = step0_path(cfg, x0, y0, x1, y1, h_ok, v_ok, a, b);
  e.open = q.connected;
  if (q.connected) e.skel = std::move(q.walk);
}

}  // namespace

void evaluate_openness(RenormChain& chain, const BondConfiguration& cfg, double rho,
                       PathMode mode, SiteGeometry geometry) {
  if (!(rho > 0.75 && rho < 1.0))
    throw std::invalid_argument("evaluate_openness: rho must lie in (3/4, 1)");
  if (chain.h_axis.empty() || chain.v_axis.empty())
    throw std::logic_error("evaluate_openness: chain has no built level");
  if (chain.h_axis[0].slabs.back().hi > cfg.n1 ||
      chain.v_axis[0].slabs.back().hi > cfg.n2)
    throw std::invalid_argument("evaluate_openness: configuration window too small");
  if (geometry == SiteGeometry::CoreCollar && chain.k_max > 1)
    throw std::invalid_argument(
        "evaluate_openness: core-collar geometry is a one-level variant");
  chain.rho = rho;
  chain.mode = mode;
  chain.geometry = geometry;
  chain.levels.assign(static_cast<std::size_t>(chain.k_max), {});
  for (int step = 1; step <= chain.k_max; ++step) {
    RenormLevel& lv = chain.levels[step - 1];
    lv.step = step;
    lv.nx = static_cast<int>(chain.h_axis[step - 1].slabs.size());
    lv.ny = static_cast<int>(chain.v_axis[step - 1].slabs.size());
    lv.sites.assign(static_cast<std::size_t>(lv.nx) * lv.ny, {});
    lv.hbonds.assign(static_cast<std::size_t>(lv.nx - 1) * lv.ny, {});
    lv.vbonds.assign(static_cast<std::size_t>(lv.nx) * (lv.ny - 1), {});
    if (step == 1)
      eval_level_sites_step1(chain, cfg, lv);
    else
      eval_level_sites_stepk(chain, lv, step);
    for (int j = 0; j < lv.ny; ++j)
      for (int i = 0; i + 1 < lv.nx; ++i) eval_bond(chain, cfg, lv, step, true, i, j);
    for (int j = 0; j + 1 < lv.ny; ++j)
      for (int i = 0; i < lv.nx; ++i) eval_bond(chain, cfg, lv, step, false, i, j);
  }
  chain.evaluated = true;
}

bool chained_level0(const BondConfiguration& cfg,
                    const std::vector<std::int64_t>& elements,
                    std::pair<std::int64_t, std::int64_t> psi0,
                    std::pair<std::int64_t, std::int64_t> upsilon0, int N) {
  if (elements.empty()) throw std::invalid_argument("chained_level0: empty block");
  if (!std::is_sorted(elements.begin(), elements.end()))
    throw std::invalid_argument("chained_level0: elements must be sorted");
  bool horizontal;
  if (psi0.second == upsilon0.second && psi0.first != upsilon0.first)
    horizontal = true;
  else if (psi0.first == upsilon0.first && psi0.second != upsilon0.second)
    horizontal = false;
  else
    throw std::invalid_argument("chained_level0: endpoints are not collinear");
  std::int64_t x1 = elements.front(), x2 = elements.back() + 1;
  std::int64_t a1 = horizontal ? psi0.first : psi0.second;
  std::int64_t a2 = horizontal ? upsilon0.first : upsilon0.second;
  if (std::min(a1, a2) != x1 || std::max(a1, a2) != x2)
    throw std::invalid_argument("chained_level0: endpoints must flank the strip");
  std::int64_t r0 = horizontal ? psi0.second : psi0.first;
  std::int64_t t_max = horizontal ? cfg.n2 : cfg.n1;
  std::int64_t a_max = horizontal ? cfg.n1 : cfg.n2;
  if (x2 > a_max || r0 < 0 || r0 > t_max)
    throw std::out_of_range("chained_level0: strip leaves the configuration window");

  int w = isqrt_floor(N);
  std::int64_t r_lo = std::max<std::int64_t>(0, r0 - (w - 1) / 2);
  std::int64_t r_hi = std::min<std::int64_t>(t_max, r0 + w / 2);

  // Transverse moves are barred strictly inside a constituent run and on the
  // strip's outer columns.
  std::vector<char> barred(static_cast<std::size_t>(x2 - x1 + 1), 0);
  barred.front() = barred.back() = 1;
  for (std::size_t s = 0; s < elements.size();) {
    std::size_t t = s;
    while (t + 1 < elements.size() && elements[t + 1] == elements[t] + 1) ++t;
    for (std::int64_t c = elements[s] + 1; c <= elements[t]; ++c)
      barred[static_cast<std::size_t>(c - x1)] = 1;
    s = t + 1;
  }
  auto along_open = [&](std::int64_t c, std::int64_t r) {
    return horizontal ? cfg.h_open(static_cast<int>(c), static_cast<int>(r))
                      : cfg.v_open(static_cast<int>(r), static_cast<int>(c));
  };
  auto trans_open = [&](std::int64_t c, std::int64_t r) {
    return horizontal ? cfg.v_open(static_cast<int>(c), static_cast<int>(r))
                      : cfg.h_open(static_cast<int>(r), static_cast<int>(c));
  };

  int wdt = static_cast<int>(x2 - x1 + 1), hgt = static_cast<int>(r_hi - r_lo + 1);
  Bitfield2D vis(wdt, hgt, false);
  std::deque<std::pair<std::int64_t, std::int64_t>> q;
  vis.set(0, static_cast<int>(r0 - r_lo), true);
  q.emplace_back(x1, r0);
  while (!q.empty()) {
    auto [c, r] = q.front();
    q.pop_front();
    if (c == x2 && r == r0) return true;
    auto push = [&](std::int64_t nc, std::int64_t nr) {
      if (nc < x1 || nc > x2 || nr < r_lo || nr > r_hi) return;
      if (vis.get(static_cast<int>(nc - x1), static_cast<int>(nr - r_lo))) return;
      vis.set(static_cast<int>(nc - x1), static_cast<int>(nr - r_lo), true);
      q.emplace_back(nc, nr);
    };
    if (c < x2 && along_open(c, r)) push(c + 1, r);
    if (c > x1 && along_open(c - 1, r)) push(c - 1, r);
    if (!barred[static_cast<std::size_t>(c - x1)]) {
      if (r < r_hi && trans_open(c, r)) push(c, r + 1);
      if (r > r_lo && trans_open(c, r - 1)) push(c, r - 1);
    }
  }
  return false;
}

bool chained_level0(const BondConfiguration& cfg, const GroupingResult& g, int block_id,
                    std::pair<std::int64_t, std::int64_t> psi0,
                    std::pair<std::int64_t, std::int64_t> upsilon0, int N) {
  if (block_id < 0 || block_id >= static_cast<int>(g.blocks.size()))
    throw std::invalid_argument("chained_level0: unknown block");
  const Block& b = g.blocks[block_id];
  if (b.level > 1)
    throw std::invalid_argument("chained_level0: block level exceeds 1");
  return chained_level0(cfg, block_elements(g, b), psi0, upsilon0, N);
}

namespace {

struct ChainedCtx {
  const RenormChain& chain;
  const BondConfiguration& cfg;
  bool horizontal;  // crossing direction of the queried bond
  std::int64_t calls = 0;
  bool exhausted = false;
  static constexpr std::int64_t call_cap = 100000;

  const GroupingResult& group() const {
    return horizontal ? chain.group_h : chain.group_v;
  }
  const AxisLevel& along_axis(int scale) const {
    return horizontal ? chain.h_axis[scale - 1] : chain.v_axis[scale - 1];
  }
  const RenormSite& site_at(int scale, std::int64_t along, std::int64_t trans) const {
    const RenormLevel& lv = chain.levels[scale - 1];
    return horizontal ? lv.site(static_cast<int>(along), static_cast<int>(trans))
                      : lv.site(static_cast<int>(trans), static_cast<int>(along));
  }
  int pair_budget() const {
    double psi = 2.0 * chain.rho - 1.0;
    int j = static_cast<int>(std::floor(psi / 3.0 *
                                        std::sqrt(static_cast<double>(chain.N))));
    return std::max(1, j);
  }
};

// A side of a crossing: a renormalized site when scale >= 1, a step-0 site
// when scale == 0. Coordinates are (along, trans) in the crossing direction.
struct SideRef {
  int scale = 0;
  std::int64_t along = 0;
  std::int64_t trans = 0;
};

bool chained_rec(ChainedCtx& ctx, int k, const SideRef& left, const SideRef& right,
                 const Block& blk);

// Rows (transverse coordinates) at which the given side touches the facing
// column `face` one scale down.
std::vector<std::int64_t> facing_rows(const ChainedCtx& ctx, const SideRef& side,
                                      std::int64_t face) {
  std::vector<std::int64_t> rows;
  const RenormSite& s = ctx.site_at(side.scale, side.along, side.trans);
  if (side.scale == 1) {
    for (auto [x, y] : s.skel.sites)
      if ((ctx.horizontal ? x : y) == face) rows.push_back(ctx.horizontal ? y : x);
  } else {
    const AxisLevel& sub = ctx.along_axis(side.scale - 1);
    for (auto [gi, gj] : s.cluster_members) {
      std::int64_t al = ctx.horizontal ? gi : gj;
      std::int64_t tr = ctx.horizontal ? gj : gi;
      const AxisSlab& slab = sub.slabs[static_cast<std::size_t>(al)];
      if (slab.hi == face || slab.lo == face) rows.push_back(tr);
    }
  }
  std::sort(rows.begin(), rows.end());
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  return rows;
}

SideRef sub_side(const ChainedCtx& ctx, const SideRef& side, std::int64_t face,
                 std::int64_t row) {
  if (side.scale == 1) return {0, face, row};
  const AxisLevel& sub = ctx.along_axis(side.scale - 1);
  for (std::size_t a = 0; a < sub.slabs.size(); ++a)
    if (sub.slabs[a].lo == face || sub.slabs[a].hi == face) {
      // Disambiguate by membership in the parent's cluster.
      const RenormSite& s = ctx.site_at(side.scale, side.along, side.trans);
      std::int64_t gi = ctx.horizontal ? static_cast<std::int64_t>(a) : row;
      std::int64_t gj = ctx.horizontal ? row : static_cast<std::int64_t>(a);
      if (std::binary_search(s.cluster_members.begin(), s.cluster_members.end(),
                             std::make_pair(static_cast<int>(gi), static_cast<int>(gj))))
        return {side.scale - 1, static_cast<std::int64_t>(a), row};
    }
  return {side.scale - 1, -1, row};  // caller treats -1 as absent
}

// Open renormalized path at scale k between two sites, confined to slab
// columns inside [glo, ghi] and rows within the strip window around j_ref.
bool renorm_gap_path(const ChainedCtx& ctx, int k, const SideRef& from,
                     const SideRef& to, std::int64_t glo, std::int64_t ghi,
                     std::int64_t j_ref) {
  const AxisLevel& axis = ctx.along_axis(k);
  const RenormLevel& lv = ctx.chain.levels[k - 1];
  std::int64_t t_n = ctx.horizontal ? lv.ny : lv.nx;
  int win = isqrt_floor(ctx.chain.N);
  auto admissible = [&](std::int64_t al, std::int64_t tr) {
    if (al < 0 || al >= static_cast<std::int64_t>(axis.slabs.size())) return false;
    if (tr < 0 || tr >= t_n) return false;
    if (axis.slabs[static_cast<std::size_t>(al)].lo < glo ||
        axis.slabs[static_cast<std::size_t>(al)].hi > ghi)
      return false;
    if ((tr > j_ref ? tr - j_ref : j_ref - tr) > win) return false;
    return ctx.site_at(k, al, tr).open;
  };
  auto bond_open = [&](std::int64_t al, std::int64_t tr, bool along_move) {
    const RenormLevel& l = lv;
    const RenormBond& e =
        ctx.horizontal
            ? (along_move ? l.hbond(static_cast<int>(al), static_cast<int>(tr))
                          : l.vbond(static_cast<int>(al), static_cast<int>(tr)))
            : (along_move ? l.vbond(static_cast<int>(tr), static_cast<int>(al))
                          : l.hbond(static_cast<int>(tr), static_cast<int>(al)));
    return e.good && e.open.has_value() && *e.open;
  };
  if (!admissible(from.along, from.trans) || !admissible(to.along, to.trans))
    return false;
  std::deque<std::pair<std::int64_t, std::int64_t>> q;
  std::vector<std::pair<std::int64_t, std::int64_t>> seen;
  auto visit = [&](std::int64_t al, std::int64_t tr) {
    auto p = std::make_pair(al, tr);
    if (std::find(seen.begin(), seen.end(), p) != seen.end()) return;
    seen.push_back(p);
    q.emplace_back(al, tr);
  };
  visit(from.along, from.trans);
  while (!q.empty()) {
    auto [al, tr] = q.front();
    q.pop_front();
    if (al == to.along && tr == to.trans) return true;
    if (admissible(al + 1, tr) && bond_open(al, tr, true)) visit(al + 1, tr);
    if (admissible(al - 1, tr) && bond_open(al - 1, tr, true)) visit(al - 1, tr);
    if (admissible(al, tr + 1) && bond_open(al, tr, false)) visit(al, tr + 1);
    if (admissible(al, tr - 1) && bond_open(al, tr - 1, false)) visit(al, tr - 1);
  }
  return false;
}

// Case of the descent: matched facing pairs one scale down, budgeted.
bool chained_descend(ChainedCtx& ctx, int k, const SideRef& left, const SideRef& right,
                     const Block& blk) {
  std::int64_t face1 = blk.lo, face2 = blk.hi + 1;
  auto rows_l = facing_rows(ctx, left, face1);
  auto rows_r = facing_rows(ctx, right, face2);
  std::vector<std::int64_t> common;
  std::set_intersection(rows_l.begin(), rows_l.end(), rows_r.begin(), rows_r.end(),
                        std::back_inserter(common));
  int budget = ctx.pair_budget();
  std::int64_t spacing = isqrt_floor(ctx.chain.N);
  if (spacing * spacing < ctx.chain.N) ++spacing;
  std::int64_t last = std::numeric_limits<std::int64_t>::min();
  int used = 0;
  for (std::int64_t r : common) {
    if (used >= budget) break;
    if (last != std::numeric_limits<std::int64_t>::min() && r - last < spacing) continue;
    SideRef sl = sub_side(ctx, left, face1, r);
    SideRef sr = sub_side(ctx, right, face2, r);
    if (sl.along < 0 && sl.scale > 0) continue;
    if (sr.along < 0 && sr.scale > 0) continue;
    last = r;
    ++used;
    if (chained_rec(ctx, k - 1, sl, sr, blk)) return true;
  }
  return false;
}

// Constituent walk at the block's own level: facing sites across every
// constituent, gap paths between them, recursive chaining through each.
bool chained_constituents(ChainedCtx& ctx, int k, const SideRef& left,
                          const SideRef& right, const Block& blk) {
  const GroupingResult& g = ctx.group();
  std::vector<const Block*> parts;
  for (int id : blk.constituents) parts.push_back(&g.blocks[id]);
  std::sort(parts.begin(), parts.end(),
            [](const Block* a, const Block* b) { return a->lo < b->lo; });
  int r = static_cast<int>(parts.size());
  if (r < 2) return chained_descend(ctx, k, left, right, blk);

  const AxisLevel& axis = ctx.along_axis(k);
  const RenormLevel& lv = ctx.chain.levels[k - 1];
  std::int64_t t_n = ctx.horizontal ? lv.ny : lv.nx;
  int win = isqrt_floor(ctx.chain.N);
  std::int64_t j_ref = left.trans;
  auto candidates = [&](std::int64_t face, bool face_is_hi) {
    std::vector<SideRef> out;
    for (std::size_t a = 0; a < axis.slabs.size(); ++a) {
      if (face_is_hi ? axis.slabs[a].hi != face : axis.slabs[a].lo != face) continue;
      for (std::int64_t tr = std::max<std::int64_t>(0, j_ref - win);
           tr <= std::min<std::int64_t>(t_n - 1, j_ref + win); ++tr)
        if (ctx.site_at(k, static_cast<std::int64_t>(a), tr).open)
          out.push_back({k, static_cast<std::int64_t>(a), tr});
    }
    return out;
  };

  // exits[c]: sites just right of constituent c; entries[c]: just left of it.
  std::vector<std::vector<SideRef>> exits(r), entries(r);
  for (int c = 0; c < r; ++c) {
    entries[c] = c == 0 ? std::vector<SideRef>{left} : candidates(parts[c]->lo, true);
    exits[c] = c == r - 1 ? std::vector<SideRef>{right}
                          : candidates(parts[c]->hi + 1, false);
  }

  std::function<bool(int, const SideRef&)> walk = [&](int c, const SideRef& from) {
    if (ctx.calls > ChainedCtx::call_cap) {
      ctx.exhausted = true;
      return false;
    }
    if (c == r) return true;
    for (const SideRef& en : entries[c]) {
      if (c > 0) {
        std::int64_t glo = parts[c - 1]->hi + 1, ghi = parts[c]->lo;
        if (!renorm_gap_path(ctx, k, from, en, glo, ghi, j_ref)) continue;
      }
      for (const SideRef& ex : exits[c]) {
        if (!chained_rec(ctx, k, en, ex, *parts[c])) continue;
        if (walk(c + 1, ex)) return true;
      }
    }
    return false;
  };
  return walk(0, left);
}

bool chained_rec(ChainedCtx& ctx, int k, const SideRef& left, const SideRef& right,
                 const Block& blk) {
  if (++ctx.calls > ChainedCtx::call_cap) {
    ctx.exhausted = true;
    return false;
  }
  if (k == 0) {
    std::pair<std::int64_t, std::int64_t> p =
        ctx.horizontal ? std::make_pair(left.along, left.trans)
                       : std::make_pair(left.trans, left.along);
    std::pair<std::int64_t, std::int64_t> u =
        ctx.horizontal ? std::make_pair(right.along, right.trans)
                       : std::make_pair(right.trans, right.along);
    return chained_level0(ctx.cfg, block_elements(ctx.group(), blk), p, u,
                          ctx.chain.N);
  }
  if (left.scale >= 1 && !ctx.site_at(left.scale, left.along, left.trans).open)
    return false;
  if (right.scale >= 1 && !ctx.site_at(right.scale, right.along, right.trans).open)
    return false;
  if (k >= std::max(1, blk.level)) return chained_descend(ctx, k, left, right, blk);
  return chained_constituents(ctx, k, left, right, blk);
}

}  // namespace

ChainedResult chained_through(const RenormChain& chain, const BondConfiguration& cfg,
                              int step, Orientation orient, int i, int j) {
  if (!chain.evaluated) throw std::logic_error("chained_through: chain not evaluated");
  if (step < 2 || step > chain.k_max)
    throw std::invalid_argument("chained_through: step out of range");
  const RenormLevel& lv = chain.levels[step - 1];
  const bool horizontal = orient == Orientation::H;
  if (i < 0 || j < 0 || (horizontal && (i + 1 >= lv.nx || j >= lv.ny)) ||
      (!horizontal && (i >= lv.nx || j + 1 >= lv.ny)))
    throw std::invalid_argument("chained_through: no such bond");
  const RenormBond& e = horizontal ? lv.hbond(i, j) : lv.vbond(i, j);
  if (e.block_id < 0 || e.mass != step)
    throw std::invalid_argument("chained_through: bond mass must equal the step");
  ChainedCtx ctx{chain, cfg, horizontal};
  const Block& blk = ctx.group().blocks[e.block_id];
  SideRef left, right;
  if (horizontal) {
    left = {step, i, j};
    right = {step, i + 1, j};
  } else {
    left = {step, j, i};
    right = {step, j + 1, i};
  }
  ChainedResult res;
  res.chained = chained_rec(ctx, step, left, right, blk);
  res.budget_exhausted = ctx.exhausted;
  res.calls = ctx.calls;
  return res;
}

PercolationCheck origin_percolates_renormalized(const RenormChain& chain,
                                                const BondConfiguration& cfg) {
  if (!chain.evaluated)
    throw std::logic_error("origin_percolates_renormalized: chain not evaluated");
  const RenormLevel& top = chain.levels.back();
  PercolationCheck out;
  if (!top.site(0, 0).open) return out;

  const int nx = top.nx, ny = top.ny;
  std::vector<int> parent(static_cast<std::size_t>(nx) * ny, -2);
  auto idx = [&](int i, int j) { return j * nx + i; };
  std::deque<std::pair<int, int>> q;
  parent[0] = -1;
  q.emplace_back(0, 0);
  int goal = -1;
  while (!q.empty() && goal < 0) {
    auto [i, j] = q.front();
    q.pop_front();
    if (i == nx - 1 || j == ny - 1) {
      goal = idx(i, j);
      break;
    }
    auto try_move = [&](int ni, int nj, const RenormBond& e) {
      if (!e.good || !e.open.has_value() || !*e.open) return;
      if (!top.site(ni, nj).open) return;
      if (parent[idx(ni, nj)] != -2) return;
      parent[idx(ni, nj)] = idx(i, j);
      q.emplace_back(ni, nj);
    };
    if (i + 1 < nx) try_move(i + 1, j, top.hbond(i, j));
    if (i > 0) try_move(i - 1, j, top.hbond(i - 1, j));
    if (j + 1 < ny) try_move(i, j + 1, top.vbond(i, j));
    if (j > 0) try_move(i, j - 1, top.vbond(i, j - 1));
  }
  if (goal < 0) return out;
  out.percolates = true;

  Skeleton uni;
  int cur = goal;
  while (cur >= 0) {
    int i = cur % nx, j = cur / nx;
    merge_skeleton(uni, top.site(i, j).skel);
    int par = parent[static_cast<std::size_t>(cur)];
    if (par >= 0) {
      int pi = par % nx, pj = par / nx;
      const RenormBond& e = pi != i ? top.hbond(std::min(i, pi), j)
                                    : top.vbond(i, std::min(j, pj));
      merge_skeleton(uni, e.skel);
    }
    cur = par;
  }
  sort_skeleton(uni);
  for (const Step0Bond& b : uni.bonds) {
    bool open = b.horizontal ? cfg.h_open(static_cast<int>(b.x), static_cast<int>(b.y))
                             : cfg.v_open(static_cast<int>(b.x), static_cast<int>(b.y));
    if (!open)
      throw std::logic_error("origin_percolates_renormalized: closed skeleton bond");
  }
  out.path_union = uni;

  // Replay: inside the union subgraph, the origin site's skeleton must reach
  // the far edge of the built window.
  std::int64_t far_x = chain.h_axis[chain.k_max - 1].slabs.back().hi;
  std::int64_t far_y = chain.v_axis[chain.k_max - 1].slabs.back().hi;
  std::vector<char> visited(uni.sites.size(), 0);
  auto site_index = [&](std::int64_t x, std::int64_t y) -> int {
    auto it = std::lower_bound(uni.sites.begin(), uni.sites.end(), std::make_pair(x, y));
    if (it == uni.sites.end() || *it != std::make_pair(x, y)) return -1;
    return static_cast<int>(it - uni.sites.begin());
  };
  std::deque<int> bq;
  for (auto [x, y] : top.site(0, 0).skel.sites) {
    int s = site_index(x, y);
    if (s >= 0 && !visited[static_cast<std::size_t>(s)]) {
      visited[static_cast<std::size_t>(s)] = 1;
      bq.push_back(s);
    }
  }
  bool reached = false;
  while (!bq.empty() && !reached) {
    int s = bq.front();
    bq.pop_front();
    auto [x, y] = uni.sites[static_cast<std::size_t>(s)];
    if (x == far_x || y == far_y) {
      reached = true;
      break;
    }
    auto hop = [&](std::int64_t nxs, std::int64_t nys, bool horiz, std::int64_t bx,
                   std::int64_t by) {
      auto kb = std::make_tuple(horiz, bx, by);
      auto it = std::lower_bound(uni.bonds.begin(), uni.bonds.end(), kb,
                                 [](const Step0Bond& s0, const std::tuple<bool, std::int64_t, std::int64_t>& t) {
                                   return std::make_tuple(s0.horizontal, s0.x, s0.y) < t;
                                 });
      if (it == uni.bonds.end() ||
          std::make_tuple(it->horizontal, it->x, it->y) != kb)
        return;
      int ns = site_index(nxs, nys);
      if (ns < 0 || visited[static_cast<std::size_t>(ns)]) return;
      visited[static_cast<std::size_t>(ns)] = 1;
      bq.push_back(ns);
    };
    hop(x + 1, y, true, x, y);
    hop(x - 1, y, true, x - 1, y);
    hop(x, y + 1, false, x, y);
    hop(x, y - 1, false, x, y - 1);
  }
  out.replay_ok = reached;
  return out;
}

void write_lattice_csv(std::ostream& os, const RenormChain& chain) {
  os << "step,kind,i,j,x_lo,x_hi,y_lo,y_hi,good,open\n";
  for (int step = 1; step <= chain.k_max; ++step) {
    const AxisLevel& ha = chain.h_axis[step - 1];
    const AxisLevel& va = chain.v_axis[step - 1];
    const RenormLevel* lv =
        chain.evaluated ? &chain.levels[static_cast<std::size_t>(step - 1)] : nullptr;
    int nx = static_cast<int>(ha.slabs.size()), ny = static_cast<int>(va.slabs.size());
    auto open_str = [&](const std::optional<bool>& o) {
      return !o.has_value() ? std::string() : std::string(*o ? "1" : "0");
    };
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        os << step << ",site," << i << ',' << j << ',' << ha.slabs[i].lo << ','
           << ha.slabs[i].hi << ',' << va.slabs[j].lo << ',' << va.slabs[j].hi << ",,";
        if (lv) os << (lv->site(i, j).open ? '1' : '0');
        os << '\n';
      }
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i + 1 < nx; ++i) {
        const AxisStrip& st = ha.strips[i];
        os << step << ",hbond," << i << ',' << j << ',' << st.lo << ',' << st.hi << ','
           << va.slabs[j].lo << ',' << va.slabs[j].hi << ','
           << (st.mass <= step ? '1' : '0') << ',';
        if (lv) os << open_str(lv->hbond(i, j).open);
        os << '\n';
      }
    for (int j = 0; j + 1 < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const AxisStrip& st = va.strips[j];
        os << step << ",vbond," << i << ',' << j << ',' << ha.slabs[i].lo << ','
           << ha.slabs[i].hi << ',' << st.lo << ',' << st.hi << ','
           << (st.mass <= step ? '1' : '0') << ',';
        if (lv) os << open_str(lv->vbond(i, j).open);
        os << '\n';
      }
  }
}

void write_skeleton_text(std::ostream& os, const RenormChain& chain, int step, int i,
                         int j) {
  if (!chain.evaluated) throw std::logic_error("write_skeleton_text: not evaluated");
  if (step < 1 || step > chain.k_max)
    throw std::invalid_argument("write_skeleton_text: step out of range");
  const RenormLevel& lv = chain.levels[static_cast<std::size_t>(step - 1)];
  if (i < 0 || i >= lv.nx || j < 0 || j >= lv.ny)
    throw std::invalid_argument("write_skeleton_text: no such site");
  const Skeleton& s = lv.site(i, j).skel;
  for (auto [x, y] : s.sites) os << "site " << x << ' ' << y << '\n';
  for (const Step0Bond& b : s.bonds)
    os << (b.horizontal ? "hbond " : "vbond ") << b.x << ' ' << b.y << '\n';
}

}  // namespace perclab
