#include "perclab/grouping.hpp"

#include <algorithm>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace perclab {

const std::vector<int>& GroupingResult::partition_at(int k) const {
  if (k < 0) throw std::invalid_argument("partition_at: negative step");
  if (partitions.empty()) throw std::logic_error("partition_at: empty result");
  std::size_t i = std::min<std::size_t>(k, partitions.size() - 1);
  return partitions[i];
}

std::int64_t pow_clamped(std::int64_t base, int exp) {
  const std::int64_t cap = std::numeric_limits<std::int64_t>::max() / 4;
  std::int64_t v = 1;
  for (int i = 0; i < exp; ++i) {
    if (v > cap / base) return cap;
    v *= base;
  }
  return v;
}

GroupingResult run_grouping(const std::vector<std::int64_t>& gamma, int M, int L,
                            std::int64_t window_width) {
  if (M < 3) throw std::invalid_argument("run_grouping: M must be at least 3");
  if (L < 2) throw std::invalid_argument("run_grouping: L must be at least 2");
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    if (gamma[i] < 0)
      throw std::invalid_argument("run_grouping: positions must be non-negative");
    if (i > 0 && gamma[i] <= gamma[i - 1])
      throw std::invalid_argument("run_grouping: gamma must be strictly increasing");
  }

  GroupingResult g;
  g.gamma = gamma;
  g.M = M;
  g.L = L;
  g.window_width = window_width;

  for (std::size_t i = 0; i < gamma.size(); ++i) {
    Block b;
    b.lo = b.hi = gamma[i];
    b.mass = 1;
    b.level = 0;
    b.id = static_cast<int>(i);
    g.blocks.push_back(b);
  }
  std::vector<int> current(gamma.size());
  for (std::size_t i = 0; i < gamma.size(); ++i) current[i] = static_cast<int>(i);
  g.partitions.push_back(current);

  if (!gamma.empty()) {
    // Step 1: maximal runs of successive gaps < M.
    std::vector<int> next;
    std::size_t i = 0;
    while (i < gamma.size()) {
      std::size_t j = i;
      while (j + 1 < gamma.size() && gamma[j + 1] - gamma[j] < M) ++j;
      if (j > i) {
        Block b;
        b.lo = gamma[i];
        b.hi = gamma[j];
        b.mass = static_cast<int>(j - i + 1);
        b.level = 1;
        b.id = static_cast<int>(g.blocks.size());
        for (std::size_t t = i; t <= j; ++t) {
          b.constituents.push_back(static_cast<int>(t));
          g.blocks[t].parent = b.id;
        }
        g.blocks.push_back(b);
        next.push_back(b.id);
      } else {
        next.push_back(static_cast<int>(i));
      }
      i = j + 1;
    }
    g.partitions.push_back(next);
    current = std::move(next);

    // Steps k >= 2 over blocks of mass >= k. Once fewer than two such blocks
    // remain no later step can form a run, so the partition is final.
    for (int step = 2;; ++step) {
      std::vector<std::size_t> cand;  // indices into current
      for (std::size_t c = 0; c < current.size(); ++c)
        if (g.blocks[current[c]].mass >= step) cand.push_back(c);
      if (cand.size() <= 1) break;

      std::int64_t thr = pow_clamped(L, step);
      std::vector<std::pair<std::size_t, std::size_t>> runs;  // over cand indices
      std::size_t a = 0;
      while (a < cand.size()) {
        std::size_t b = a;
        while (b + 1 < cand.size() &&
               g.blocks[current[cand[b + 1]]].lo - g.blocks[current[cand[b]]].hi < thr)
          ++b;
        if (b > a) runs.emplace_back(a, b);
        a = b + 1;
      }
      if (runs.empty()) {
        g.partitions.push_back(current);
        continue;
      }

      std::vector<int> next2;
      std::size_t run_idx = 0;
      std::size_t c = 0;
      while (c < current.size()) {
        if (run_idx < runs.size() && c == cand[runs[run_idx].first]) {
          auto [ra, rb] = runs[run_idx];
          Block nb;
          nb.lo = g.blocks[current[cand[ra]]].lo;
          nb.hi = g.blocks[current[cand[rb]]].hi;
          nb.level = step;
          nb.id = static_cast<int>(g.blocks.size());
          int mass_sum = 0;
          for (std::size_t t = ra; t <= rb; ++t) {
            nb.constituents.push_back(current[cand[t]]);
            mass_sum += g.blocks[current[cand[t]]].mass;
          }
          nb.mass = mass_sum - (step - 1) * static_cast<int>(rb - ra);
          // Everything in the span is absorbed, run members and smaller
          // blocks sitting between them alike.
          std::size_t stop = c;
          while (stop < current.size() && g.blocks[current[stop]].hi <= nb.hi) {
            g.blocks[current[stop]].parent = nb.id;
            ++stop;
          }
          g.blocks.push_back(nb);
          next2.push_back(nb.id);
          c = stop;
          ++run_idx;
        } else {
          next2.push_back(current[c]);
          ++c;
        }
      }
      g.partitions.push_back(next2);
      current = std::move(next2);
    }
  }

  while (g.partitions.size() >= 2 &&
         g.partitions.back() == g.partitions[g.partitions.size() - 2])
    g.partitions.pop_back();
  g.stabilization_step = static_cast<int>(g.partitions.size()) - 1;

  if (window_width >= 0 && !gamma.empty()) {
    std::int64_t guard = pow_clamped(L, g.stabilization_step + 2);
    g.truncated = gamma.back() > window_width - guard;
  }
  return g;
}

SpacingReport chi_and_spaced(const GroupingResult& g) {
  SpacingReport r;
  r.truncated = g.truncated;
  for (const Block& b : g.blocks) {
    bool in_universe;
    if (b.level >= 1) {
      in_universe = true;
    } else {
      // A singleton counts unless a step-1 run absorbed it (then it never
      // appears in any C_l with l >= 1).
      in_universe = b.parent == -1 || g.blocks[b.parent].level >= 2;
    }
    if (!in_universe) continue;
    if (b.lo < pow_clamped(g.L, b.mass)) r.chi = std::max(r.chi, b.mass);
  }
  r.m_spaced = r.chi == 0;
  return r;
}

int kappa_of(const GroupingResult& g, std::int64_t x) {
  if (!std::binary_search(g.gamma.begin(), g.gamma.end(), x))
    throw std::invalid_argument("kappa_of: x is not a bad position");
  int k = 0;
  for (const Block& b : g.blocks)
    if (b.lo <= x && x <= b.hi) k = std::max(k, b.level);
  return k;
}

namespace {

std::int64_t count_in(const std::vector<std::int64_t>& gamma, std::int64_t lo,
                      std::int64_t hi) {
  auto a = std::lower_bound(gamma.begin(), gamma.end(), lo);
  auto b = std::upper_bound(gamma.begin(), gamma.end(), hi);
  return b - a;
}

bool in_gamma(const std::vector<std::int64_t>& gamma, std::int64_t x) {
  return std::binary_search(gamma.begin(), gamma.end(), x);
}

void add_violation(VerifyReport& rep, int step, const std::string& clause, int a, int b,
                   const std::string& detail) {
  rep.violations.push_back({step, clause, a, b, detail});
}

}  // namespace

VerifyReport verify_partition_properties(const GroupingResult& g) {
  VerifyReport rep;
  std::int64_t total = static_cast<std::int64_t>(g.gamma.size());

  for (std::size_t k = 0; k < g.partitions.size(); ++k) {
    const auto& part = g.partitions[k];
    std::int64_t covered = 0;
    for (std::size_t i = 0; i < part.size(); ++i) {
      const Block& b = g.blocks[part[i]];
      if (!in_gamma(g.gamma, b.lo) || !in_gamma(g.gamma, b.hi))
        add_violation(rep, static_cast<int>(k), "span-closure", b.id, -1,
                      "span endpoint is not a bad position");
      if (b.level >= b.mass)
        add_violation(rep, static_cast<int>(k), "level-below-mass", b.id, -1,
                      "level " + std::to_string(b.level) + " >= mass " +
                          std::to_string(b.mass));
      if (b.level > static_cast<int>(k))
        add_violation(rep, static_cast<int>(k), "level-bound", b.id, -1,
                      "level exceeds partition step");
      if (i > 0) {
        const Block& a = g.blocks[part[i - 1]];
        if (a.hi >= b.lo)
          add_violation(rep, static_cast<int>(k), "order-disjoint", a.id, b.id,
                        "spans overlap or out of order");
      }
      covered += count_in(g.gamma, b.lo, b.hi);
    }
    if (covered != total)
      add_violation(rep, static_cast<int>(k), "coverage", -1, -1,
                    "blocks cover " + std::to_string(covered) + " of " +
                        std::to_string(total) + " positions");
    if (k >= 1) {
      for (std::size_t i = 0; i < part.size(); ++i)
        for (std::size_t j = i + 1; j < part.size(); ++j) {
          const Block& a = g.blocks[part[i]];
          const Block& b = g.blocks[part[j]];
          int m = std::min({a.mass, b.mass, static_cast<int>(k)});
          std::int64_t need = pow_clamped(g.L, m);
          if (b.lo - a.hi < need)
            add_violation(rep, static_cast<int>(k), "spacing", a.id, b.id,
                          "distance " + std::to_string(b.lo - a.hi) + " < L^" +
                              std::to_string(m));
        }
    }
  }

  for (const Block& b : g.blocks) {
    if (b.constituents.empty()) continue;
    int sum = 0;
    for (int c : b.constituents) sum += g.blocks[c].mass;
    int expect = sum - (b.level - 1) * static_cast<int>(b.constituents.size() - 1);
    if (b.mass != expect)
      add_violation(rep, b.level, "mass-bookkeeping", b.id, -1,
                    "mass " + std::to_string(b.mass) + " != " + std::to_string(expect));
    if (g.blocks[b.constituents.front()].lo != b.lo ||
        g.blocks[b.constituents.back()].hi != b.hi)
      add_violation(rep, b.level, "span-from-run", b.id, -1,
                    "span does not match first/last run member");
  }
  return rep;
}

namespace {

// Mass of the unique limiting block of the restricted positions, if the
// restricted grouping indeed collapses to one block.
std::optional<int> single_block_mass(const std::vector<std::int64_t>& sub, int M, int L) {
  if (sub.empty()) return std::nullopt;
  GroupingResult r = run_grouping(sub, M, L);
  const auto& fin = r.partitions.back();
  if (fin.size() != 1) return std::nullopt;
  return r.blocks[fin[0]].mass;
}

struct DecompSearch {
  const std::vector<std::int64_t>* positions;
  std::int64_t maxc;
  int M, L;
  DescendingDecomposition out;

  std::vector<std::int64_t> slice(std::int64_t lo, std::int64_t hi) const {
    std::vector<std::int64_t> s;
    for (auto x : *positions)
      if (x >= lo && x <= hi) s.push_back(x);
    return s;
  }

  bool tail_ok(std::int64_t gv) const {
    if (!(maxc - M < gv)) return false;
    for (auto x : *positions)
      if (x > gv && x < maxc) return false;
    return true;
  }

  // Place one segment starting at fs with exact mass tm, then either close
  // the decomposition or continue with a smaller mass whose gap window
  // admits the next start.
  bool seg(std::int64_t fs, int tm, std::vector<std::int64_t>& f,
           std::vector<std::int64_t>& gcuts, std::vector<int>& masses) {
    for (auto gs : *positions) {
      if (gs < fs || gs > maxc - 1) continue;
      auto mb = single_block_mass(slice(fs, gs), M, L);
      if (!mb || *mb != tm) continue;
      f.push_back(fs);
      gcuts.push_back(gs);
      masses.push_back(tm);
      if (tail_ok(gs)) {
        out.found = true;
        out.f = f;
        out.g = gcuts;
        out.masses = masses;
        return true;
      }
      for (auto fn : *positions) {
        if (fn <= gs) continue;
        std::int64_t gap = fn - gs;
        for (int nm = tm - 1; nm >= 1; --nm) {
          if (gap < pow_clamped(M, nm) || gap > pow_clamped(M, nm + 1)) continue;
          if (seg(fn, nm, f, gcuts, masses)) return true;
        }
      }
      f.pop_back();
      gcuts.pop_back();
      masses.pop_back();
    }
    return false;
  }
};

}  // namespace

DescendingDecomposition descending_decomposition(const GroupingResult& g, int block_id) {
  if (block_id < 0 || block_id >= static_cast<int>(g.blocks.size()))
    throw std::invalid_argument("descending_decomposition: bad block id");
  const Block& b = g.blocks[block_id];
  if (b.mass < 2)
    throw std::invalid_argument("descending_decomposition: block mass must be >= 2");

  std::vector<std::int64_t> positions;
  for (auto x : g.gamma)
    if (x >= b.lo && x <= b.hi) positions.push_back(x);

  DecompSearch s;
  s.positions = &positions;
  s.maxc = b.hi;
  s.M = g.M;
  s.L = g.L;

  std::vector<std::int64_t> f, gc;
  std::vector<int> masses;
  s.seg(b.lo, b.mass - 1, f, gc, masses);
  if (!s.out.found)
    s.out.failure = "no cut sequence over the block's bad positions satisfies all clauses";
  return s.out;
}

VerifyReport verify_decomposition(const GroupingResult& g, int block_id,
                                  const DescendingDecomposition& dd) {
  VerifyReport rep;
  const Block& b = g.blocks[block_id];
  if (!dd.found) {
    add_violation(rep, -1, "found", block_id, -1, "decomposition not found");
    return rep;
  }
  std::size_t v = dd.f.size();
  if (dd.g.size() != v || dd.masses.size() != v) {
    add_violation(rep, -1, "shape", block_id, -1, "f/g/mass length mismatch");
    return rep;
  }
  if (v == 0 || dd.f[0] != b.lo)
    add_violation(rep, -1, "anchor", block_id, -1, "f_1 must equal min of the block");
  for (std::size_t s = 0; s < v; ++s) {
    if (dd.f[s] > dd.g[s])
      add_violation(rep, -1, "interleave", block_id, -1, "f_s > g_s");
    if (s + 1 < v && dd.g[s] >= dd.f[s + 1])
      add_violation(rep, -1, "interleave", block_id, -1, "g_s >= f_(s+1)");
  }
  if (v > 0 && dd.g[v - 1] > b.hi - 1)
    add_violation(rep, -1, "interleave", block_id, -1, "g_v beyond span top - 1");
  if (v > 0 && dd.masses[0] != b.mass - 1)
    add_violation(rep, -1, "first-mass", block_id, -1, "first mass must be m-1");
  for (std::size_t s = 0; s + 1 < v; ++s)
    if (dd.masses[s] <= dd.masses[s + 1])
      add_violation(rep, -1, "descending", block_id, -1, "masses must strictly decrease");
  for (std::size_t s = 0; s < v; ++s) {
    std::vector<std::int64_t> sub;
    for (auto x : g.gamma)
      if (x >= dd.f[s] && x <= dd.g[s]) sub.push_back(x);
    auto mb = single_block_mass(sub, g.M, g.L);
    if (!mb)
      add_violation(rep, -1, "segment-block", block_id, -1,
                    "segment does not collapse to a single block");
    else if (*mb != dd.masses[s])
      add_violation(rep, -1, "segment-mass", block_id, -1,
                    "segment mass " + std::to_string(*mb) + " != " +
                        std::to_string(dd.masses[s]));
    if (s >= 1) {
      std::int64_t gap = dd.f[s] - dd.g[s - 1];
      if (gap < pow_clamped(g.M, dd.masses[s]) || gap > pow_clamped(g.M, dd.masses[s] + 1))
        add_violation(rep, -1, "gap-window", block_id, -1,
                      "gap " + std::to_string(gap) + " outside [M^m, M^(m+1)]");
    }
  }
  if (v > 0) {
    if (!(b.hi - g.M < dd.g[v - 1]))
      add_violation(rep, -1, "tail-near-top", block_id, -1,
                    "g_v not within M of the span top");
    for (auto x : g.gamma)
      if (x > dd.g[v - 1] && x < b.hi)
        add_violation(rep, -1, "tail-empty", block_id, -1,
                      "bad position strictly between g_v and span top");
  }
  return rep;
}

void write_blocks_csv(std::ostream& os, const GroupingResult& g) {
  os << "id,step,min,max,mass,level,parent_id\n";
  for (const Block& b : g.blocks)
    os << b.id << ',' << b.level << ',' << b.lo << ',' << b.hi << ',' << b.mass << ','
       << b.level << ',' << b.parent << '\n';
}

}  // namespace perclab
