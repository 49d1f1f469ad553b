#pragma once

// Reference grouping: iterates the merge rule unconditionally for
// |gamma| + 2 steps with no early-stop reasoning, tracking every partition.
// Slow and literal on purpose.

#include <cstdint>
#include <vector>

namespace testsupport {

struct NaiveBlock {
  std::int64_t lo = 0;
  std::int64_t hi = 0;
  int mass = 1;
  int level = 0;

  bool operator==(const NaiveBlock& o) const {
    return lo == o.lo && hi == o.hi && mass == o.mass && level == o.level;
  }
};

inline std::int64_t naive_pow(std::int64_t base, int exp) {
  const std::int64_t cap = INT64_MAX / 4;
  std::int64_t v = 1;
  for (int i = 0; i < exp; ++i) {
    if (v > cap / base) return cap;
    v *= base;
  }
  return v;
}

// partitions[k] = blocks after step k (step 0 = singletons).
inline std::vector<std::vector<NaiveBlock>> naive_grouping(
    const std::vector<std::int64_t>& gamma, int M, int L) {
  std::vector<std::vector<NaiveBlock>> parts;
  std::vector<NaiveBlock> cur;
  for (auto x : gamma) cur.push_back({x, x, 1, 0});
  parts.push_back(cur);
  if (gamma.empty()) return parts;

  // Step 1 over positions.
  {
    std::vector<NaiveBlock> next;
    std::size_t i = 0;
    while (i < gamma.size()) {
      std::size_t j = i;
      while (j + 1 < gamma.size() && gamma[j + 1] - gamma[j] < M) ++j;
      if (j > i)
        next.push_back({gamma[i], gamma[j], static_cast<int>(j - i + 1), 1});
      else
        next.push_back(cur[i]);
      i = j + 1;
    }
    parts.push_back(next);
    cur = next;
  }

  int steps = static_cast<int>(gamma.size()) + 2;
  for (int step = 2; step <= steps; ++step) {
    std::int64_t thr = naive_pow(L, step);
    std::vector<std::size_t> cand;
    for (std::size_t c = 0; c < cur.size(); ++c)
      if (cur[c].mass >= step) cand.push_back(c);

    std::vector<NaiveBlock> next;
    std::vector<char> absorbed(cur.size(), 0);
    std::size_t a = 0;
    std::vector<NaiveBlock> merged;
    std::vector<std::size_t> merged_at;  // first current index of each run
    while (a < cand.size()) {
      std::size_t b = a;
      while (b + 1 < cand.size() && cur[cand[b + 1]].lo - cur[cand[b]].hi < thr) ++b;
      if (b > a) {
        NaiveBlock nb;
        nb.lo = cur[cand[a]].lo;
        nb.hi = cur[cand[b]].hi;
        nb.level = step;
        int mass_sum = 0;
        for (std::size_t t = a; t <= b; ++t) mass_sum += cur[cand[t]].mass;
        nb.mass = mass_sum - (step - 1) * static_cast<int>(b - a);
        for (std::size_t c = 0; c < cur.size(); ++c)
          if (cur[c].lo >= nb.lo && cur[c].hi <= nb.hi) absorbed[c] = 1;
        merged.push_back(nb);
        merged_at.push_back(cand[a]);
      }
      a = b + 1;
    }
    std::size_t mi = 0;
    for (std::size_t c = 0; c < cur.size(); ++c) {
      if (mi < merged_at.size() && c == merged_at[mi]) {
        next.push_back(merged[mi]);
        ++mi;
      }
      if (!absorbed[c]) next.push_back(cur[c]);
    }
    parts.push_back(next);
    cur = next;
  }
  return parts;
}

}  // namespace testsupport
