#include "perclab/words.hpp"

#include <cmath>
#include <stdexcept>

namespace perclab {

namespace {

std::int64_t binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::int64_t r = 1;
  k = std::min(k, n - k);
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

void enumerate_level(int d, int n, std::vector<int>& cur, int pos,
                     std::vector<std::vector<int>>& out) {
  if (pos == d - 1) {
    cur[pos] = n;
    out.push_back(cur);
    return;
  }
  for (int v = 0; v <= n; ++v) {
    cur[pos] = v;
    enumerate_level(d, n - v, cur, pos + 1, out);
  }
}

// Lexicographic rank of a level-n multi-index.
std::int64_t rank_of(int d, const std::vector<int>& v) {
  int rem = 0;
  for (int x : v) rem += x;
  std::int64_t r = 0;
  for (int pos = 0; pos < d - 1; ++pos) {
    for (int b = 0; b < v[pos]; ++b)
      r += binom(rem - b + d - pos - 2, d - pos - 2);
    rem -= v[pos];
  }
  return r;
}

}  // namespace

std::int64_t level_size(int d, int n) {
  if (d < 1 || n < 0) throw std::invalid_argument("level_size: bad arguments");
  return binom(n + d - 1, d - 1);
}

std::vector<std::vector<int>> level_vertices(int d, int n) {
  if (d < 1 || n < 0) throw std::invalid_argument("level_vertices: bad arguments");
  std::vector<std::vector<int>> out;
  std::vector<int> cur(d);
  enumerate_level(d, n, cur, 0, out);
  return out;
}

SiteField sample_field(int d, int depth, double alpha, const CounterRng& rng) {
  if (d < 2) throw std::invalid_argument("sample_field: d must be >= 2");
  if (depth < 0) throw std::invalid_argument("sample_field: depth must be >= 0");
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw std::invalid_argument("sample_field: alpha must lie in [0,1]");
  SiteField f;
  f.d = d;
  f.depth = depth;
  f.omega.resize(depth + 1);
  for (int n = 0; n <= depth; ++n) {
    std::int64_t sz = level_size(d, n);
    f.omega[n].resize(sz);
    for (std::int64_t i = 0; i < sz; ++i)
      f.omega[n][i] = rng.bernoulli(alpha, tag::field, static_cast<std::uint64_t>(n),
                                    static_cast<std::uint64_t>(i))
                          ? 1
                          : 0;
  }
  return f;
}

WordSeen word_seen(const SiteField& field, const Word& word) {
  int L = static_cast<int>(word.size());
  if (field.depth < L)
    throw std::out_of_range("word_seen: field depth smaller than word length");
  WordSeen out;
  out.z.assign(L + 1, 0);
  std::vector<std::uint8_t> reached{1};  // root, colour ignored
  out.z[0] = 1;
  for (int n = 1; n <= L; ++n) {
    std::vector<std::vector<int>> verts = level_vertices(field.d, n);
    std::vector<std::uint8_t> cur(verts.size(), 0);
    std::int64_t count = 0;
    for (std::size_t i = 0; i < verts.size(); ++i) {
      if (field.omega[n][i] != word[n - 1]) continue;
      std::vector<int> pred = verts[i];
      bool hit = false;
      for (int c = 0; c < field.d && !hit; ++c) {
        if (pred[c] == 0) continue;
        --pred[c];
        if (reached[rank_of(field.d, pred)]) hit = true;
        ++pred[c];
      }
      if (hit) {
        cur[i] = 1;
        ++count;
      }
    }
    out.z[n] = count;
    reached = std::move(cur);
  }
  out.seen = out.z[L] > 0;
  return out;
}

Word sample_word(int length, double beta, const CounterRng& rng) {
  if (length < 0) throw std::invalid_argument("sample_word: length must be >= 0");
  if (!(beta >= 0.0 && beta <= 1.0))
    throw std::invalid_argument("sample_word: beta must lie in [0,1]");
  Word w(length);
  for (int i = 0; i < length; ++i)
    w[i] = rng.bernoulli(beta, tag::word, static_cast<std::uint64_t>(i)) ? 1 : 0;
  return w;
}

WordSurvival estimate_word_survival(const WordParams& params, std::int64_t replicates,
                                    const CounterRng& rng) {
  if (replicates <= 0)
    throw std::invalid_argument("estimate_word_survival: replicates must be positive");
  std::int64_t hits = 0;
  double sum_z = 0.0, sum_z2 = 0.0;
  for (std::int64_t r = 0; r < replicates; ++r) {
    CounterRng rr = rng.substream(static_cast<std::uint64_t>(r));
    SiteField f = sample_field(params.d, params.depth, params.alpha, rr);
    Word w = sample_word(params.depth, params.beta, rr);
    WordSeen ws = word_seen(f, w);
    if (ws.seen) ++hits;
    double z = static_cast<double>(ws.z[params.depth]);
    sum_z += z;
    sum_z2 += z * z;
  }
  WordSurvival out;
  out.proxy = wilson_interval(hits, replicates, rng.key());
  double n = static_cast<double>(replicates);
  out.mean_z = sum_z / n;
  double var = std::max(0.0, sum_z2 / n - out.mean_z * out.mean_z);
  out.mean_z_std_error = std::sqrt(var / n);
  return out;
}

ThresholdReport threshold_check(const WordParams& params) {
  if (params.d < 2) throw std::invalid_argument("threshold_check: d must be >= 2");
  ThresholdReport r;
  r.c = params.alpha * params.beta + (1.0 - params.alpha) * (1.0 - params.beta);
  r.subcritical = r.c <= 1.0 / static_cast<double>(params.d);
  r.delta = 1.0 - params.beta;
  r.p_g = params.alpha;
  r.p_b = 1.0 - params.alpha;
  return r;
}

SiteField complement_field(const SiteField& f) {
  SiteField g = f;
  for (auto& lvl : g.omega)
    for (auto& b : lvl) b = b ? 0 : 1;
  return g;
}

Word complement_word(const Word& w) {
  Word c = w;
  for (auto& b : c) b = b ? 0 : 1;
  return c;
}

}  // namespace perclab
