#pragma once

#include <cstdint>
#include <vector>

#include "perclab/rng.hpp"
#include "perclab/stats.hpp"

namespace perclab {

using Word = std::vector<std::uint8_t>;

// 0/1 colours on the vertices of the oriented pyramid {v : |v|_1 <= depth}
// in d dimensions, rooted at the origin. Vertices are stored level by level
// in lexicographic order of their multi-indices.
struct SiteField {
  int d = 2;
  int depth = 0;
  std::vector<std::vector<std::uint8_t>> omega;  // omega[n][i], level n
};

// Number of multi-indices of level n in d dimensions, and their enumeration.
std::int64_t level_size(int d, int n);
std::vector<std::vector<int>> level_vertices(int d, int n);

SiteField sample_field(int d, int depth, double alpha, const CounterRng& rng);

struct WordSeen {
  bool seen = false;                // some level-depth vertex realizes the word
  std::vector<std::int64_t> z;      // z[n] = count of level-n vertices reached
};

// Oriented reachability: a level-n vertex v is reached iff some predecessor
// at level n-1 is reached and omega(v) equals word[n-1]. The root's colour
// is ignored and z[0] = 1.
WordSeen word_seen(const SiteField& field, const Word& word);

struct WordParams {
  double alpha = 0.5;  // site colour density
  double beta = 0.5;   // word letter density
  int d = 2;
  int depth = 8;
};

// Survival proxy P(Z_depth > 0) under random field and random word, plus the
// average of Z_depth. A finite-depth surrogate, not the percolation
// probability itself.
struct WordSurvival {
  EstimateResult proxy;
  double mean_z = 0.0;
  double mean_z_std_error = 0.0;
};
WordSurvival estimate_word_survival(const WordParams& params, std::int64_t replicates,
                                    const CounterRng& rng);

// Branching factor c = alpha beta + (1-alpha)(1-beta); c <= 1/d certifies a
// subcritical mean e(Z_n) <= (dc)^n. Also reports the environment-model
// parameters this word model mirrors.
struct ThresholdReport {
  double c = 0.0;
  bool subcritical = false;
  double delta = 0.0;
  double p_g = 0.0;
  double p_b = 0.0;
};
ThresholdReport threshold_check(const WordParams& params);

Word sample_word(int length, double beta, const CounterRng& rng);

// Flip every colour and letter; word_seen is invariant under the joint flip.
SiteField complement_field(const SiteField& f);
Word complement_word(const Word& w);

}  // namespace perclab
