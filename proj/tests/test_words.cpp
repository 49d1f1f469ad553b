#include <cstdint>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "perclab/words.hpp"

using namespace perclab;

namespace {

SiteField const_field(int d, int depth, std::uint8_t colour) {
  SiteField f;
  f.d = d;
  f.depth = depth;
  f.omega.resize(static_cast<std::size_t>(depth) + 1);
  for (int n = 0; n <= depth; ++n)
    f.omega[static_cast<std::size_t>(n)]
        .assign(static_cast<std::size_t>(level_size(d, n)), colour);
  return f;
}

// Every vertex coloured with the letter its level asks for.
SiteField matching_field(int d, const Word& w) {
  SiteField f = const_field(d, static_cast<int>(w.size()), 0);
  for (std::size_t n = 1; n < f.omega.size(); ++n)
    for (auto& c : f.omega[n]) c = w[n - 1];
  return f;
}

}  // namespace

TEST_SUITE("words") {

TEST_CASE("level counts") {
  for (int n = 0; n <= 12; ++n) {
    CHECK(level_size(2, n) == n + 1);
    CHECK(level_size(3, n) == static_cast<std::int64_t>(n + 1) * (n + 2) / 2);
    CHECK(level_size(1, n) == 1);
  }
  auto v = level_vertices(2, 3);
  REQUIRE(v.size() == 4);
  CHECK(v[0] == std::vector<int>{0, 3});
  CHECK(v[3] == std::vector<int>{3, 0});
  auto w = level_vertices(3, 2);
  CHECK(w.size() == 6);
  for (const auto& m : w) {
    int s = 0;
    for (int x : m) s += x;
    CHECK(s == 2);
  }
  for (std::size_t i = 1; i < w.size(); ++i) CHECK(w[i - 1] < w[i]);
  CHECK_THROWS_AS(level_size(0, 3), std::invalid_argument);
  CHECK_THROWS_AS(level_vertices(2, -1), std::invalid_argument);
}

TEST_CASE("uniform colour one and all-ones word fill every level") {
  SiteField f = const_field(2, 6, 1);
  Word w(6, 1);
  WordSeen r = word_seen(f, w);
  CHECK(r.seen);
  for (int n = 0; n <= 6; ++n)
    CHECK(r.z[static_cast<std::size_t>(n)] == n + 1);
}

TEST_CASE("first letter mismatch kills the count immediately") {
  SiteField f = const_field(2, 4, 0);
  Word w(4, 1);
  WordSeen r = word_seen(f, w);
  CHECK_FALSE(r.seen);
  CHECK(r.z[0] == 1);
  for (std::size_t n = 1; n < r.z.size(); ++n) CHECK(r.z[n] == 0);
}

TEST_CASE("root colour is ignored") {
  SiteField f = const_field(2, 3, 1);
  f.omega[0][0] = 0;
  WordSeen r = word_seen(f, Word(3, 1));
  CHECK(r.seen);
  CHECK(r.z[3] == 4);
}

TEST_CASE("a field built to match reaches every vertex") {
  CounterRng rng(4242);
  for (int d : {2, 3}) {
    Word w = sample_word(6, 0.5, rng.substream(static_cast<std::uint64_t>(d)));
    SiteField f = matching_field(d, w);
    WordSeen r = word_seen(f, w);
    CHECK(r.seen);
    for (int n = 0; n <= 6; ++n)
      CHECK(r.z[static_cast<std::size_t>(n)] == level_size(d, n));
  }
}

TEST_CASE("word longer than the field throws") {
  SiteField f = const_field(2, 3, 1);
  CHECK_THROWS_AS(word_seen(f, Word(4, 1)), std::out_of_range);
  WordSeen shorter = word_seen(f, Word(2, 1));  // prefix evaluation is fine
  CHECK(shorter.z.size() == 3);
}

TEST_CASE("joint complement leaves the counts unchanged") {
  CounterRng rng(977);
  for (int rep = 0; rep < 300; ++rep) {
    CounterRng sub = rng.substream(static_cast<std::uint64_t>(rep));
    SiteField f = sample_field(2, 7, 0.37, sub);
    Word w = sample_word(7, 0.81, sub.substream(1));
    WordSeen a = word_seen(f, w);
    WordSeen b = word_seen(complement_field(f), complement_word(w));
    CHECK(a.seen == b.seen);
    CHECK(a.z == b.z);
  }
  SiteField f = sample_field(3, 4, 0.5, rng.substream(9001));
  SiteField ff = complement_field(complement_field(f));
  CHECK(ff.omega == f.omega);
}

TEST_CASE("closing a site never increases any level count") {
  CounterRng rng(5151);
  for (int rep = 0; rep < 200; ++rep) {
    CounterRng sub = rng.substream(static_cast<std::uint64_t>(rep));
    SiteField f = sample_field(2, 8, 0.6, sub);
    Word w = sample_word(8, 0.5, sub.substream(1));
    WordSeen before = word_seen(f, w);
    int n = 1 + static_cast<int>(sub.uniform(2) * 8.0);
    auto& row = f.omega[static_cast<std::size_t>(n)];
    std::size_t i = static_cast<std::size_t>(sub.uniform(3) *
                                             static_cast<double>(row.size()));
    row[i] = static_cast<std::uint8_t>(1 - w[static_cast<std::size_t>(n) - 1]);
    WordSeen after = word_seen(f, w);
    for (std::size_t k = 0; k < before.z.size(); ++k)
      CHECK(after.z[k] <= before.z[k]);
  }
}

TEST_CASE("branching factor and the environment parameters it mirrors") {
  WordParams p;
  p.alpha = 0.9;
  p.beta = 0.99;
  ThresholdReport r = threshold_check(p);
  CHECK(std::abs(r.c - 0.892) < 1e-12);
  CHECK_FALSE(r.subcritical);
  CHECK(std::abs(r.delta - 0.01) < 1e-12);
  CHECK(std::abs(r.p_g - 0.9) < 1e-12);
  CHECK(std::abs(r.p_b - 0.1) < 1e-12);

  WordParams half;
  half.alpha = 0.5;
  half.beta = 0.5;
  ThresholdReport rh = threshold_check(half);
  CHECK(rh.c == 0.5);
  CHECK(rh.subcritical);  // c = 1/d exactly still qualifies
  CHECK(rh.p_g == 0.5);
  CHECK(rh.p_b == 0.5);

  CounterRng rng(31);
  for (int rep = 0; rep < 50; ++rep) {
    WordParams q;
    q.alpha = rng.uniform(static_cast<std::uint64_t>(rep), 0);
    q.beta = rng.uniform(static_cast<std::uint64_t>(rep), 1);
    ThresholdReport t = threshold_check(q);
    CHECK(std::abs(t.p_g + t.p_b - 1.0) < 1e-12);
    CHECK(std::abs(t.delta - (1.0 - q.beta)) < 1e-12);
    CHECK(t.subcritical == (t.c <= 1.0 / q.d));
  }
}

TEST_CASE("survival proxy saturates at deterministic parameters") {
  WordParams p;
  p.alpha = 1.0;
  p.beta = 1.0;
  p.depth = 5;
  WordSurvival s = estimate_word_survival(p, 200, CounterRng(7));
  CHECK(s.proxy.point == 1.0);
  CHECK(s.proxy.successes == 200);
  CHECK(s.mean_z == 6.0);  // d=2: every level full, Z_5 = 6
  CHECK_THROWS_AS(estimate_word_survival(p, 0, CounterRng(7)), std::invalid_argument);
}

TEST_CASE("mean counts respect the branching bound on a parameter grid") {
  CounterRng rng(660);
  for (double alpha : {0.3, 0.5, 0.7})
    for (double beta : {0.3, 0.5, 0.7}) {
      WordParams p;
      p.alpha = alpha;
      p.beta = beta;
      p.depth = 8;
      WordSurvival s = estimate_word_survival(p, 2000, rng);
      double c = threshold_check(p).c;
      double bound = std::pow(2.0 * c, 8);
      CHECK(s.mean_z <= bound + 3.0 * s.mean_z_std_error);
    }
}

TEST_CASE("critical colours thin out with depth") {
  WordParams p;  // alpha = beta = 1/2
  WordSurvival shallow = estimate_word_survival(p, 4000, CounterRng(88));
  p.depth = 20;
  WordSurvival deep = estimate_word_survival(p, 4000, CounterRng(88));
  CHECK(shallow.mean_z <= 1.0 + 3.0 * shallow.mean_z_std_error);
  CHECK(deep.mean_z <= 1.0 + 3.0 * deep.mean_z_std_error);
  CHECK(deep.proxy.point < shallow.proxy.point + 0.02);
  CHECK(deep.proxy.point < 0.35);
}

}  // TEST_SUITE
