#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "perclab/env.hpp"

using namespace perclab;

namespace {

LadderEnvironment zero_env(int wh, int wv) {
  LadderEnvironment e;
  e.delta = 0.0;
  e.xi_h.assign(static_cast<std::size_t>(wh), 0);
  e.xi_v.assign(static_cast<std::size_t>(wv), 0);
  return e;
}

}  // namespace

TEST_SUITE("env") {

TEST_CASE("degenerate delta gives constant sequences") {
  CounterRng rng(7);
  LadderEnvironment e0 = sample_environment(0.0, 40, 30, rng);
  for (auto b : e0.xi_h) CHECK(b == 0);
  for (auto b : e0.xi_v) CHECK(b == 0);
  LadderEnvironment e1 = sample_environment(1.0, 40, 30, rng);
  for (auto b : e1.xi_h) CHECK(b == 1);
  for (auto b : e1.xi_v) CHECK(b == 1);
}

TEST_CASE("bad-ladder frequency matches delta over many seeds") {
  const int w = 100000;
  std::int64_t ones = 0;
  for (int s = 0; s < 20; ++s) {
    LadderEnvironment e = sample_environment(0.5, w, 2, CounterRng(1000 + s));
    for (auto b : e.xi_h) ones += b;
  }
  double mean = static_cast<double>(ones) / (20.0 * w);
  CHECK(mean > 0.49);
  CHECK(mean < 0.51);
}

TEST_CASE("uselessness depends only on the two flanking ladders") {
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      LadderEnvironment e = zero_env(10, 10);
      e.xi_v[2] = static_cast<std::uint8_t>(a);
      e.xi_v[3] = static_cast<std::uint8_t>(b);
      BondClass c = classify_bond(e, {Orientation::H, 5, 3});
      CHECK(c.useless == (a == 1 && b == 1));
    }
}

TEST_CASE("horizontal bond between two bad rows is useless") {
  LadderEnvironment e = zero_env(10, 10);
  e.xi_v[2] = 1;
  e.xi_v[3] = 1;
  CHECK(classify_bond(e, {Orientation::H, 5, 3}).useless);
}

TEST_CASE("all-good environment classifies every bond useful and good") {
  LadderEnvironment e = zero_env(8, 8);
  for (int lad = 0; lad < 7; ++lad)
    for (int off = 0; off < 8; ++off) {
      BondClass ch = classify_bond(e, {Orientation::H, lad, off});
      CHECK_FALSE(ch.useless);
      CHECK_FALSE(ch.ladder_bad);
    }
}

TEST_CASE("a single bad neighbour ladder does not make a bond useless") {
  LadderEnvironment e = zero_env(10, 10);
  e.xi_h[4] = 1;
  BondClass c = classify_bond(e, {Orientation::V, 0, 4});
  CHECK_FALSE(c.useless);
  CHECK_FALSE(c.ladder_bad);  // its own ladder is xi_v[0] = 0
}

TEST_CASE("offset zero lines are never useless") {
  LadderEnvironment e = zero_env(6, 6);
  for (auto& b : e.xi_h) b = 1;
  for (auto& b : e.xi_v) b = 1;
  CHECK_FALSE(classify_bond(e, {Orientation::H, 2, 0}).useless);
  CHECK_FALSE(classify_bond(e, {Orientation::V, 2, 0}).useless);
  CHECK(classify_bond(e, {Orientation::H, 2, 1}).useless);
  CHECK(classify_bond(e, {Orientation::V, 2, 1}).useless);
}

TEST_CASE("conditional open probability is 0, p_b or p_g") {
  LadderEnvironment e = zero_env(10, 10);
  e.xi_h[1] = 1;
  e.xi_v[4] = 1;
  e.xi_v[5] = 1;
  ModelParams mp{0.9, 0.4, 0.1};
  CHECK(conditional_open_prob(e, mp, {Orientation::H, 0, 2}) == 0.9);
  CHECK(conditional_open_prob(e, mp, {Orientation::H, 1, 2}) == 0.4);
  CHECK(conditional_open_prob(e, mp, {Orientation::H, 1, 5}) == 0.0);
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(require_valid(ModelParams{0.3, 0.7, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(require_valid(ModelParams{0.9, 0.5, 1.5}), std::invalid_argument);
  CHECK_NOTHROW(require_valid(ModelParams{0.9, 0.5, 0.01}));
  CHECK_THROWS_AS(sample_environment(-0.1, 4, 4, CounterRng(1)), std::invalid_argument);
  CHECK_THROWS_AS(sample_environment(0.1, 1, 4, CounterRng(1)), std::invalid_argument);
  CHECK_THROWS_AS(classify_bond(zero_env(4, 4), {Orientation::H, 9, 0}),
                  std::out_of_range);
}

TEST_CASE("saturated parameters open every useful bond") {
  LadderEnvironment e = zero_env(12, 12);
  BondConfiguration cfg =
      sample_configuration(e, ModelParams{1.0, 1.0, 0.0}, 10, 10, CounterRng(3));
  for (int y = 0; y <= 10; ++y)
    for (int x = 0; x < 10; ++x) CHECK(cfg.h_open(x, y));
  for (int y = 0; y < 10; ++y)
    for (int x = 0; x <= 10; ++x) CHECK(cfg.v_open(x, y));
}

TEST_CASE("useless column stays closed in every sample") {
  LadderEnvironment e = zero_env(12, 12);
  e.xi_h[3] = 1;
  e.xi_h[4] = 1;
  for (int s = 0; s < 10; ++s) {
    BondConfiguration cfg =
        sample_configuration(e, ModelParams{1.0, 1.0, 0.1}, 10, 10, CounterRng(s));
    for (int y = 0; y < 10; ++y) CHECK_FALSE(cfg.v_open(4, y));
  }
}

TEST_CASE("delta zero matches the homogeneous sampler bit for bit") {
  LadderEnvironment e = zero_env(40, 40);
  CounterRng rng(99);
  BondConfiguration dep =
      sample_configuration(e, ModelParams{0.7, 0.2, 0.0}, 30, 30, rng);
  BondConfiguration hom = sample_homogeneous_configuration(0.7, 30, 30, rng);
  for (int y = 0; y <= 30; ++y)
    for (int x = 0; x < 30; ++x) CHECK(dep.h_open(x, y) == hom.h_open(x, y));
  for (int y = 0; y < 30; ++y)
    for (int x = 0; x <= 30; ++x) CHECK(dep.v_open(x, y) == hom.v_open(x, y));
}

TEST_CASE("open fraction concentrates near p_g on a good environment") {
  LadderEnvironment e = zero_env(1001, 101);
  BondConfiguration cfg =
      sample_configuration(e, ModelParams{0.53, 0.1, 0.0}, 1000, 99, CounterRng(5));
  std::int64_t open = 0, total = 0;
  for (int y = 0; y <= 99; ++y)
    for (int x = 0; x < 1000; ++x) {
      open += cfg.h_open(x, y);
      ++total;
    }
  double frac = static_cast<double>(open) / static_cast<double>(total);
  double sigma = std::sqrt(0.53 * 0.47 / static_cast<double>(total));
  CHECK(frac > 0.53 - 3 * sigma);
  CHECK(frac < 0.53 + 3 * sigma);
}

TEST_CASE("raising both open probabilities only adds open bonds") {
  CounterRng rng(11);
  LadderEnvironment e = sample_environment(0.2, 30, 30, rng.substream(0));
  for (int s = 0; s < 5; ++s) {
    CounterRng sub = rng.substream(100 + static_cast<std::uint64_t>(s));
    BondConfiguration lo =
        sample_configuration(e, ModelParams{0.5, 0.2, 0.2}, 25, 25, sub);
    BondConfiguration hi =
        sample_configuration(e, ModelParams{0.8, 0.4, 0.2}, 25, 25, sub);
    for (int y = 0; y <= 25; ++y)
      for (int x = 0; x < 25; ++x)
        if (lo.h_open(x, y)) CHECK(hi.h_open(x, y));
    for (int y = 0; y < 25; ++y)
      for (int x = 0; x <= 25; ++x)
        if (lo.v_open(x, y)) CHECK(hi.v_open(x, y));
  }
}

TEST_CASE("box must fit inside the environment window") {
  LadderEnvironment e = zero_env(5, 5);
  CHECK_THROWS_AS(sample_configuration(e, ModelParams{0.9, 0.5, 0.0}, 40, 40,
                                       CounterRng(1)),
                  std::out_of_range);
}

TEST_CASE("environment text form round-trips") {
  LadderEnvironment e = zero_env(6, 4);
  e.xi_h[1] = 1;
  e.xi_h[5] = 1;
  e.xi_v[0] = 1;
  std::string text = env_to_text(e);
  CHECK(text.find("H:") != std::string::npos);
  CHECK(text.find("V:") != std::string::npos);
  LadderEnvironment back = env_from_text(text);
  CHECK(back.xi_h == e.xi_h);
  CHECK(back.xi_v == e.xi_v);
  CHECK_THROWS_AS(env_from_text("H:0102\nV:00\n"), std::invalid_argument);
}

}  // TEST_SUITE
