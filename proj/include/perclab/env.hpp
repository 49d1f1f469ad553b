#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "perclab/bitfield.hpp"
#include "perclab/rng.hpp"

namespace perclab {

// Bad/good flags for the two families of parallel bond ladders on the
// quarter plane. xi_h[i] marks the ladder of horizontal bonds joining
// columns i and i+1; xi_v[j] the ladder of vertical bonds joining rows
// j and j+1. 1 = bad.
struct LadderEnvironment {
  double delta = 0.0;
  std::vector<std::uint8_t> xi_h;
  std::vector<std::uint8_t> xi_v;

  int width_h() const { return static_cast<int>(xi_h.size()); }
  int width_v() const { return static_cast<int>(xi_v.size()); }
};

struct ModelParams {
  double p_g = 1.0;  // open probability on good ladders
  double p_b = 0.0;  // open probability on bad ladders
  double delta = 0.0;
};

// Throws std::invalid_argument unless 0 <= p_b <= p_g <= 1 and delta in [0,1].
void require_valid(const ModelParams& p);

enum class Orientation : std::uint8_t { H, V };

// A single bond, addressed by its ladder and its transverse offset.
// H: joins (ladder, offset)-(ladder+1, offset).
// V: joins (offset, ladder)-(offset, ladder+1).
struct BondRef {
  Orientation orientation;
  std::int64_t ladder;
  std::int64_t offset;
};

struct BondClass {
  bool useless = false;
  bool ladder_bad = false;  // meaningful only when !useless
};

LadderEnvironment sample_environment(double delta, int width_h, int width_v,
                                     const CounterRng& rng);

// A bond is useless iff both ladders of the other orientation flanking its
// transverse line are bad; the line at offset 0 has no ladder -1, hence is
// never useless.
BondClass classify_bond(const LadderEnvironment& env, const BondRef& b);

// 0 if useless, p_b if on a bad ladder, p_g otherwise.
double conditional_open_prob(const LadderEnvironment& env, const ModelParams& params,
                             const BondRef& b);

// Open/closed states for every bond of the box [0,n1] x [0,n2] (site corners
// inclusive). H bonds: ladder x in [0,n1), row y in [0,n2]; V bonds: ladder
// y in [0,n2), column x in [0,n1].
struct BondConfiguration {
  int n1 = 0;
  int n2 = 0;
  Bitfield2D open_h;  // indexed (ladder, offset) = (x, y)
  Bitfield2D open_v;  // indexed (offset, ladder) = (x, y)

  bool h_open(int x, int y) const { return open_h.get(x, y); }
  bool v_open(int x, int y) const { return open_v.get(x, y); }
};

// One uniform per bond, keyed by (orientation, ladder, offset); raising
// (p_g, p_b) with the same seed can only open more bonds.
BondConfiguration sample_configuration(const LadderEnvironment& env,
                                       const ModelParams& params, int n1, int n2,
                                       const CounterRng& rng);

// Same keying with every ladder good; bit-for-bit equal to the delta = 0
// model at p = p_g.
BondConfiguration sample_homogeneous_configuration(double p, int n1, int n2,
                                                   const CounterRng& rng);

// Text form: "H:<bits>" and "V:<bits>", one line per sequence.
std::string env_to_text(const LadderEnvironment& env);
LadderEnvironment env_from_text(const std::string& text);

}  // namespace perclab
