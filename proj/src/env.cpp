#include "perclab/env.hpp"

#include <sstream>
#include <stdexcept>

namespace perclab {

void require_valid(const ModelParams& p) {
  if (!(p.p_b >= 0.0 && p.p_b <= 1.0) || !(p.p_g >= 0.0 && p.p_g <= 1.0))
    throw std::invalid_argument("ModelParams: probabilities must lie in [0,1]");
  if (p.p_b > p.p_g)
    throw std::invalid_argument("ModelParams: p_b must not exceed p_g");
  if (!(p.delta >= 0.0 && p.delta <= 1.0))
    throw std::invalid_argument("ModelParams: delta must lie in [0,1]");
}

LadderEnvironment sample_environment(double delta, int width_h, int width_v,
                                     const CounterRng& rng) {
  if (!(delta >= 0.0 && delta <= 1.0))
    throw std::invalid_argument("sample_environment: delta must lie in [0,1]");
  if (width_h < 2 || width_v < 2)
    throw std::invalid_argument("sample_environment: widths must be at least 2");
  LadderEnvironment env;
  env.delta = delta;
  env.xi_h.resize(width_h);
  env.xi_v.resize(width_v);
  for (int i = 0; i < width_h; ++i)
    env.xi_h[i] = rng.bernoulli(delta, tag::env_h, static_cast<std::uint64_t>(i)) ? 1 : 0;
  for (int i = 0; i < width_v; ++i)
    env.xi_v[i] = rng.bernoulli(delta, tag::env_v, static_cast<std::uint64_t>(i)) ? 1 : 0;
  return env;
}

namespace {

const std::vector<std::uint8_t>& own_axis(const LadderEnvironment& env, Orientation o) {
  return o == Orientation::H ? env.xi_h : env.xi_v;
}

const std::vector<std::uint8_t>& cross_axis(const LadderEnvironment& env, Orientation o) {
  return o == Orientation::H ? env.xi_v : env.xi_h;
}

}  // namespace

BondClass classify_bond(const LadderEnvironment& env, const BondRef& b) {
  const auto& own = own_axis(env, b.orientation);
  const auto& cross = cross_axis(env, b.orientation);
  if (b.ladder < 0 || b.ladder >= static_cast<std::int64_t>(own.size()))
    throw std::out_of_range("classify_bond: ladder index outside environment window");
  if (b.offset < 0 || b.offset >= static_cast<std::int64_t>(cross.size()))
    throw std::out_of_range("classify_bond: transverse offset outside environment window");
  BondClass c;
  if (b.offset >= 1 && cross[b.offset - 1] && cross[b.offset])
    c.useless = true;
  else
    c.ladder_bad = own[b.ladder] != 0;
  return c;
}

double conditional_open_prob(const LadderEnvironment& env, const ModelParams& params,
                             const BondRef& b) {
  require_valid(params);
  BondClass c = classify_bond(env, b);
  if (c.useless) return 0.0;
  return c.ladder_bad ? params.p_b : params.p_g;
}

namespace {

BondConfiguration sample_impl(const LadderEnvironment* env, const ModelParams& params,
                              int n1, int n2, const CounterRng& rng) {
  if (n1 < 1 || n2 < 1)
    throw std::invalid_argument("sample_configuration: box sides must be at least 1");
  if (env) {
    if (env->width_h() < n1 + 1 || env->width_v() < n2 + 1)
      throw std::out_of_range("sample_configuration: box exceeds environment window");
  }
  BondConfiguration cfg;
  cfg.n1 = n1;
  cfg.n2 = n2;
  cfg.open_h = Bitfield2D(n1, n2 + 1);
  cfg.open_v = Bitfield2D(n1 + 1, n2);
  for (int x = 0; x < n1; ++x)
    for (int y = 0; y <= n2; ++y) {
      double p = env ? conditional_open_prob(*env, params,
                                             {Orientation::H, x, y})
                     : params.p_g;
      if (rng.uniform(tag::bond_h, static_cast<std::uint64_t>(x),
                      static_cast<std::uint64_t>(y)) < p)
        cfg.open_h.set(x, y, true);
    }
  for (int x = 0; x <= n1; ++x)
    for (int y = 0; y < n2; ++y) {
      double p = env ? conditional_open_prob(*env, params,
                                             {Orientation::V, y, x})
                     : params.p_g;
      if (rng.uniform(tag::bond_v, static_cast<std::uint64_t>(x),
                      static_cast<std::uint64_t>(y)) < p)
        cfg.open_v.set(x, y, true);
    }
  return cfg;
}

}  // namespace

BondConfiguration sample_configuration(const LadderEnvironment& env,
                                       const ModelParams& params, int n1, int n2,
                                       const CounterRng& rng) {
  require_valid(params);
  return sample_impl(&env, params, n1, n2, rng);
}

BondConfiguration sample_homogeneous_configuration(double p, int n1, int n2,
                                                   const CounterRng& rng) {
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("sample_homogeneous_configuration: p must lie in [0,1]");
  ModelParams params;
  params.p_g = p;
  params.p_b = p;
  return sample_impl(nullptr, params, n1, n2, rng);
}

std::string env_to_text(const LadderEnvironment& env) {
  std::ostringstream os;
  os << "H:";
  for (auto b : env.xi_h) os << (b ? '1' : '0');
  os << "\nV:";
  for (auto b : env.xi_v) os << (b ? '1' : '0');
  os << "\n";
  return os.str();
}

LadderEnvironment env_from_text(const std::string& text) {
  std::istringstream is(text);
  LadderEnvironment env;
  std::string line;
  bool got_h = false, got_v = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line.size() < 2 || line[1] != ':')
      throw std::invalid_argument("env_from_text: malformed line");
    std::vector<std::uint8_t>* dst = nullptr;
    if (line[0] == 'H') {
      dst = &env.xi_h;
      got_h = true;
    } else if (line[0] == 'V') {
      dst = &env.xi_v;
      got_v = true;
    } else {
      throw std::invalid_argument("env_from_text: unknown section");
    }
    dst->clear();
    for (std::size_t i = 2; i < line.size(); ++i) {
      if (line[i] != '0' && line[i] != '1')
        throw std::invalid_argument("env_from_text: bits must be 0/1");
      dst->push_back(line[i] == '1');
    }
  }
  if (!got_h || !got_v)
    throw std::invalid_argument("env_from_text: missing H or V section");
  return env;
}

}  // namespace perclab
