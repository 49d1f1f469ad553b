#include "perclab/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "perclab/analytics.hpp"
#include "perclab/crossings.hpp"
#include "perclab/env.hpp"
#include "perclab/grid.hpp"
#include "perclab/grouping.hpp"
#include "perclab/renorm.hpp"
#include "perclab/rng.hpp"
#include "perclab/stats.hpp"
#include "perclab/words.hpp"

namespace perclab {

bool ExperimentSpec::has(const std::string& key) const {
  return params.find(key) != params.end();
}

std::string ExperimentSpec::get(const std::string& key, const std::string& dflt) const {
  auto it = params.find(key);
  return it == params.end() ? dflt : it->second;
}

std::string ExperimentSpec::require(const std::string& key) const {
  auto it = params.find(key);
  if (it == params.end())
    throw std::invalid_argument("experiment '" + kind + "' needs parameter '" + key +
                                "'");
  return it->second;
}

namespace {

std::int64_t parse_int(const std::string& key, const std::string& raw) {
  std::int64_t v = 0;
  auto [p, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), v);
  if (ec != std::errc() || p != raw.data() + raw.size())
    throw std::invalid_argument("parameter '" + key + "': bad integer '" + raw + "'");
  return v;
}

double parse_double(const std::string& key, const std::string& raw) {
  try {
    std::size_t used = 0;
    double v = std::stod(raw, &used);
    if (used != raw.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("parameter '" + key + "': bad number '" + raw + "'");
  }
}

std::vector<double> parse_list(const std::string& key, const std::string& raw) {
  std::vector<double> out;
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(parse_double(key, item));
  if (out.empty()) throw std::invalid_argument("parameter '" + key + "': empty list");
  return out;
}

}  // namespace

std::int64_t ExperimentSpec::get_int(const std::string& key, std::int64_t dflt) const {
  auto it = params.find(key);
  return it == params.end() ? dflt : parse_int(key, it->second);
}

double ExperimentSpec::get_double(const std::string& key, double dflt) const {
  auto it = params.find(key);
  return it == params.end() ? dflt : parse_double(key, it->second);
}

double ExperimentSpec::require_double(const std::string& key) const {
  return parse_double(key, require(key));
}

std::uint64_t spec_hash(const ExperimentSpec& spec) {
  std::uint64_t h = 0x9e3779b97f4a7c15ULL;
  auto absorb = [&](const std::string& s) {
    for (unsigned char c : s) h = mix64(h ^ c);
    h = mix64(h ^ 0xffULL);
  };
  absorb(spec.kind);
  for (const auto& [k, v] : spec.params) {
    absorb(k);
    absorb(v);
  }
  h = mix64(h ^ static_cast<std::uint64_t>(spec.replicates));
  h = mix64(h ^ spec.seed);
  return h;
}

void OutputRecord::add(const std::string& name, const std::string& value) {
  fields.emplace_back(name, value);
}

void OutputRecord::add_int(const std::string& name, std::int64_t value) {
  fields.emplace_back(name, std::to_string(value));
}

void OutputRecord::add_double(const std::string& name, double value) {
  fields.emplace_back(name, format_double(value));
}

const std::string* OutputRecord::find(const std::string& name) const {
  for (const auto& [k, v] : fields)
    if (k == name) return &v;
  return nullptr;
}

std::string format_double(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, p);
}

namespace {

// Contiguous replicate ranges per worker; only the integer tallies are
// merged, so the result cannot depend on the split.
std::vector<std::int64_t> parallel_tally(
    std::int64_t replicates, int workers, std::size_t slots,
    const std::function<void(std::int64_t, std::vector<std::int64_t>&)>& body) {
  if (replicates < 0) throw std::invalid_argument("replicates must be >= 0");
  workers = std::max(1, std::min<int>(workers, 64));
  if (replicates < workers) workers = std::max<std::int64_t>(1, replicates);
  std::vector<std::vector<std::int64_t>> parts(
      static_cast<std::size_t>(workers), std::vector<std::int64_t>(slots, 0));
  if (workers == 1) {
    for (std::int64_t r = 0; r < replicates; ++r) body(r, parts[0]);
  } else {
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      std::int64_t lo = replicates * w / workers;
      std::int64_t hi = replicates * (w + 1) / workers;
      threads.emplace_back([&, lo, hi, w] {
        try {
          for (std::int64_t r = lo; r < hi; ++r) body(r, parts[static_cast<std::size_t>(w)]);
        } catch (...) {
          errors[static_cast<std::size_t>(w)] = std::current_exception();
        }
      });
    }
    for (auto& t : threads) t.join();
    for (const auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  std::vector<std::int64_t> total(slots, 0);
  for (const auto& part : parts)
    for (std::size_t s = 0; s < slots; ++s) total[s] += part[s];
  return total;
}

void add_wilson(OutputRecord& row, std::int64_t successes, std::int64_t n) {
  if (n > 0) {
    EstimateResult e = wilson_interval(successes, n);
    row.add_double("point", e.point);
    row.add_double("ci_low", e.ci_low);
    row.add_double("ci_high", e.ci_high);
  } else {
    row.add_double("point", 0.0);
    row.add_double("ci_low", 0.0);
    row.add_double("ci_high", 0.0);
  }
}

ExperimentResult run_crossing(const ExperimentSpec& spec, int workers) {
  CrossingSpec cs;
  std::string event = spec.get("event", "origin");
  if (event == "lr")
    cs.kind = CrossingSpec::Kind::LrDisjoint;
  else if (event == "tb")
    cs.kind = CrossingSpec::Kind::TbDisjoint;
  else if (event == "box")
    cs.kind = CrossingSpec::Kind::BoxCrossing;
  else if (event == "central")
    cs.kind = CrossingSpec::Kind::CentralCrossing;
  else if (event == "origin")
    cs.kind = CrossingSpec::Kind::OriginToBoundary;
  else
    throw std::invalid_argument("crossing: unknown event '" + event + "'");
  cs.nx = static_cast<int>(spec.get_int("nx", 8));
  cs.ny = static_cast<int>(spec.get_int("ny", 8));
  cs.site_prob = spec.get_double("site_prob", 1.0);
  cs.bond_prob = spec.require_double("bond_prob");
  cs.rho = spec.get_double("rho", 0.8);
  cs.scale_n = static_cast<int>(spec.get_int("scale_n", 3));
  cs.path_threshold = static_cast<int>(spec.get_int("threshold", 1));
  if (cs.nx < 1 || cs.ny < 1) throw std::invalid_argument("crossing: empty grid");

  CounterRng rng(spec.seed);
  auto tally = parallel_tally(spec.replicates, workers, 1,
                              [&](std::int64_t r, std::vector<std::int64_t>& acc) {
                                CounterRng sub = rng.substream(static_cast<std::uint64_t>(r));
                                SiteBondGrid g =
                                    sample_grid(cs.nx, cs.ny, cs.site_prob, cs.bond_prob, sub);
                                if (event_occurs(cs, g)) ++acc[0];
                              });
  ExperimentResult res;
  OutputRecord row;
  row.add("event", event);
  row.add_int("nx", cs.nx);
  row.add_int("ny", cs.ny);
  row.add_double("site_prob", cs.site_prob);
  row.add_double("bond_prob", cs.bond_prob);
  row.add_double("rho", cs.rho);
  row.add_int("scale_n", cs.scale_n);
  row.add_int("threshold", cs.path_threshold);
  row.add_int("replicates", spec.replicates);
  row.add_int("successes", tally[0]);
  add_wilson(row, tally[0], spec.replicates);
  res.rows.push_back(std::move(row));
  return res;
}

ExperimentResult run_env(const ExperimentSpec& spec, int workers) {
  const int width = static_cast<int>(parse_int("width", spec.require("width")));
  const int M = static_cast<int>(parse_int("M", spec.require("M")));
  const std::int64_t L = spec.get_int("L", M);
  std::vector<double> deltas = spec.has("delta_grid")
                                   ? parse_list("delta_grid", spec.require("delta_grid"))
                                   : std::vector<double>{spec.require_double("delta")};
  if (width < 1 || M < 2) throw std::invalid_argument("env: width >= 1 and M >= 2");

  // Slots per delta: spaced, chi buckets 0..6, chi >= 7, bad ladders, formed
  // blocks, truncated groupings.
  constexpr std::size_t kPer = 12;
  CounterRng rng(spec.seed);
  auto tally = parallel_tally(
      spec.replicates, workers, kPer * deltas.size(),
      [&](std::int64_t r, std::vector<std::int64_t>& acc) {
        for (std::size_t c = 0; c < deltas.size(); ++c) {
          CounterRng sub = rng.substream(c).substream(static_cast<std::uint64_t>(r));
          std::vector<std::int64_t> gamma;
          for (int i = 0; i < width; ++i)
            if (sub.bernoulli(deltas[c], tag::env_h, static_cast<std::uint64_t>(i)))
              gamma.push_back(i);
          GroupingResult g = run_grouping(gamma, M, L, width);
          SpacingReport sr = chi_and_spaced(g);
          std::size_t base = kPer * c;
          if (sr.m_spaced) ++acc[base];
          ++acc[base + 1 + static_cast<std::size_t>(std::min(sr.chi, 7))];
          acc[base + 9] += static_cast<std::int64_t>(gamma.size());
          acc[base + 10] +=
              static_cast<std::int64_t>(g.blocks.size() - gamma.size());
          if (sr.truncated) ++acc[base + 11];
        }
      });
  ExperimentResult res;
  for (std::size_t c = 0; c < deltas.size(); ++c) {
    std::size_t base = kPer * c;
    OutputRecord row;
    row.add_double("delta", deltas[c]);
    row.add_int("width", width);
    row.add_int("M", M);
    row.add_int("L", L);
    row.add_int("replicates", spec.replicates);
    row.add_int("spaced", tally[base]);
    add_wilson(row, tally[base], spec.replicates);
    for (int chi = 0; chi <= 6; ++chi)
      row.add_int("chi_" + std::to_string(chi),
                  tally[base + 1 + static_cast<std::size_t>(chi)]);
    row.add_int("chi_ge7", tally[base + 8]);
    row.add_int("bad_sum", tally[base + 9]);
    row.add_int("formed_blocks_sum", tally[base + 10]);
    row.add_int("truncated", tally[base + 11]);
    res.rows.push_back(std::move(row));
  }
  return res;
}

ExperimentResult run_renorm(const ExperimentSpec& spec, int workers) {
  const double delta = spec.require_double("delta");
  const double p_g = spec.require_double("p_g");
  const double p_b = spec.require_double("p_b");
  const int N = static_cast<int>(parse_int("N", spec.require("N")));
  const int k = static_cast<int>(spec.get_int("k", 1));
  const int width = static_cast<int>(parse_int("width", spec.require("width")));
  const double rho = spec.get_double("rho", 0.8);
  const std::string mode_s = spec.get("mode", "restricted");
  const std::string geom_s = spec.get("geometry", "full");
  PathMode mode;
  if (mode_s == "restricted")
    mode = PathMode::Restricted;
  else if (mode_s == "unrestricted")
    mode = PathMode::Unrestricted;
  else
    throw std::invalid_argument("renorm: unknown mode '" + mode_s + "'");
  SiteGeometry geom;
  if (geom_s == "full")
    geom = SiteGeometry::Full;
  else if (geom_s == "core")
    geom = SiteGeometry::CoreCollar;
  else
    throw std::invalid_argument("renorm: unknown geometry '" + geom_s + "'");
  ModelParams mp{p_g, p_b, delta};
  require_valid(mp);
  if (width < 3 * N) throw std::invalid_argument("renorm: width below one region");

  const int M = 3 * N;
  CounterRng rng(spec.seed);
  // Slots: spaced, origin open, percolated, replayed.
  auto tally = parallel_tally(
      spec.replicates, workers, 4, [&](std::int64_t r, std::vector<std::int64_t>& acc) {
        CounterRng sub = rng.substream(static_cast<std::uint64_t>(r));
        LadderEnvironment env = sample_environment(delta, width, width, sub);
        std::vector<std::int64_t> gh, gv;
        for (int i = 0; i < width; ++i)
          if (env.xi_h[static_cast<std::size_t>(i)]) gh.push_back(i);
        for (int j = 0; j < width; ++j)
          if (env.xi_v[static_cast<std::size_t>(j)]) gv.push_back(j);
        GroupingResult rh = run_grouping(gh, M, M, width);
        GroupingResult rv = run_grouping(gv, M, M, width);
        if (!chi_and_spaced(rh).m_spaced || !chi_and_spaced(rv).m_spaced) return;
        ++acc[0];
        RenormChain chain = build_chain(rh, rv, width - 1, width - 1, N, k);
        BondConfiguration cfg = sample_configuration(env, mp, width - 1, width - 1, sub);
        evaluate_openness(chain, cfg, rho, mode, geom);
        if (chain.levels.back().site(0, 0).open) ++acc[1];
        PercolationCheck pc = origin_percolates_renormalized(chain, cfg);
        if (pc.percolates) {
          ++acc[2];
          if (pc.replay_ok) ++acc[3];
        }
      });
  ExperimentResult res;
  OutputRecord row;
  row.add_double("delta", delta);
  row.add_double("p_g", p_g);
  row.add_double("p_b", p_b);
  row.add_int("N", N);
  row.add_int("k", k);
  row.add_int("width", width);
  row.add_double("rho", rho);
  row.add("mode", mode_s);
  row.add("geometry", geom_s);
  row.add_int("replicates", spec.replicates);
  row.add_int("spaced", tally[0]);
  row.add_int("origin_open", tally[1]);
  row.add_int("percolated", tally[2]);
  row.add_int("replayed", tally[3]);
  add_wilson(row, tally[2], tally[0]);
  res.rows.push_back(std::move(row));
  return res;
}

ExperimentResult run_recursion(const ExperimentSpec& spec) {
  RecursionParams rp;
  rp.p_g = spec.get_double("p_g", rp.p_g);
  rp.p_b = spec.get_double("p_b", rp.p_b);
  rp.rho = spec.get_double("rho", rp.rho);
  rp.kappa = static_cast<int>(spec.get_int("kappa", rp.kappa));
  rp.N = static_cast<int>(spec.get_int("N", rp.N));
  const double p0 = spec.require_double("p0");
  const int m_max = static_cast<int>(spec.get_int("m_max", 10));
  const double C = spec.get_double("C", 8.0);
  std::optional<double> ghat;
  if (spec.has("ghat")) ghat = spec.require_double("ghat");
  if (m_max < 2) throw std::invalid_argument("recursion: m_max must be >= 2");

  ProbSequence seq = p_sequence(p0, m_max + 1);
  InductionReport rep = induction_check(rp, m_max, C, p0, ghat);
  ExperimentResult res;
  for (int m = 2; m <= m_max; ++m) {
    RecursionTable tab = crossing_recursion(rp, m, p0);
    TailSumResult tail = induction_tail_sum(rp, p0, m);
    const InductionRow* ir = nullptr;
    for (const auto& cand : rep.rows)
      if (cand.m == m) ir = &cand;
    OutputRecord row;
    row.add_int("m", m);
    row.add_int("J", pair_budget(rp));
    row.add_double("p_mm", tab.rows.back().p);
    row.add_double("log_p_mm", tab.rows.back().log_p);
    row.add_double("frak_p_m", seq.p[static_cast<std::size_t>(m)]);
    if (ir) {
      row.add_double("margin_tail", ir->margin_tail);
      row.add_double("margin_cross", ir->margin_cross);
      row.add_int("pass", ir->pass ? 1 : 0);
    }
    row.add_double("tail_lhs_log", tail.lhs_log);
    row.add_double("tail_rhs_log", tail.rhs_log);
    row.add_int("tail_pass", tail.pass ? 1 : 0);
    res.rows.push_back(std::move(row));
  }
  if (rep.has_bootstrap) {
    OutputRecord row;
    row.add_int("m", -1);
    row.add_int("bootstrap_pass", rep.bootstrap_pass ? 1 : 0);
    for (std::size_t i = 0; i < rep.bootstrap_margins.size(); ++i)
      row.add_double("bootstrap_margin_" + std::to_string(i), rep.bootstrap_margins[i]);
    res.rows.push_back(std::move(row));
  }
  return res;
}

ExperimentResult run_words(const ExperimentSpec& spec, int workers) {
  std::vector<double> alphas = spec.has("alpha_grid")
                                   ? parse_list("alpha_grid", spec.require("alpha_grid"))
                                   : std::vector<double>{spec.get_double("alpha", 0.5)};
  std::vector<double> betas = spec.has("beta_grid")
                                  ? parse_list("beta_grid", spec.require("beta_grid"))
                                  : std::vector<double>{spec.get_double("beta", 0.5)};
  const int d = static_cast<int>(spec.get_int("d", 2));
  const int depth = static_cast<int>(spec.get_int("depth", 8));
  if (d < 2 || depth < 1) throw std::invalid_argument("words: need d >= 2, depth >= 1");

  const std::size_t cells = alphas.size() * betas.size();
  constexpr std::size_t kPer = 3;  // hits, sum z, sum z^2
  CounterRng rng(spec.seed);
  auto tally = parallel_tally(
      spec.replicates, workers, kPer * cells,
      [&](std::int64_t r, std::vector<std::int64_t>& acc) {
        for (std::size_t c = 0; c < cells; ++c) {
          double alpha = alphas[c / betas.size()];
          double beta = betas[c % betas.size()];
          CounterRng sub = rng.substream(c).substream(static_cast<std::uint64_t>(r));
          SiteField field = sample_field(d, depth, alpha, sub);
          Word word = sample_word(depth, beta, sub);
          WordSeen ws = word_seen(field, word);
          std::int64_t z = ws.z.back();
          std::size_t base = kPer * c;
          if (ws.seen) ++acc[base];
          acc[base + 1] += z;
          acc[base + 2] += z * z;
        }
      });
  ExperimentResult res;
  for (std::size_t c = 0; c < cells; ++c) {
    double alpha = alphas[c / betas.size()];
    double beta = betas[c % betas.size()];
    WordParams wp{alpha, beta, d, depth};
    ThresholdReport th = threshold_check(wp);
    std::size_t base = kPer * c;
    OutputRecord row;
    row.add_double("alpha", alpha);
    row.add_double("beta", beta);
    row.add_int("d", d);
    row.add_int("depth", depth);
    row.add_double("c", th.c);
    row.add_int("subcritical", th.subcritical ? 1 : 0);
    row.add_int("replicates", spec.replicates);
    row.add_int("hits", tally[base]);
    add_wilson(row, tally[base], spec.replicates);
    if (spec.replicates > 0) {
      double n = static_cast<double>(spec.replicates);
      double mean = static_cast<double>(tally[base + 1]) / n;
      double mean2 = static_cast<double>(tally[base + 2]) / n;
      double var = std::max(0.0, mean2 - mean * mean);
      row.add_double("mean_z", mean);
      row.add_double("mean_z_se", std::sqrt(var / n));
      row.add_double("mean_bound", std::pow(static_cast<double>(d) * th.c, depth));
    }
    res.rows.push_back(std::move(row));
  }
  return res;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec, int workers) {
  ExperimentResult res;
  if (spec.kind == "crossing")
    res = run_crossing(spec, workers);
  else if (spec.kind == "env")
    res = run_env(spec, workers);
  else if (spec.kind == "renorm")
    res = run_renorm(spec, workers);
  else if (spec.kind == "recursion")
    res = run_recursion(spec);
  else if (spec.kind == "words")
    res = run_words(spec, workers);
  else
    throw std::invalid_argument("unknown experiment kind '" + spec.kind + "'");
  res.kind = spec.kind;
  res.hash = spec_hash(spec);
  return res;
}

void write_csv(std::ostream& os, const ExperimentResult& result) {
  std::vector<std::string> columns;
  for (const auto& row : result.rows)
    for (const auto& [k, v] : row.fields)
      if (std::find(columns.begin(), columns.end(), k) == columns.end())
        columns.push_back(k);
  os << "spec_hash,kind";
  for (const auto& c : columns) os << ',' << c;
  os << '\n';
  char hash_buf[32];
  std::snprintf(hash_buf, sizeof(hash_buf), "%016llx",
                static_cast<unsigned long long>(result.hash));
  for (const auto& row : result.rows) {
    os << hash_buf << ',' << result.kind;
    for (const auto& c : columns) {
      const std::string* v = row.find(c);
      os << ',' << (v ? *v : std::string());
    }
    os << '\n';
  }
}

void write_svg(std::ostream& os, const ExperimentResult& result,
               const std::string& x_field, const std::string& y_field,
               const std::string& lo_field, const std::string& hi_field,
               const std::string& title) {
  struct Pt {
    double x, y, lo, hi;
    bool band;
  };
  std::vector<Pt> pts;
  for (const auto& row : result.rows) {
    const std::string* xs = row.find(x_field);
    const std::string* ys = row.find(y_field);
    if (!xs || !ys) continue;
    Pt p{};
    try {
      p.x = std::stod(*xs);
      p.y = std::stod(*ys);
    } catch (const std::exception&) {
      continue;
    }
    const std::string* ls = lo_field.empty() ? nullptr : row.find(lo_field);
    const std::string* hs = hi_field.empty() ? nullptr : row.find(hi_field);
    p.band = ls && hs;
    if (p.band) {
      try {
        p.lo = std::stod(*ls);
        p.hi = std::stod(*hs);
      } catch (const std::exception&) {
        p.band = false;
      }
    }
    pts.push_back(p);
  }
  std::sort(pts.begin(), pts.end(), [](const Pt& a, const Pt& b) { return a.x < b.x; });

  const double W = 720, H = 440, mL = 70, mR = 20, mT = 40, mB = 50;
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (!pts.empty()) {
    xmin = xmax = pts[0].x;
    ymin = ymax = pts[0].y;
    for (const Pt& p : pts) {
      xmin = std::min(xmin, p.x);
      xmax = std::max(xmax, p.x);
      ymin = std::min(ymin, p.band ? std::min(p.y, p.lo) : p.y);
      ymax = std::max(ymax, p.band ? std::max(p.y, p.hi) : p.y);
    }
  }
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) ymax = ymin + 1;
  auto X = [&](double x) { return mL + (x - xmin) / (xmax - xmin) * (W - mL - mR); };
  auto Y = [&](double y) { return H - mB - (y - ymin) / (ymax - ymin) * (H - mT - mB); };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << W << ' ' << H
     << "\" font-family=\"monospace\" font-size=\"12\">\n";
  os << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\">" << title
     << "</text>\n";
  os << "<line x1=\"" << mL << "\" y1=\"" << H - mB << "\" x2=\"" << W - mR
     << "\" y2=\"" << H - mB << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << mL << "\" y1=\"" << mT << "\" x2=\"" << mL << "\" y2=\""
     << H - mB << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << mL << "\" y=\"" << H - mB + 20 << "\">" << format_double(xmin)
     << "</text>\n";
  os << "<text x=\"" << W - mR << "\" y=\"" << H - mB + 20
     << "\" text-anchor=\"end\">" << format_double(xmax) << "</text>\n";
  os << "<text x=\"" << mL - 6 << "\" y=\"" << H - mB << "\" text-anchor=\"end\">"
     << format_double(ymin) << "</text>\n";
  os << "<text x=\"" << mL - 6 << "\" y=\"" << mT + 4 << "\" text-anchor=\"end\">"
     << format_double(ymax) << "</text>\n";

  bool any_band = false;
  for (const Pt& p : pts) any_band = any_band || p.band;
  if (any_band && pts.size() > 1) {
    os << "<polygon fill=\"#a6cbe3\" fill-opacity=\"0.6\" stroke=\"none\" points=\"";
    for (const Pt& p : pts)
      os << format_double(X(p.x)) << ',' << format_double(Y(p.band ? p.lo : p.y)) << ' ';
    for (auto it = pts.rbegin(); it != pts.rend(); ++it)
      os << format_double(X(it->x)) << ',' << format_double(Y(it->band ? it->hi : it->y))
         << ' ';
    os << "\"/>\n";
  }
  if (pts.size() > 1) {
    os << "<polyline fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"1.5\" points=\"";
    for (const Pt& p : pts)
      os << format_double(X(p.x)) << ',' << format_double(Y(p.y)) << ' ';
    os << "\"/>\n";
  }
  for (const Pt& p : pts)
    os << "<circle cx=\"" << format_double(X(p.x)) << "\" cy=\"" << format_double(Y(p.y))
       << "\" r=\"2.5\" fill=\"#1f5fa8\"/>\n";
  os << "</svg>\n";
}

}  // namespace perclab
