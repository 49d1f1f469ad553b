// Command-line front end: each subcommand fills an ExperimentSpec (JSON
// config first, flags override) and streams CSV/SVG. Exit codes: 0 ok,
// 2 bad input, 3 runtime failure.

#include <chrono>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "perclab/env.hpp"
#include "perclab/grouping.hpp"
#include "perclab/harness.hpp"
#include "perclab/rng.hpp"

namespace {

using perclab::ExperimentSpec;

struct CommonOpts {
  std::string config;
  std::string out;
  int workers = 1;
  bool no_svg = false;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::int64_t reps = 0;
  bool reps_set = false;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
  cmd->add_option("--config", c.config, "JSON file with kind/params/replicates/seed");
  cmd->add_option("--out", c.out, "output stem; writes <stem>.csv and <stem>.svg");
  cmd->add_option("--workers", c.workers, "thread count (never changes the numbers)")
      ->check(CLI::Range(1, 64));
  cmd->add_flag("--no-svg", c.no_svg, "skip the SVG companion file");
  cmd->add_option("--seed", c.seed, "base seed")->each([&](const std::string&) {
    c.seed_set = true;
  });
  cmd->add_option("--reps", c.reps, "replicates")->each([&](const std::string&) {
    c.reps_set = true;
  });
}

// String-valued flags land in spec.params only when actually passed.
struct ParamFlag {
  CLI::Option* opt;
  std::string key;
  std::string* value;
};

class ParamSet {
 public:
  void add(CLI::App* cmd, const std::string& flag, const std::string& key,
           const std::string& help) {
    holders_.push_back(std::make_unique<std::string>());
    std::string* slot = holders_.back().get();
    flags_.push_back({cmd->add_option(flag, *slot, help), key, slot});
  }
  void apply(ExperimentSpec& spec) const {
    for (const auto& f : flags_)
      if (f.opt->count() > 0) spec.params[f.key] = *f.value;
  }

 private:
  std::vector<std::unique_ptr<std::string>> holders_;
  std::vector<ParamFlag> flags_;
};

void load_config(const std::string& path, ExperimentSpec& spec) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config '" + path + "'");
  nlohmann::json j;
  in >> j;
  if (j.contains("kind")) spec.kind = j["kind"].get<std::string>();
  if (j.contains("replicates")) spec.replicates = j["replicates"].get<std::int64_t>();
  if (j.contains("seed")) spec.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("out")) spec.out = j["out"].get<std::string>();
  if (j.contains("params")) {
    for (const auto& [k, v] : j["params"].items()) {
      if (v.is_string())
        spec.params[k] = v.get<std::string>();
      else
        spec.params[k] = v.dump();
    }
  }
}

struct SvgFields {
  std::string x, y, lo, hi, title;
};

SvgFields svg_defaults(const std::string& kind) {
  if (kind == "env") return {"delta", "point", "ci_low", "ci_high", "spaced fraction"};
  if (kind == "crossing")
    return {"bond_prob", "point", "ci_low", "ci_high", "crossing frequency"};
  if (kind == "renorm")
    return {"N", "point", "ci_low", "ci_high", "renormalized percolation"};
  if (kind == "recursion") return {"m", "log_p_mm", "", "", "recursion log p_mm"};
  return {"beta", "point", "ci_low", "ci_high", "word survival proxy"};
}

int run_spec(ExperimentSpec spec, const CommonOpts& c, const ParamSet& flags) {
  if (!c.config.empty()) load_config(c.config, spec);
  flags.apply(spec);
  if (c.seed_set) spec.seed = c.seed;
  if (c.reps_set) spec.replicates = c.reps;
  if (!c.out.empty()) spec.out = c.out;

  auto t0 = std::chrono::steady_clock::now();
  perclab::ExperimentResult res = perclab::run_experiment(spec, c.workers);
  auto t1 = std::chrono::steady_clock::now();
  double secs = std::chrono::duration<double>(t1 - t0).count();

  if (spec.out.empty()) {
    perclab::write_csv(std::cout, res);
  } else {
    std::ofstream csv(spec.out + ".csv");
    if (!csv) throw std::runtime_error("cannot write '" + spec.out + ".csv'");
    perclab::write_csv(csv, res);
    if (!c.no_svg) {
      std::ofstream svg(spec.out + ".svg");
      if (!svg) throw std::runtime_error("cannot write '" + spec.out + ".svg'");
      SvgFields f = svg_defaults(res.kind);
      perclab::write_svg(svg, res, f.x, f.y, f.lo, f.hi, f.title);
    }
  }
  std::cerr << res.kind << ": " << res.rows.size() << " row(s), "
            << spec.replicates << " replicates, " << secs << " s\n";
  return 0;
}

int run_group(const std::string& env_file, double delta, int width, int M,
              std::int64_t L, std::uint64_t seed, const std::string& out) {
  std::vector<std::int64_t> gamma;
  std::int64_t window = width;
  if (!env_file.empty()) {
    std::ifstream in(env_file);
    if (!in) throw std::invalid_argument("cannot open env file '" + env_file + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    perclab::LadderEnvironment env = perclab::env_from_text(ss.str());
    for (int i = 0; i < env.width_h(); ++i)
      if (env.xi_h[static_cast<std::size_t>(i)]) gamma.push_back(i);
    window = env.width_h();
  } else {
    perclab::CounterRng rng(seed);
    for (int i = 0; i < width; ++i)
      if (rng.bernoulli(delta, perclab::tag::env_h, static_cast<std::uint64_t>(i)))
        gamma.push_back(i);
  }
  perclab::GroupingResult g = perclab::run_grouping(gamma, M, L, window);
  perclab::SpacingReport sr = perclab::chi_and_spaced(g);
  perclab::VerifyReport vr = perclab::verify_partition_properties(g);

  if (out.empty()) {
    perclab::write_blocks_csv(std::cout, g);
  } else {
    std::ofstream os(out);
    if (!os) throw std::runtime_error("cannot write '" + out + "'");
    perclab::write_blocks_csv(os, g);
  }
  std::cerr << "bad=" << gamma.size() << " blocks=" << g.blocks.size()
            << " steps=" << g.stabilization_step << " chi=" << sr.chi
            << " spaced=" << (sr.m_spaced ? 1 : 0)
            << " audit_violations=" << vr.violations.size() << "\n";
  return vr.ok() ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dependent-percolation laboratory"};
  app.require_subcommand(1);

  CommonOpts env_c, perc_c, renorm_c, rec_c, words_c;
  ParamSet env_p, perc_p, renorm_p, rec_p, words_p;

  CLI::App* env = app.add_subcommand("env", "disorder windows: spacedness and chi");
  add_common(env, env_c);
  env_p.add(env, "--delta", "delta", "bad-ladder density");
  env_p.add(env, "--delta-grid", "delta_grid", "comma list of densities");
  env_p.add(env, "--width", "width", "window width in ladders");
  env_p.add(env, "--M", "M", "grouping scale");
  env_p.add(env, "--L", "L", "distance base (default M)");

  CLI::App* perc = app.add_subcommand("perc", "crossing/percolation events on grids");
  add_common(perc, perc_c);
  perc_p.add(perc, "--event", "event", "lr|tb|box|central|origin");
  perc_p.add(perc, "--nx", "nx", "grid width");
  perc_p.add(perc, "--ny", "ny", "grid height");
  perc_p.add(perc, "--site-prob", "site_prob", "site open probability");
  perc_p.add(perc, "--bond-prob", "bond_prob", "bond open probability");
  perc_p.add(perc, "--rho", "rho", "contact fraction for box events");
  perc_p.add(perc, "--scale-n", "scale_n", "admissible scale N for box events");
  perc_p.add(perc, "--threshold", "threshold", "required disjoint path count");

  CLI::App* ren = app.add_subcommand("renorm", "renormalized lattice percolation");
  add_common(ren, renorm_c);
  renorm_p.add(ren, "--delta", "delta", "bad-ladder density");
  renorm_p.add(ren, "--pg", "p_g", "open probability on good ladders");
  renorm_p.add(ren, "--pb", "p_b", "open probability on bad ladders");
  renorm_p.add(ren, "--N", "N", "site side scale");
  renorm_p.add(ren, "--k", "k", "levels to build");
  renorm_p.add(ren, "--width", "width", "window width in ladders");
  renorm_p.add(ren, "--rho", "rho", "contact fraction");
  renorm_p.add(ren, "--mode", "mode", "restricted|unrestricted bond paths");
  renorm_p.add(ren, "--geometry", "geometry", "full|core site geometry");

  CLI::App* rec = app.add_subcommand("recursion", "crossing-chain recursion tables");
  add_common(rec, rec_c);
  rec_p.add(rec, "--pg", "p_g", "good-ladder bond probability");
  rec_p.add(rec, "--pb", "p_b", "bad-ladder bond probability");
  rec_p.add(rec, "--rho", "rho", "contact fraction");
  rec_p.add(rec, "--kappa", "kappa", "crossings spent per good ladder");
  rec_p.add(rec, "--N", "N", "scale");
  rec_p.add(rec, "--m-max", "m_max", "largest mass");
  rec_p.add(rec, "--C", "C", "circuit-count constant");
  rec_p.add(rec, "--p0", "p0", "base probability of the auxiliary sequence");
  rec_p.add(rec, "--ghat", "ghat", "bootstrap crossing estimate");

  CLI::App* words = app.add_subcommand("words", "percolation of words on the pyramid");
  add_common(words, words_c);
  words_p.add(words, "--alpha", "alpha", "site colour density");
  words_p.add(words, "--beta", "beta", "word letter density");
  words_p.add(words, "--alpha-grid", "alpha_grid", "comma list of alpha values");
  words_p.add(words, "--beta-grid", "beta_grid", "comma list of beta values");
  words_p.add(words, "--d", "d", "dimension");
  words_p.add(words, "--depth", "depth", "pyramid depth");

  CLI::App* grp = app.add_subcommand("group", "one grouping run, block table out");
  std::string grp_env_file, grp_out;
  double grp_delta = 0.01;
  int grp_width = 1000, grp_M = 3;
  std::int64_t grp_L = -1;
  std::uint64_t grp_seed = 1;
  grp->add_option("--env-file", grp_env_file, "environment text file (H axis used)");
  grp->add_option("--delta", grp_delta, "bad-ladder density when sampling");
  grp->add_option("--width", grp_width, "window width when sampling");
  grp->add_option("--M", grp_M, "grouping scale");
  grp->add_option("--L", grp_L, "distance base (default M)");
  grp->add_option("--seed", grp_seed, "seed when sampling");
  grp->add_option("--out", grp_out, "block table path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (env->parsed()) {
      ExperimentSpec spec;
      spec.kind = "env";
      return run_spec(std::move(spec), env_c, env_p);
    }
    if (perc->parsed()) {
      ExperimentSpec spec;
      spec.kind = "crossing";
      return run_spec(std::move(spec), perc_c, perc_p);
    }
    if (ren->parsed()) {
      ExperimentSpec spec;
      spec.kind = "renorm";
      return run_spec(std::move(spec), renorm_c, renorm_p);
    }
    if (rec->parsed()) {
      ExperimentSpec spec;
      spec.kind = "recursion";
      return run_spec(std::move(spec), rec_c, rec_p);
    }
    if (words->parsed()) {
      ExperimentSpec spec;
      spec.kind = "words";
      return run_spec(std::move(spec), words_c, words_p);
    }
    if (grp->parsed())
      return run_group(grp_env_file, grp_delta, grp_width, grp_M,
                       grp_L < 0 ? grp_M : grp_L, grp_seed, grp_out);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
