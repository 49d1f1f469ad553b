#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace perclab {

// One experiment request: a kind tag, free-form string parameters with typed
// accessors, and the replication/seed contract. `out` and the worker count
// never influence sampled values or spec_hash.
struct ExperimentSpec {
  std::string kind;
  std::map<std::string, std::string> params;
  std::int64_t replicates = 1000;
  std::uint64_t seed = 1;
  std::string out;

  bool has(const std::string& key) const;
  std::string get(const std::string& key, const std::string& dflt) const;
  std::string require(const std::string& key) const;
  std::int64_t get_int(const std::string& key, std::int64_t dflt) const;
  double get_double(const std::string& key, double dflt) const;
  double require_double(const std::string& key) const;
};

// Digest of kind, canonically ordered params, replicates, and seed.
std::uint64_t spec_hash(const ExperimentSpec& spec);

struct OutputRecord {
  std::vector<std::pair<std::string, std::string>> fields;

  void add(const std::string& name, const std::string& value);
  void add_int(const std::string& name, std::int64_t value);
  void add_double(const std::string& name, double value);
  const std::string* find(const std::string& name) const;
};

struct ExperimentResult {
  std::uint64_t hash = 0;
  std::string kind;
  std::vector<OutputRecord> rows;
};

// Kinds: crossing, env, renorm, recursion, words. Monte-Carlo kinds draw
// replicate r from seed-substream r regardless of how replicates are split
// over threads, and only integer tallies cross thread boundaries, so the
// rows are byte-identical for every worker count.
ExperimentResult run_experiment(const ExperimentSpec& spec, int workers = 1);

// Shortest round-trip decimal form.
std::string format_double(double v);

// spec_hash,kind,<field columns in first-seen order>; missing fields empty.
void write_csv(std::ostream& os, const ExperimentResult& result);

// Self-contained line chart of y over x with an optional [lo, hi] band; rows
// missing any referenced field are skipped.
void write_svg(std::ostream& os, const ExperimentResult& result,
               const std::string& x_field, const std::string& y_field,
               const std::string& lo_field, const std::string& hi_field,
               const std::string& title);

}  // namespace perclab
