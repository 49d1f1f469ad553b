#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace perclab {

// p[k] = 1-(1-p0)^(k+1) and q[k] = (1-p0)^(k+1), with the truncated product
// of the p[k] and a bound on the missing tail sum of q beyond k_max.
struct ProbSequence {
  double p0 = 0.0;
  std::vector<double> p;
  std::vector<double> q;
  double theta_truncated = 1.0;
  double theta_tail_bound = 0.0;
};
ProbSequence p_sequence(double p0, int k_max);

struct RecursionParams {
  double p_g = 0.9;
  double p_b = 0.5;
  double rho = 0.8;  // in (3/4, 1)
  int kappa = 2;     // crossings spent per good ladder
  int N = 100;
};
// J = floor((2 rho - 1)/3 * sqrt(N)) independent crossing attempts.
int pair_budget(const RecursionParams& rp);

// Crossing-chain recursion: p_{0,m} = p_b^m p_g^(kappa(m-1)),
// p_{j,m} = (1-(1-p_{j-1,m})^J) * P_j^(kappa(m-j-1)) for 0 < j < m,
// p_{m,m} = 1-(1-p_{m-1,m})^J, where P_j comes from p_sequence(p0_frak).
// Each row carries the plain value and log(p), log(1-p) computed entirely in
// log space; they agree to ~1e-9 whenever the plain value has headroom.
struct RecursionRow {
  int j = 0;
  double p = 0.0;
  double log_p = 0.0;
  double log_q = 0.0;  // log(1 - p)
};
struct RecursionTable {
  int m = 0;
  std::vector<RecursionRow> rows;
};
RecursionTable crossing_recursion(const RecursionParams& rp, int m, double p0_frak);

// Per-m margins of the two closing inequalities of the induction:
//   tail:  C (1-p_{m-1,m})^((psi/6) N) <= q_m
//   cross: p_{m,m} >= P_m
// plus, when a crossing-probability estimate ghat is supplied, the bootstrap
// chain L_0 = ghat, L_k = 1-(1-ghat)(1-L_{k-1}) checked against P_{k+1}.
struct InductionRow {
  int m = 0;
  double margin_tail = 0.0;   // log q_m - log lhs
  double margin_cross = 0.0;  // log p_{m,m} - log P_m
  bool pass = false;
};
struct InductionReport {
  std::vector<InductionRow> rows;
  bool all_pass = true;
  bool has_bootstrap = false;
  std::vector<double> bootstrap_margins;
  bool bootstrap_pass = true;
};
InductionReport induction_check(const RecursionParams& rp, int m_max, double C,
                                double p0_frak,
                                std::optional<double> gn_estimate = std::nullopt);

// Binomial large-deviation rate I_p(x) = x log(x/p) + (1-x) log((1-x)/(1-p)).
double binomial_rate(double p, double x);
// f(p) = I_p(p/2), and its closed form (1-p/2) log((2-p)/(1-p)) - log 2.
double half_mean_rate(double p);
double half_mean_rate_closed(double p);

// Sum over i = 1..m-1 of
//   exp[-4 (J/2)^(i+1) * prod_{j=1}^{i-1} P_{m-j-1}^(j kappa) * f(P_{m-i-1}^(i kappa))]
// compared against q_m / 2. Evaluated via logsumexp; a plain-arithmetic lhs
// that underflows to zero still passes when the log-space value stays below
// the bound.
struct TailSumResult {
  int m = 0;
  double lhs_log = 0.0;
  double lhs_plain = 0.0;
  double rhs_log = 0.0;
  double rhs_plain = 0.0;
  bool pass = false;
  bool underflow_pass = false;
  bool warning_small_J = false;
  double split_head_log = 0.0;  // terms i <= floor(m/2)
  double split_tail_log = 0.0;
};
TailSumResult induction_tail_sum(const RecursionParams& rp, double p0_frak, int m);

// Circuit-count tail C (C(1-p))^(4 n0 - 1) / (1 - C(1-p)); throws when the
// geometric ratio reaches 1.
double peierls_tail(double C, double p, int n0);

// Largest admissible disorder density for scale M, as the exact fraction
// 1/(64 M^2).
struct ExactFraction {
  std::int64_t num = 0;
  std::int64_t den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};
ExactFraction delta_condition(int M);

// Random-cluster coupling p(e) = (1-e^(-2J))/(1+(q-1)e^(-2J)) and the
// magnetization bound 1/q + (q-1)/q * theta.
double potts_bond_probability(double coupling, int q);
double magnetization_lower_bound(double theta, int q);

double logsumexp2(double a, double b);

}  // namespace perclab
