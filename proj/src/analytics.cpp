#include "perclab/analytics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace perclab {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

double logsumexp2(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

ProbSequence p_sequence(double p0, int k_max) {
  if (!(p0 > 0.0 && p0 <= 1.0))
    throw std::invalid_argument("p_sequence: p0 must lie in (0,1]");
  if (k_max < 0) throw std::invalid_argument("p_sequence: k_max must be >= 0");
  ProbSequence s;
  s.p0 = p0;
  double lq = std::log1p(-p0);  // -inf when p0 == 1
  for (int k = 0; k <= k_max; ++k) {
    double qk = std::exp(static_cast<double>(k + 1) * lq);
    s.q.push_back(qk);
    s.p.push_back(-std::expm1(static_cast<double>(k + 1) * lq));
  }
  double lt = 0.0;
  for (double pk : s.p) lt += std::log(pk);
  s.theta_truncated = std::exp(lt);
  s.theta_tail_bound = std::exp(static_cast<double>(k_max + 2) * lq) / p0;
  return s;
}

int pair_budget(const RecursionParams& rp) {
  if (!(rp.rho > 0.75 && rp.rho < 1.0))
    throw std::invalid_argument("pair_budget: rho must lie in (3/4, 1)");
  if (rp.N < 1) throw std::invalid_argument("pair_budget: N must be positive");
  double psi = 2.0 * rp.rho - 1.0;
  return static_cast<int>(std::floor(psi / 3.0 * std::sqrt(static_cast<double>(rp.N))));
}

namespace {

void check_recursion_params(const RecursionParams& rp) {
  if (!(rp.p_g >= 0.0 && rp.p_g <= 1.0) || !(rp.p_b >= 0.0 && rp.p_b <= 1.0))
    throw std::invalid_argument("recursion: probabilities must lie in [0,1]");
  if (rp.kappa < 0) throw std::invalid_argument("recursion: kappa must be >= 0");
}

// log(P_k) and log(1 - P_k) for P_k = 1-(1-p0)^(k+1).
double log_frak_p(double p0, int k) {
  double t = static_cast<double>(k + 1) * std::log1p(-p0);
  double one_m = -std::expm1(t);  // P_k
  if (one_m >= 1.0) return 0.0;
  return std::log1p(-std::exp(t));
}

double log_frak_q(double p0, int k) {
  return static_cast<double>(k + 1) * std::log1p(-p0);
}

}  // namespace

RecursionTable crossing_recursion(const RecursionParams& rp, int m, double p0_frak) {
  check_recursion_params(rp);
  if (m < 1) throw std::invalid_argument("crossing_recursion: m must be >= 1");
  if (!(p0_frak > 0.0 && p0_frak <= 1.0))
    throw std::invalid_argument("crossing_recursion: p0 must lie in (0,1]");
  int J = pair_budget(rp);
  double lpg = rp.p_g > 0.0 ? std::log(rp.p_g) : kNegInf;
  double lpb = rp.p_b > 0.0 ? std::log(rp.p_b) : kNegInf;

  RecursionTable t;
  t.m = m;
  t.rows.resize(m + 1);

  // Row 0: straight product of the bad and good ladder crossings.
  {
    RecursionRow& r = t.rows[0];
    r.j = 0;
    r.log_p = static_cast<double>(m) * lpb +
              static_cast<double>(rp.kappa) * static_cast<double>(m - 1) * lpg;
    double p_plain = std::pow(rp.p_b, m) *
                     std::pow(rp.p_g, static_cast<double>(rp.kappa) * (m - 1));
    r.p = p_plain;
    r.log_q = r.log_p == kNegInf ? 0.0 : std::log1p(-std::exp(r.log_p));
  }

  for (int j = 1; j <= m; ++j) {
    RecursionRow& r = t.rows[j];
    r.j = j;
    double bprev = t.rows[j - 1].log_q;  // log(1 - p_{j-1,m})
    double jb = static_cast<double>(J) * bprev;
    double logA = jb >= 0.0 ? kNegInf : std::log(-std::expm1(jb));
    if (J == 0) logA = kNegInf;  // 1 - (1-p)^0 = 0
    if (j == m) {
      r.log_p = logA;
      r.log_q = jb;
    } else {
      int c = rp.kappa * (m - j - 1);
      double lP = log_frak_p(p0_frak, j);
      double lfac = static_cast<double>(c) * lP;
      r.log_p = logA + lfac;
      // 1 - p_j = (1-p_{j-1})^J + A * (1 - P_j^c)
      double second;
      if (c == 0 || lP == 0.0)
        second = kNegInf;
      else
        second = logA + std::log(-std::expm1(lfac));
      r.log_q = logsumexp2(jb, second);
      if (r.log_q > 0.0) r.log_q = 0.0;
    }
    double pprev = t.rows[j - 1].p;
    double A_plain = 1.0 - std::pow(1.0 - pprev, J);
    if (j == m) {
      r.p = A_plain;
    } else {
      int c = rp.kappa * (m - j - 1);
      double P = -std::expm1(static_cast<double>(j + 1) * std::log1p(-p0_frak));
      r.p = A_plain * std::pow(P, c);
    }
  }
  return t;
}

InductionReport induction_check(const RecursionParams& rp, int m_max, double C,
                                double p0_frak, std::optional<double> gn_estimate) {
  if (m_max < 1) throw std::invalid_argument("induction_check: m_max must be >= 1");
  if (!(C > 0.0)) throw std::invalid_argument("induction_check: C must be positive");
  InductionReport rep;
  double psi = 2.0 * rp.rho - 1.0;
  for (int m = 1; m <= m_max; ++m) {
    RecursionTable t = crossing_recursion(rp, m, p0_frak);
    InductionRow row;
    row.m = m;
    double lhs = std::log(C) +
                 psi / 6.0 * static_cast<double>(rp.N) * t.rows[m - 1].log_q;
    double rhs = log_frak_q(p0_frak, m);
    if (std::isinf(lhs) && lhs < 0.0)
      // Left side is exactly zero, which no bound can fall below.
      row.margin_tail = (std::isinf(rhs) && rhs < 0.0) ? 0.0 : HUGE_VAL;
    else
      row.margin_tail = rhs - lhs;
    row.margin_cross = t.rows[m].log_p - log_frak_p(p0_frak, m);
    row.pass = row.margin_tail >= 0.0 && row.margin_cross >= 0.0;
    if (!row.pass) rep.all_pass = false;
    rep.rows.push_back(row);
  }
  if (gn_estimate) {
    rep.has_bootstrap = true;
    double ghat = *gn_estimate;
    if (!(ghat > 0.0 && ghat < 1.0))
      throw std::invalid_argument("induction_check: gn estimate must lie in (0,1)");
    double L = ghat;
    for (int k = 0; k < m_max; ++k) {
      if (k > 0) L = 1.0 - (1.0 - ghat) * (1.0 - L);
      double target = -std::expm1(static_cast<double>(k + 2) * std::log1p(-p0_frak));
      rep.bootstrap_margins.push_back(L - target);
      if (L - target < 0.0) rep.bootstrap_pass = false;
    }
  }
  return rep;
}

double binomial_rate(double p, double x) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("binomial_rate: p must lie in (0,1)");
  if (!(x >= 0.0 && x <= 1.0))
    throw std::invalid_argument("binomial_rate: x must lie in [0,1]");
  double a = x == 0.0 ? 0.0 : x * std::log(x / p);
  double b = x == 1.0 ? 0.0 : (1.0 - x) * std::log((1.0 - x) / (1.0 - p));
  return a + b;
}

double half_mean_rate(double p) { return binomial_rate(p, p / 2.0); }

double half_mean_rate_closed(double p) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("half_mean_rate_closed: p must lie in (0,1)");
  return (1.0 - p / 2.0) * std::log((2.0 - p) / (1.0 - p)) - std::log(2.0);
}

TailSumResult induction_tail_sum(const RecursionParams& rp, double p0_frak, int m) {
  if (m < 1) throw std::invalid_argument("induction_tail_sum: m must be >= 1");
  if (!(p0_frak > 0.0 && p0_frak < 1.0))
    throw std::invalid_argument("induction_tail_sum: p0 must lie in (0,1)");
  int J = pair_budget(rp);
  TailSumResult out;
  out.m = m;
  out.warning_small_J = J <= 1;
  out.lhs_log = kNegInf;
  out.split_head_log = kNegInf;
  out.split_tail_log = kNegInf;
  double lq = std::log1p(-p0_frak);
  auto lfrak = [&](int k) { return log_frak_p(p0_frak, k); };
  double plain = 0.0;
  for (int i = 1; i <= m - 1; ++i) {
    double pw = std::pow(static_cast<double>(J) / 2.0, i + 1);
    double S = 0.0;  // log of the interior product
    for (int j = 1; j <= i - 1; ++j)
      S += static_cast<double>(j) * rp.kappa * lfrak(m - j - 1);
    double arg = std::exp(static_cast<double>(i) * rp.kappa * lfrak(m - i - 1));
    if (arg >= 1.0) arg = 1.0 - 1e-16;
    double E = -4.0 * pw * std::exp(S) * half_mean_rate(arg);
    out.lhs_log = logsumexp2(out.lhs_log, E);
    if (i <= m / 2)
      out.split_head_log = logsumexp2(out.split_head_log, E);
    else
      out.split_tail_log = logsumexp2(out.split_tail_log, E);
    plain += std::exp(E);
  }
  out.lhs_plain = plain;
  out.rhs_log = static_cast<double>(m + 1) * lq - std::log(2.0);
  out.rhs_plain = std::exp(out.rhs_log);
  out.pass = out.lhs_log <= out.rhs_log;
  out.underflow_pass = out.lhs_plain == 0.0 && out.rhs_plain > 0.0 && out.pass;
  return out;
}

double peierls_tail(double C, double p, int n0) {
  if (!(C > 0.0)) throw std::invalid_argument("peierls_tail: C must be positive");
  if (!(p >= 0.0 && p <= 1.0))
    throw std::invalid_argument("peierls_tail: p must lie in [0,1]");
  if (n0 < 1) throw std::invalid_argument("peierls_tail: n0 must be >= 1");
  double cq = C * (1.0 - p);
  if (cq >= 1.0)
    throw std::invalid_argument("peierls_tail: series diverges, C(1-p) >= 1");
  return C * std::pow(cq, 4 * n0 - 1) / (1.0 - cq);
}

ExactFraction delta_condition(int M) {
  if (M < 3) throw std::invalid_argument("delta_condition: M must be >= 3");
  ExactFraction f;
  f.num = 1;
  f.den = 64LL * static_cast<std::int64_t>(M) * static_cast<std::int64_t>(M);
  return f;
}

double potts_bond_probability(double coupling, int q) {
  if (coupling < 0.0)
    throw std::invalid_argument("potts_bond_probability: coupling must be >= 0");
  if (q < 2) throw std::invalid_argument("potts_bond_probability: q must be >= 2");
  double e = std::exp(-2.0 * coupling);
  return -std::expm1(-2.0 * coupling) / (1.0 + (static_cast<double>(q) - 1.0) * e);
}

double magnetization_lower_bound(double theta, int q) {
  if (!(theta >= 0.0 && theta <= 1.0))
    throw std::invalid_argument("magnetization_lower_bound: theta must lie in [0,1]");
  if (q < 2) throw std::invalid_argument("magnetization_lower_bound: q must be >= 2");
  double qq = static_cast<double>(q);
  return 1.0 / qq + (qq - 1.0) / qq * theta;
}

}  // namespace perclab
