#pragma once

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "error.hpp"
#include "fiber_map.hpp"
#include "index_sequence.hpp"
#include "matrix.hpp"
#include "sequences.hpp"
#include "symmetric_sum.hpp"
#include "torus.hpp"

namespace jamison {

/// Angles of the construction; level gaps go far below double resolution.
using precise_real =
    boost::multiprecision::number<boost::multiprecision::cpp_bin_float<200>, boost::multiprecision::et_off>;
using precise_point = basic_torus_point<precise_real>;

// ---------------------------------------------------------------------------
// Weights
// ---------------------------------------------------------------------------

struct weight_schedule {
  std::vector<double> w;        // w[l-1] = w_l
  double model_C = 1.0;         // unconditional constant of the coordinate model
  std::vector<double> model_M;  // model_M[l-1] = M_l; missing entries are 1

  static weight_schedule linear(int count) {
    weight_schedule s;
    for (int l = 1; l <= count; ++l) s.w.push_back(static_cast<double>(l));
    return s;
  }

  double level(int l) const { return w.at(static_cast<std::size_t>(l - 1)); }
  double M(int l) const {
    const auto idx = static_cast<std::size_t>(l - 1);
    return idx < model_M.size() ? model_M[idx] : 1.0;
  }
  /// w_{i,l} = w_l / (2^i C M_{l+1})
  double fiber(int i, int l) const { return level(l) / (std::ldexp(1.0, i) * model_C * M(l + 1)); }

  void validate(int levels) const {
    if (static_cast<int>(w.size()) < levels)
      throw error(errc::weight_list_too_short, "need " + std::to_string(levels) + " weights, got " + std::to_string(w.size()));
    for (double x : w)
      if (!(x > 0.0) || !std::isfinite(x)) throw error(errc::precondition_violated, "weights must be positive");
    for (int l = 1; l <= levels + 1; ++l)
      if (!(model_C * M(l) >= 1.0)) throw error(errc::precondition_violated, "model constants need C M_l >= 1");
  }
};

// ---------------------------------------------------------------------------
// Construction data
// ---------------------------------------------------------------------------

struct level_budget {
  int level = 0;
  bool gap_ratio_ok = true;
  bool eigvec_budget_ok = true;
  bool tail_sum_ok = true;
  bool gap_ratio_applicable = false;
  bool eigvec_budget_applicable = false;
  double gap = 0.0;
  double gap_bound = std::numeric_limits<double>::infinity();
  double a_norm = 0.0;
  double b_norm = 0.0;
  double eigvec_budget = 0.0;
  double tail_sum_max = 0.0;
  double tail_budget = 0.0;
  double search_eta = 0.0;
  double near_return_value = 0.0;
  int attempts = 0;

  bool certified() const { return gap_ratio_ok && eigvec_budget_ok && tail_sum_ok; }
  std::string failing_predicate() const {
    if (!gap_ratio_ok) return "gap_ratio";
    if (!eigvec_budget_ok) return "eigvec_budget";
    if (!tail_sum_ok) return "tail_sum";
    return "";
  }
};

struct shift_construction {
  index_sequence seq;
  std::size_t horizon = 0;
  weight_schedule schedule;
  std::vector<precise_real> thetas;  // thetas[l-1] = theta_l in turns
  std::vector<int> anchors;          // anchors[l-1] = j(l); 0 for l = 1
  std::vector<double> gaps;          // gaps[l-1] = g_l, with g_1 = 1
  std::vector<level_budget> budgets; // budgets for l = 2..L

  int levels() const { return static_cast<int>(thetas.size()); }
  precise_point point(int l) const { return precise_point(thetas.at(static_cast<std::size_t>(l - 1))); }
  double theta_double(int l) const { return static_cast<double>(thetas.at(static_cast<std::size_t>(l - 1))); }
  cplx lambda(int l) const { return unimodular(theta_double(l)); }

  /// lambda_n - lambda_q without cancellation for nearby angles.
  cplx lambda_difference(int n, int q) const {
    const double d = static_cast<double>(precise_real(thetas.at(n - 1) - thetas.at(q - 1)));
    return lambda(q) * unimodular_minus_one(d);
  }
  double gap(int l) const { return gaps.at(static_cast<std::size_t>(l - 1)); }

  /// alpha_{i,l} = w_{i,l} g_{l+1} / g_l
  double alpha(int i, int l) const { return schedule.fiber(i, l) * gap(l + 1) / gap(l); }

  bool certified() const {
    if (levels() < 1) return false;
    for (const auto& b : budgets)
      if (!b.certified()) return false;
    return true;
  }

  /// w_1 g_2 + sum_{l>=2} w_l g_{l+1} / g_l over the available levels.
  double nuclear_partial_sum() const {
    double s = 0.0;
    for (int l = 1; l < levels(); ++l) s += schedule.level(l) * gap(l + 1) / gap(l);
    return s;
  }
};

// ---------------------------------------------------------------------------
// Budget predicates
// ---------------------------------------------------------------------------

namespace detail {

inline double log_binomial(double n, double k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

/// prod_{q=1}^{m-1} w_{1,q}
inline double fiber_one_weight_product(const shift_construction& c, int m) {
  double p = 1.0;
  for (int q = 1; q < m; ++q) p *= c.schedule.fiber(1, q);
  return p;
}

/// prod_{q=1}^{m-1} (lambda_n - lambda_q)
inline cplx chain_product(const shift_construction& c, int n, int m) {
  cplx p = 1.0;
  for (int q = 1; q < m; ++q) p *= c.lambda_difference(n, q);
  return p;
}

/// prod_{q<m}(lambda_n - lambda_q) - prod_{q<m}(lambda_j - lambda_q), telescoped so that
/// the tiny factor lambda_n - lambda_j appears explicitly.
inline cplx chain_product_difference(const shift_construction& c, int n, int j, int m) {
  const cplx step = c.lambda_difference(n, j);
  cplx total = 0.0;
  for (int r = 1; r < m; ++r) {
    cplx term = step;
    for (int q = 1; q < r; ++q) term *= c.lambda_difference(n, q);
    for (int q = r + 1; q < m; ++q) term *= c.lambda_difference(j, q);
    total += term;
  }
  return total;
}

}  // namespace detail

struct chain_increment {
  double a_norm = 0.0;
  double b_norm = 0.0;
  double total = 0.0;
};

/// ||u^(n) - u^(j(n))|| split into the part on levels <= j(n) and the part above.
inline chain_increment eigenvector_increment(const shift_construction& c, int n) {
  if (n < 2 || n > c.levels()) throw error(errc::index_out_of_range, "level out of range");
  const int j = fiber_map(n);
  chain_increment inc;
  double a2 = 0.0, b2 = 0.0;
  for (int m = 2; m <= n; ++m) {
    const double denom = detail::fiber_one_weight_product(c, m) * c.gap(m);
    if (m <= j) a2 += std::norm(detail::chain_product_difference(c, n, j, m) / denom);
    else b2 += std::norm(detail::chain_product(c, n, m) / denom);
  }
  inc.a_norm = std::sqrt(a2);
  inc.b_norm = std::sqrt(b2);
  inc.total = std::sqrt(a2 + b2);
  return inc;
}

/// max over p < K of sum_k w_{l-1}...w_k (g_l/g_k) |s_{k,l}^{(n_p)}|
inline double tail_sum_max(const shift_construction& c, int l, std::size_t K) {
  std::vector<cplx> backwards;
  for (int k = l; k >= 1; --k) backwards.push_back(c.lambda(k));
  double worst = 0.0;
  for (std::size_t p = 0; p < K; ++p) {
    const double N = c.seq[p];
    const int n = static_cast<int>(N);
    // h[r] = h_{n-r}(lambda_{l-r}, ..., lambda_l)
    const auto h = trailing_symmetric_sums(backwards, n);
    double sum = 0.0, wprod = 1.0;
    for (int k = l - 1; k >= 1; --k) {
      wprod *= c.schedule.level(k);
      const int span = l - k;
      if (span > n || static_cast<std::size_t>(span) >= h.size()) break;
      sum += wprod * (c.gap(l) / c.gap(k)) * std::abs(h[static_cast<std::size_t>(span)]);
    }
    worst = std::max(worst, sum);
  }
  return worst;
}

/// Limit of |c_{l+1}^{(l+1)}| as lambda_{l+1} -> lambda_{j(l+1)}; the other
/// coefficients of b_1^{(l+1)} vanish in that limit, so this is the part of
/// predicate (b) at level l + 1 already fixed by levels 1..l.
inline double next_level_top_coefficient(const shift_construction& c, int l) {
  const int j = fiber_map(l + 1);
  double num = 1.0;
  for (int q = 1; q <= l; ++q)
    if (q != j) num *= std::abs(c.lambda_difference(j, q));
  return num / detail::fiber_one_weight_product(c, l + 1);
}

/// Evaluates predicates (a), (b), (c) at level l >= 2 using levels 1..l.
inline level_budget evaluate_level_budget(const shift_construction& c, int l) {
  level_budget b;
  b.level = l;
  b.gap = c.gap(l);
  if (l >= 3) {
    b.gap_ratio_applicable = true;
    b.gap_bound = c.gap(l - 1) / (std::ldexp(1.0, l) * c.schedule.level(l - 1));
    b.gap_ratio_ok = b.gap <= b.gap_bound;
    b.eigvec_budget_applicable = true;
    b.eigvec_budget = std::ldexp(1.0, -(l + 1));
    const auto inc = eigenvector_increment(c, l);
    b.a_norm = inc.a_norm;
    b.b_norm = inc.b_norm;
    b.eigvec_budget_ok = inc.a_norm <= b.eigvec_budget && inc.b_norm <= b.eigvec_budget;
  }
  b.tail_budget = std::ldexp(1.0, 1 - l);
  b.tail_sum_max = tail_sum_max(c, l, c.horizon);
  b.tail_sum_ok = b.tail_sum_max <= b.tail_budget;
  return b;
}

/// Recomputes gaps and anchors from the angles.
inline void refresh_gaps(shift_construction& c) {
  const int L = c.levels();
  c.gaps.assign(static_cast<std::size_t>(L), 1.0);
  c.anchors.assign(static_cast<std::size_t>(L), 0);
  for (int l = 2; l <= L; ++l) {
    const int j = fiber_map(l);
    c.anchors[l - 1] = j;
    c.gaps[l - 1] = chord_from_turns(static_cast<double>(precise_real(c.thetas[l - 1] - c.thetas[j - 1])));
  }
}

/// Re-derives every level budget from the angles.
inline void certify(shift_construction& c) {
  refresh_gaps(c);
  std::vector<level_budget> old = std::move(c.budgets);
  c.budgets.clear();
  for (int l = 2; l <= c.levels(); ++l) {
    level_budget b = evaluate_level_budget(c, l);
    if (static_cast<std::size_t>(l - 2) < old.size()) {
      b.search_eta = old[l - 2].search_eta;
      b.near_return_value = old[l - 2].near_return_value;
      b.attempts = old[l - 2].attempts;
    }
    c.budgets.push_back(b);
  }
}

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

struct construction_options {
  std::vector<double> eta_schedule;  // eta_schedule[l-2] for level l; missing or <= 0 means default
  int search_budget = 8;             // eta shrink retries (factor 16 each)
  std::size_t max_candidates = 4;
  near_return_options search;
  bool require_nonseparated = true;  // check the sequence at horizons (K-2, K-1, K) before level 3
  classify_options gate;
  double lambda1_chord = 1.0 / 3.0;
};

/// theta_1 with |lambda_1 - 1| = chord.
inline precise_real first_angle(double chord) {
  using boost::multiprecision::asin;
  return precise_real(asin(precise_real(chord) / 2)) / boost::math::constants::pi<precise_real>();
}

namespace detail {

/// Largest g allowed by predicate (c) with |s| replaced by the binomial bound C(n, l-k).
inline double tail_gap_bound(const shift_construction& c, int l, std::size_t K) {
  double worst = 0.0;
  for (std::size_t p = 0; p < K; ++p) {
    const double N = c.seq[p];
    double sum = 0.0, wprod = 1.0;
    for (int k = l - 1; k >= 1; --k) {
      wprod *= c.schedule.level(k);
      const int span = l - k;
      if (span > N) break;
      sum += wprod * std::exp(log_binomial(N, span)) / c.gap(k);
    }
    worst = std::max(worst, sum);
  }
  return worst > 0.0 ? std::ldexp(1.0, 1 - l) / worst : 1.0;
}

}  // namespace detail

inline shift_construction build_construction(const index_sequence& seq, int L, std::size_t K, const weight_schedule& w,
                                              const construction_options& opts = {}) {
  if (L < 2) throw error(errc::precondition_violated, "need at least two levels");
  if (!seq.is_integer()) throw error(errc::precondition_violated, "integer sequence required");
  if (K < 1) throw error(errc::horizon_exceeds_sequence, "horizon must be >= 1");
  check_horizon(seq, K);
  w.validate(L);

  shift_construction c;
  c.seq = seq;
  c.horizon = K;
  c.schedule = w;
  c.thetas.push_back(first_angle(opts.lambda1_chord));
  c.gaps.push_back(1.0);
  c.anchors.push_back(0);
  const precise_real arc_end = c.thetas[0];
  const double two_pi = 2.0 * std::numbers::pi;

  for (int l = 2; l <= L; ++l) {
    if (l == 3 && opts.require_nonseparated) {
      std::vector<std::size_t> hs;
      for (std::size_t h = K >= 3 ? K - 2 : 1; h <= K; ++h) hs.push_back(h);
      const auto verdict = classify_jamison(seq, hs, opts.gate);
      if (verdict.verdict == jamison_verdict::separated)
        throw budget_infeasible(3, "near_return",
                                "sequence is separated at horizon " + std::to_string(K) + " (floor " +
                                    std::to_string(verdict.floor) + "), no resolved near-return exists");
    }

    const int j = fiber_map(l);
    const precise_real anchor = c.thetas[j - 1];
    const int sign = anchor * 2 >= arc_end ? -1 : 1;
    const double room = static_cast<double>(sign < 0 ? anchor : precise_real(arc_end - anchor));

    c.thetas.push_back(anchor);
    c.gaps.push_back(1.0);
    c.anchors.push_back(j);

    double gap_cap = 2.0;
    if (l >= 3) gap_cap = c.gap(l - 1) / (std::ldexp(1.0, l) * c.schedule.level(l - 1));
    const double tail_cap = detail::tail_gap_bound(c, l, K);
    double eta0 = std::min(gap_cap, tail_cap) / two_pi / 4.0;
    if (static_cast<std::size_t>(l - 2) < opts.eta_schedule.size() && opts.eta_schedule[l - 2] > 0.0)
      eta0 = opts.eta_schedule[l - 2];
    const double offset_cap = std::min({std::asin(std::min(1.0, gap_cap / 2.0)) / std::numbers::pi, room * (1.0 - 1e-12), 0.5});

    std::string failing = "near_return";
    bool accepted = false;
    for (int attempt = 0; attempt <= opts.search_budget && !accepted; ++attempt) {
      const double eta = eta0 / std::pow(16.0, attempt);
      if (!(eta > 0.0)) break;
      const auto found = near_return_search(seq, K, eta, opts.max_candidates, {},
                                            arc_interval{0.0, std::min(offset_cap, 0.5)}, opts.search);
      if (found.empty()) {
        failing = "near_return";
        continue;
      }
      for (const auto& cand : found) {
        const precise_real delta(cand.point.theta());
        const precise_real theta = anchor + (sign < 0 ? precise_real(-delta) : delta);
        if (!(theta > 0) || !(theta < arc_end)) continue;
        bool distinct = true;
        for (int q = 1; q < l; ++q) distinct = distinct && c.thetas[q - 1] != theta;
        if (!distinct) continue;
        c.thetas[l - 1] = theta;
        c.gaps[l - 1] = chord_from_turns(static_cast<double>(precise_real(theta - anchor)));
        level_budget b = evaluate_level_budget(c, l);
        b.search_eta = eta;
        b.near_return_value = cand.value;
        b.attempts = attempt + 1;
        const bool lookahead_ok =
            l == L || next_level_top_coefficient(c, l) <= std::ldexp(1.0, -(l + 2)) / 2.0;
        if (b.certified() && lookahead_ok) {
          c.budgets.push_back(b);
          accepted = true;
          break;
        }
        failing = b.certified() ? "eigvec_budget" : b.failing_predicate();
      }
    }
    if (!accepted)
      throw budget_infeasible(l, failing, "no admissible offset after " + std::to_string(opts.search_budget + 1) +
                                              " search rounds starting at eta " + std::to_string(eta0));
  }
  return c;
}

// ---------------------------------------------------------------------------
// Operator
// ---------------------------------------------------------------------------

/// T = D + B on an L-level, I-fiber truncation. Slot (i, l) has index (l-1) I + (i-1).
struct truncated_operator {
  int levels = 0;
  int fibers = 0;
  vector diagonal;   // D entries per slot
  vector superband;  // superband[(l-2) I + (i-1)] maps slot (i,l) to (i,l-1), l >= 2
  std::vector<precise_real> level_thetas;

  int dimension() const { return levels * fibers; }
  static Eigen::Index index(int i, int l, int I) { return static_cast<Eigen::Index>(l - 1) * I + (i - 1); }

  matrix diagonal_part() const { return diagonal.asDiagonal(); }
  matrix shift_part() const {
    matrix B = matrix::Zero(dimension(), dimension());
    for (int l = 2; l <= levels; ++l)
      for (int i = 1; i <= fibers; ++i)
        B(index(i, l - 1, fibers), index(i, l, fibers)) = superband(static_cast<Eigen::Index>(l - 2) * fibers + (i - 1));
    return B;
  }
  matrix dense() const { return diagonal_part() + shift_part(); }

  /// Restriction to fiber i: an L x L upper bidiagonal matrix.
  matrix fiber_block(int i) const {
    matrix T = matrix::Zero(levels, levels);
    for (int l = 1; l <= levels; ++l) T(l - 1, l - 1) = diagonal(index(i, l, fibers));
    for (int l = 2; l <= levels; ++l) T(l - 2, l - 1) = superband(static_cast<Eigen::Index>(l - 2) * fibers + (i - 1));
    return T;
  }
};

inline truncated_operator assemble_operator(const shift_construction& c, int L, int I) {
  if (L < 1 || L > c.levels()) throw error(errc::size_mismatch, "levels outside construction size");
  if (I < 1) throw error(errc::size_mismatch, "need at least one fiber");
  truncated_operator op;
  op.levels = L;
  op.fibers = I;
  op.diagonal.resize(static_cast<Eigen::Index>(L) * I);
  op.superband = vector::Zero(static_cast<Eigen::Index>(std::max(L - 1, 0)) * I);
  for (int l = 1; l <= L; ++l) {
    op.level_thetas.push_back(c.thetas[l - 1]);
    for (int i = 1; i <= I; ++i) op.diagonal(truncated_operator::index(i, l, I)) = c.lambda(l);
  }
  for (int l = 2; l <= L; ++l)
    for (int i = 1; i <= I; ++i) op.superband(static_cast<Eigen::Index>(l - 2) * I + (i - 1)) = c.alpha(i, l - 1);
  return op;
}

// ---------------------------------------------------------------------------
// Power coefficients and eigenvector chains
// ---------------------------------------------------------------------------

/// Entry t_{k,l}^{(i,n)} of T^n between slots (i,k) and (i,l).
inline cplx power_coefficient(const shift_construction& c, int k, int l, int i, long long n) {
  if (k < 1 || l < 1 || k > c.levels() || l > c.levels() || i < 1 || n < 0)
    throw error(errc::index_out_of_range, "power_coefficient index out of range");
  if (k > l || l - k > n) return 0.0;
  if (k == l) return std::pow(c.lambda(k), static_cast<double>(n));
  double a = 1.0;
  for (int q = k; q < l; ++q) a *= c.alpha(i, q);
  std::vector<cplx> xs;
  for (int q = k; q <= l; ++q) xs.push_back(c.lambda(q));
  return a * symmetric_sum(xs, static_cast<int>(n - (l - k)));
}

struct eigenvector_chain_t {
  int n = 0;
  std::vector<cplx> coeffs;  // c_1 .. c_n
};

inline eigenvector_chain_t eigenvector_chain(const shift_construction& c, int n) {
  if (n < 1 || n > c.levels()) throw error(errc::index_out_of_range, "chain level out of range");
  eigenvector_chain_t u;
  u.n = n;
  for (int m = 1; m <= n; ++m)
    u.coeffs.push_back(detail::chain_product(c, n, m) / (detail::fiber_one_weight_product(c, m) * c.gap(m)));
  return u;
}

// ---------------------------------------------------------------------------
// Partial power bound
// ---------------------------------------------------------------------------

struct power_bound_row {
  std::size_t k = 0;
  double n_k = 0.0;
  double norm_diff = 0.0;
  double norm_T = 0.0;
  double analytic_bound = std::numeric_limits<double>::quiet_NaN();
  bool pass = true;
};

struct power_bound_report {
  norm_kind p = norm_kind::two;
  int levels = 0;
  int fibers = 0;
  std::vector<power_bound_row> rows;
  double fiber_truncation_bound = 0.0;
  bool all_pass = true;
  bool anomaly = false;  // budgets certified but a measured deviation exceeded 1
};

/// ||T^{n_k} - D^{n_k}||_p and ||T^{n_k}||_p for k < P.
inline power_bound_report measure_power_deviation(const truncated_operator& op, const index_sequence& seq, std::size_t P,
                                                  norm_kind p) {
  check_horizon(seq, P);
  power_bound_report rep;
  rep.p = p;
  rep.levels = op.levels;
  rep.fibers = op.fibers;
  const matrix T = op.dense();
  for (std::size_t k = 0; k < P; ++k) {
    const auto n = static_cast<std::uint64_t>(seq[k]);
    const matrix Tn = banded_power(T, n, 1, op.fibers);
    vector dn(op.dimension());
    for (Eigen::Index s = 0; s < dn.size(); ++s) dn(s) = std::pow(op.diagonal(s), static_cast<double>(n));
    matrix E = Tn;
    E.diagonal() -= dn;
    power_bound_row row;
    row.k = k;
    row.n_k = seq[k];
    row.norm_diff = operator_norm(E, p);
    row.norm_T = operator_norm(Tn, p);
    row.pass = row.norm_diff <= 1.0 + 1e-8 && row.norm_T <= 2.0 + 1e-8;
    rep.all_pass = rep.all_pass && row.pass;
    rep.rows.push_back(row);
  }
  return rep;
}

/// sum_l sum_k w_{l-1}...w_k (g_l / g_k) |s_{k,l}^{(n)}| over levels 2..L.
inline double analytic_power_bound(const shift_construction& c, int L, double n) {
  double total = 0.0;
  for (int l = 2; l <= L; ++l) {
    std::vector<cplx> backwards;
    for (int k = l; k >= 1; --k) backwards.push_back(c.lambda(k));
    const auto h = trailing_symmetric_sums(backwards, static_cast<int>(n));
    double wprod = 1.0;
    for (int k = l - 1; k >= 1; --k) {
      wprod *= c.schedule.level(k);
      const auto span = static_cast<std::size_t>(l - k);
      if (span >= h.size()) break;
      total += wprod * (c.gap(l) / c.gap(k)) * std::abs(h[span]);
    }
  }
  return total;
}

inline power_bound_report verify_partial_power_bound(const shift_construction& c, int L, int I, std::size_t P, norm_kind p) {
  if (!c.certified()) throw error(errc::budgets_not_certified, "construction budgets did not all pass");
  if (P > c.horizon) throw error(errc::horizon_exceeds_sequence, "P exceeds the construction horizon");
  const truncated_operator op = assemble_operator(c, L, I);
  power_bound_report rep = measure_power_deviation(op, c.seq, P, p);
  double worst_analytic = 0.0;
  for (auto& row : rep.rows) {
    row.analytic_bound = analytic_power_bound(c, L, row.n_k);
    worst_analytic = std::max(worst_analytic, row.analytic_bound);
    const bool consistent = row.analytic_bound >= row.norm_diff - 1e-8;
    row.pass = row.pass && consistent;
    rep.all_pass = rep.all_pass && row.pass;
    rep.anomaly = rep.anomaly || row.norm_diff > 1.0 + 1e-8;
  }
  rep.fiber_truncation_bound = std::ldexp(1.0, -I) * worst_analytic;
  return rep;
}

}  // namespace jamison
