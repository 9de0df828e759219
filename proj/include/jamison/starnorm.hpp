#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "index_sequence.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"
#include "sequences.hpp"
#include "torus.hpp"

namespace jamison {

using cplx_t = std::complex<double>;

inline constexpr double sqrt_half_pi = 1.2533141373155002512;  // sqrt(pi/2)

// ---------------------------------------------------------------------------
// Exponential spans (frequencies in radians)
// ---------------------------------------------------------------------------

struct exp_term {
  cplx_t coefficient;
  double frequency;
};

/// Finite combination sum c_m e^{i eta_m x}; equal frequencies are merged, zero terms dropped.
class exp_span {
 public:
  exp_span() = default;
  explicit exp_span(std::vector<exp_term> terms) {
    for (const auto& t : terms)
      if (!std::isfinite(t.frequency) || !std::isfinite(t.coefficient.real()) || !std::isfinite(t.coefficient.imag()))
        throw error(errc::out_of_domain, "non-finite exponential term");
    std::stable_sort(terms.begin(), terms.end(), [](const exp_term& a, const exp_term& b) { return a.frequency < b.frequency; });
    for (const auto& t : terms) {
      if (!terms_.empty() && terms_.back().frequency == t.frequency)
        terms_.back().coefficient += t.coefficient;
      else
        terms_.push_back(t);
    }
    std::erase_if(terms_, [](const exp_term& t) { return t.coefficient == cplx_t(0.0); });
  }

  static exp_span single(double eta, cplx_t c = 1.0) { return exp_span({{c, eta}}); }
  static exp_span difference(double eta, double xi) { return exp_span({{1.0, eta}, {-1.0, xi}}); }

  const std::vector<exp_term>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }
  const exp_term& operator[](std::size_t m) const { return terms_[m]; }

 private:
  std::vector<exp_term> terms_;
};

/// e^{i eta t} - 1 with the phase reduced in turns before the trig call.
inline cplx_t phase_minus_one(double eta, double t) {
  const double x = radians_to_turns(eta);
  const double p = t * x;
  return unimodular_minus_one(std::fma(t, x, -std::nearbyint(p)));
}

inline cplx_t phase(double eta, double t) { return 1.0 + phase_minus_one(eta, t); }

/// S_t: c_m -> c_m e^{i eta_m t}.
inline exp_span translate(const exp_span& v, double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw error(errc::precondition_violated, "translate needs a finite t >= 0");
  std::vector<exp_term> out;
  out.reserve(v.size());
  for (const auto& term : v.terms()) out.push_back({term.coefficient * phase(term.frequency, t), term.frequency});
  return exp_span(std::move(out));
}

// ---------------------------------------------------------------------------
// Kernel int_0^inf e^{iat} / (1 + t^2) dt = (pi/2) e^{-|a|} + i S(a)
// ---------------------------------------------------------------------------

/// S(a) = int_0^inf sin(at)/(1+t^2) dt by half-period G7-K15 panels on [0, T] and a
/// two-term integration-by-parts tail with remainder <= 2T / (a^2 (1+T^2)^2).
inline double sine_kernel(double a, double tolerance = 1e-13) {
  if (a == 0.0) return 0.0;
  if (a < 0.0) return -sine_kernel(-a, tolerance);
  const double pi = std::numbers::pi;
  double T = std::max(1.0, std::cbrt(2.0 / (a * a * tolerance)));
  while (2.0 * T / (a * a * (1.0 + T * T) * (1.0 + T * T)) > tolerance) T *= 1.25;
  const double half = pi / a;
  const auto panels = static_cast<std::size_t>(std::ceil(T / half));
  T = static_cast<double>(panels) * half;
  auto f = [a](double t) { return std::sin(a * t) / (1.0 + t * t); };
  const double per_panel = std::max(tolerance / static_cast<double>(panels), 1e-17);
  double sum = 0.0, comp = 0.0;
  for (std::size_t k = 0; k < panels; ++k) {
    const double lo = static_cast<double>(k) * half, hi = static_cast<double>(k + 1) * half;
    auto r = gauss_kronrod_15(f, lo, hi);
    if (r.error > per_panel) r = integrate(f, lo, hi, per_panel, 0.0, 4096);
    const double y = r.value - comp;
    const double s = sum + y;
    comp = (s - sum) - y;
    sum = s;
  }
  const double sign = panels % 2 == 0 ? 1.0 : -1.0;
  return sum + sign / (a * (1.0 + T * T));
}

inline double cosine_kernel(double a) { return std::numbers::pi / 2.0 * std::exp(-std::abs(a)); }

inline cplx_t weight_kernel(double a, double tolerance = 1e-13) { return {cosine_kernel(a), sine_kernel(a, tolerance)}; }

/// Gram matrix of <e_m, e_n> in the weighted half-line norm.
class span_gram {
 public:
  span_gram(const exp_span& v, bool eager, double tolerance = 1e-13) : v_(&v), tol_(tolerance) {
    const std::size_t m = v.size();
    sine_.assign(m * m, std::numeric_limits<double>::quiet_NaN());
    if (eager)
      for (std::size_t p = 0; p < m; ++p)
        for (std::size_t q = p + 1; q < m; ++q) sine(p, q);
  }

  /// ||sum_m u_m e_m||^2 for coefficients u (defaults to the span's own).
  double norm_squared(const std::vector<cplx_t>& u) const {
    const std::size_t m = v_->size();
    double s = 0.0;
    for (std::size_t p = 0; p < m; ++p) s += std::norm(u[p]) * (std::numbers::pi / 2.0);
    for (std::size_t p = 0; p < m; ++p)
      for (std::size_t q = p + 1; q < m; ++q) {
        const cplx_t prod = u[p] * std::conj(u[q]);
        const double a = (*v_)[p].frequency - (*v_)[q].frequency;
        double cross = prod.real() * cosine_kernel(a);
        if (prod.imag() != 0.0) cross -= prod.imag() * sine(p, q);
        s += 2.0 * cross;
      }
    return std::max(s, 0.0);
  }

  double norm(const std::vector<cplx_t>& u) const { return std::sqrt(norm_squared(u)); }

 private:
  double sine(std::size_t p, std::size_t q) const {
    double& slot = sine_[p * v_->size() + q];
    if (std::isnan(slot)) slot = sine_kernel((*v_)[p].frequency - (*v_)[q].frequency, tol_);
    return slot;
  }

  const exp_span* v_;
  double tol_;
  mutable std::vector<double> sine_;
};

inline std::vector<cplx_t> coefficients(const exp_span& v) {
  std::vector<cplx_t> u;
  for (const auto& t : v.terms()) u.push_back(t.coefficient);
  return u;
}

/// (int_0^inf |f(t)|^2 / (1+t^2) dt)^{1/2}.
inline double base_norm(const exp_span& v) {
  if (v.empty()) return 0.0;
  if (v.size() == 1) return std::abs(v[0].coefficient) * sqrt_half_pi;
  return span_gram(v, false).norm(coefficients(v));
}

/// Independent check: direct quadrature of |f|^2/(1+t^2) on [0, T], exact tail of the
/// diagonal part and an integration-by-parts bound for the oscillating cross terms.
inline quadrature_result base_norm_squared_quadrature(const exp_span& v, double tolerance = 1e-10) {
  quadrature_result out;
  if (v.empty()) return out;
  double flat = 0.0, osc = 0.0, a_min = std::numeric_limits<double>::infinity(), a_max = 0.0;
  for (std::size_t p = 0; p < v.size(); ++p) {
    flat += std::norm(v[p].coefficient);
    for (std::size_t q = 0; q < v.size(); ++q)
      if (p != q) {
        osc += std::abs(v[p].coefficient) * std::abs(v[q].coefficient);
        const double a = std::abs(v[p].frequency - v[q].frequency);
        a_min = std::min(a_min, a);
        a_max = std::max(a_max, a);
      }
  }
  double T = 1.0;
  if (osc > 0.0) T = std::max(1.0, std::sqrt(2.0 * osc / (a_min * tolerance)));
  const double width = a_max > 0.0 ? std::numbers::pi / a_max : T;
  const auto panels = static_cast<std::size_t>(std::ceil(T / width));
  T = static_cast<double>(panels) * width;
  auto f = [&v](double t) {
    cplx_t s = 0.0;
    for (const auto& term : v.terms()) s += term.coefficient * std::polar(1.0, term.frequency * t);
    return std::norm(s) / (1.0 + t * t);
  };
  const double per_panel = std::max(tolerance / static_cast<double>(panels), 1e-17);
  for (std::size_t k = 0; k < panels; ++k) {
    auto r = integrate(f, static_cast<double>(k) * width, static_cast<double>(k + 1) * width, per_panel, 0.0, 4096);
    out.value += r.value;
    out.error += r.error;
    out.evaluations += r.evaluations;
    out.converged = out.converged && r.converged;
  }
  out.value += flat * (std::numbers::pi / 2.0 - std::atan(T));
  if (osc > 0.0) out.error += 2.0 * osc / (a_min * (1.0 + T * T));
  return out;
}

// ---------------------------------------------------------------------------
// Tuple search over products of (S_{n_k} - I) factors
// ---------------------------------------------------------------------------

struct tuple_search_options {
  std::size_t beam_width = 32;
  int exhaustive_j = 3;
  std::size_t exhaustive_K = 12;
};

struct tuple_search_result {
  std::vector<double> best;                      // per j = 0..J
  std::vector<std::vector<std::size_t>> witness;  // maximizing multiset per j
  std::vector<bool> exhaustive;                  // per j
};

namespace detail {

/// Maximizes score(state) over multisets {k_0 <= ... <= k_j} of [0, K) for j = 0..J.
/// state(k) starts a tuple, extend(state, k) appends a factor.
template <class State, class Init, class Extend, class Score>
tuple_search_result tuple_search(std::size_t K, int J, const tuple_search_options& opts, Init init, Extend extend,
                                 Score score) {
  tuple_search_result res;
  if (J < 0 || K == 0) return res;
  const auto levels = static_cast<std::size_t>(J) + 1;
  res.best.assign(levels, 0.0);
  res.witness.assign(levels, {});
  res.exhaustive.assign(levels, false);

  const bool small = K <= opts.exhaustive_K;
  const int exhaustive_top = small ? std::min(J, opts.exhaustive_j) : -1;
  if (exhaustive_top >= 0) {
    std::vector<std::size_t> tuple;
    auto visit = [&](auto&& self, const State& s, std::size_t from) -> void {
      const std::size_t j = tuple.size() - 1;
      const double sc = score(s);
      if (sc > res.best[j] || res.witness[j].empty()) {
        res.best[j] = sc;
        res.witness[j] = tuple;
      }
      if (static_cast<int>(j) == exhaustive_top) return;
      for (std::size_t k = from; k < K; ++k) {
        tuple.push_back(k);
        self(self, extend(s, k), k);
        tuple.pop_back();
      }
    };
    for (std::size_t k = 0; k < K; ++k) {
      tuple.assign(1, k);
      visit(visit, init(k), k);
    }
    for (int j = 0; j <= exhaustive_top; ++j) res.exhaustive[j] = true;
  }
  if (exhaustive_top >= J) return res;

  struct node {
    State state;
    std::vector<std::size_t> tuple;
    double score;
  };
  auto order = [](const node& a, const node& b) { return a.score != b.score ? a.score > b.score : a.tuple < b.tuple; };
  std::vector<node> beam;
  for (std::size_t k = 0; k < K; ++k) {
    State s = init(k);
    const double sc = score(s);
    beam.push_back({std::move(s), {k}, sc});
  }
  for (std::size_t j = 0;; ++j) {
    std::sort(beam.begin(), beam.end(), order);
    if (beam.size() > opts.beam_width) beam.resize(opts.beam_width);
    if (static_cast<int>(j) > exhaustive_top && !beam.empty()) {
      res.best[j] = beam.front().score;
      res.witness[j] = beam.front().tuple;
    }
    if (j + 1 == levels) break;
    std::vector<node> next;
    next.reserve(beam.size() * K);
    for (const auto& b : beam)
      for (std::size_t k = b.tuple.back(); k < K; ++k) {
        State s = extend(b.state, k);
        const double sc = score(s);
        auto t = b.tuple;
        t.push_back(k);
        next.push_back({std::move(s), std::move(t), sc});
      }
    beam = std::move(next);
  }
  return res;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Star norm
// ---------------------------------------------------------------------------

enum class star_mode { exact_factorized, searched_lower_bound, analytic_upper_bound };

inline const char* to_string(star_mode m) {
  switch (m) {
    case star_mode::exact_factorized: return "exact-factorized";
    case star_mode::searched_lower_bound: return "searched-lower-bound";
    case star_mode::analytic_upper_bound: return "analytic-upper-bound";
  }
  return "searched-lower-bound";
}

struct star_norm_value {
  double value = 0.0;        // max(base, searched or exact sup)
  double base = 0.0;
  double upper_bound = 0.0;  // analytic, valid for every j at horizon K
  int J = 0;
  std::size_t K = 0;
  star_mode mode = star_mode::exact_factorized;
  std::vector<double> weighted;  // 4^{-(j+1)} sup_tuples ||prod (S - I) v||, j = 0..J
  int exhaustive_through = -1;   // largest j searched exhaustively
};

struct star_options {
  tuple_search_options search;
  double sine_tolerance = 1e-13;
  int upper_bound_terms = 256;  // j range for the analytic sup
};

namespace detail {

/// max_{k<K} |e^{i eta n_k} - 1|
inline double factor_radius(double eta, const index_sequence& seq, std::size_t K) {
  double r = 0.0;
  for (std::size_t k = 0; k < K; ++k) r = std::max(r, std::abs(phase_minus_one(eta, seq[k])));
  return r;
}

/// max_{k<K} |e^{i eta n_k} - e^{i xi n_k}|, accurate for close frequencies.
inline double frequency_distance(double eta, double xi, const index_sequence& seq, std::size_t K) {
  double d = 0.0;
  for (std::size_t k = 0; k < K; ++k) d = std::max(d, std::abs(phase_minus_one(eta - xi, seq[k])));
  return d;
}

/// Analytic sup_j 4^{-(j+1)} sup_tuples ||prod (S - I) v||.
inline double star_upper_tail(const exp_span& v, double vnorm, const index_sequence& seq, std::size_t K, int terms) {
  std::vector<double> r;
  double generic = 0.0;
  for (const auto& t : v.terms()) {
    r.push_back(factor_radius(t.frequency, seq, K));
    generic += std::abs(t.coefficient) * r.back() * sqrt_half_pi / 4.0;
  }
  if (v.size() != 2) return generic;
  // prod P_1 v + c_2 (prod P_2 - prod P_1) e_xi, and symmetrically.
  const double d = frequency_distance(v[0].frequency, v[1].frequency, seq, K);
  const double c1 = std::abs(v[0].coefficient), c2 = std::abs(v[1].coefficient);
  double sup = 0.0;
  double p1 = 1.0, p2 = 1.0, scale = 1.0, two_j = 1.0;
  for (int j = 0; j < terms; ++j) {
    p1 *= r[0];
    p2 *= r[1];
    scale /= 4.0;
    const double dj = std::min((j + 1) * two_j * d, p1 + p2);
    two_j *= 2.0;
    const double a = p1 * vnorm + c2 * dj * sqrt_half_pi;
    const double b = p2 * vnorm + c1 * dj * sqrt_half_pi;
    const double g = (c1 * p1 + c2 * p2) * sqrt_half_pi;
    sup = std::max(sup, scale * std::min({a, b, g}));
  }
  return std::min(sup, generic);
}

}  // namespace detail

/// Truncated star norm: sup over j <= J and index multisets from [0, K).
inline star_norm_value star_norm(const exp_span& v, const index_sequence& seq, int J, std::size_t K,
                                 const star_options& opts = {}) {
  if (J < 0) throw error(errc::precondition_violated, "J must be >= 0");
  check_horizon(seq, K);
  star_norm_value out;
  out.J = J;
  out.K = K;
  out.weighted.assign(static_cast<std::size_t>(J) + 1, 0.0);
  if (v.empty()) return out;

  if (v.size() == 1) {
    const double c = std::abs(v[0].coefficient);
    const double r = detail::factor_radius(v[0].frequency, seq, K);
    out.base = c * sqrt_half_pi;
    double p = 1.0;
    for (int j = 0; j <= J; ++j) {
      p *= r / 4.0;
      out.weighted[j] = out.base * p;
    }
    out.value = std::max(out.base, out.weighted.empty() ? 0.0 : out.weighted.front());
    out.upper_bound = std::max(out.base, K > 0 ? out.base * r / 4.0 : 0.0);
    out.exhaustive_through = J;
    return out;
  }

  out.mode = star_mode::searched_lower_bound;
  const span_gram gram(v, true, opts.sine_tolerance);
  const auto c = coefficients(v);
  out.base = gram.norm(c);
  out.upper_bound = std::max(out.base, detail::star_upper_tail(v, out.base, seq, K, opts.upper_bound_terms));
  if (K == 0) {
    out.value = out.base;
    return out;
  }

  const std::size_t m = v.size();
  std::vector<std::vector<cplx_t>> factor(K, std::vector<cplx_t>(m));
  for (std::size_t k = 0; k < K; ++k)
    for (std::size_t q = 0; q < m; ++q) factor[k][q] = phase_minus_one(v[q].frequency, seq[k]);
  using state = std::vector<cplx_t>;
  auto init = [&](std::size_t k) {
    state s(m);
    for (std::size_t q = 0; q < m; ++q) s[q] = c[q] * factor[k][q];
    return s;
  };
  auto extend = [&](const state& s, std::size_t k) {
    state t(s);
    for (std::size_t q = 0; q < m; ++q) t[q] *= factor[k][q];
    return t;
  };
  auto score = [&](const state& s) { return gram.norm(s); };
  const auto res = detail::tuple_search<state>(K, J, opts.search, init, extend, score);
  double scale = 1.0;
  out.value = out.base;
  for (int j = 0; j <= J; ++j) {
    scale /= 4.0;
    out.weighted[j] = scale * res.best[j];
    out.value = std::max(out.value, out.weighted[j]);
    if (res.exhaustive[j]) out.exhaustive_through = j;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

struct translation_row {
  std::size_t sample = 0;
  std::size_t k = 0;
  double n_k = 0.0;
  double left = 0.0;   // analytic upper bound of ||S_{n_k} v||_*
  double right = 0.0;  // ||v||_* (exact or searched)
  double ratio = 0.0;
  bool asserted = false;
  bool pass = true;
};

struct translation_report {
  std::vector<translation_row> rows;
  double max_ratio = 0.0;
  bool all_pass = true;
};

/// ||S_{n_k} v||_* <= 5 ||v||_* for k < P; asserted for spans of at most two terms.
inline translation_report verify_translation_bound(const index_sequence& seq, const std::vector<exp_span>& samples,
                                                   int J, std::size_t K, std::size_t P, const star_options& opts = {}) {
  check_horizon(seq, P);
  check_horizon(seq, K);
  translation_report rep;
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const auto right = star_norm(samples[s], seq, J, K, opts);
    for (std::size_t k = 0; k < P; ++k) {
      translation_row row;
      row.sample = s;
      row.k = k;
      row.n_k = seq[k];
      row.left = star_norm(translate(samples[s], seq[k]), seq, J, K, opts).upper_bound;
      row.right = right.value;
      row.ratio = row.right > 0.0 ? row.left / row.right : (row.left > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
      row.asserted = samples[s].size() <= 2;
      row.pass = !row.asserted || row.left <= 5.0 * row.right * (1.0 + 1e-6);
      rep.max_ratio = std::max(rep.max_ratio, row.ratio);
      rep.all_pass = rep.all_pass && row.pass;
      rep.rows.push_back(row);
    }
  }
  return rep;
}

struct dj_row {
  int j = 0;
  double d_j = 0.0;
  double bound = 0.0;  // (j+1) 2^j d
  std::vector<std::size_t> witness;
  bool exhaustive = false;
  bool pass = true;
};

struct dj_report {
  double d = 0.0;  // d_(n_k)(e^{i eta}, e^{i xi}) at horizon K
  std::vector<dj_row> rows;
  bool all_pass = true;
};

/// d_j = sup_tuples |prod (e^{i eta n} - 1) - prod (e^{i xi n} - 1)| against (j+1) 2^j d.
inline dj_report dj_bound_check(double eta, double xi, const index_sequence& seq, int J, std::size_t K,
                                const tuple_search_options& opts = {}) {
  if (J < 0) throw error(errc::precondition_violated, "J must be >= 0");
  check_horizon(seq, K);
  dj_report rep;
  // Same value as d_metric on the turns, but taken from eta - xi so close pairs keep their digits.
  for (std::size_t k = 0; k < K; ++k) rep.d = std::max(rep.d, std::abs(phase_minus_one(eta - xi, seq[k])));
  struct state {
    cplx_t a, b, diff;  // prod P_eta, prod P_xi, and their difference kept by telescoping
  };
  auto init = [&](std::size_t k) {
    const cplx_t pa = phase_minus_one(eta, seq[k]), pb = phase_minus_one(xi, seq[k]);
    return state{pa, pb, phase(xi, seq[k]) * phase_minus_one(eta - xi, seq[k])};
  };
  auto extend = [&](const state& s, std::size_t k) {
    const cplx_t pa = phase_minus_one(eta, seq[k]), pb = phase_minus_one(xi, seq[k]);
    const cplx_t step = phase(xi, seq[k]) * phase_minus_one(eta - xi, seq[k]);
    return state{s.a * pa, s.b * pb, s.diff * pb + s.a * step};
  };
  auto score = [](const state& s) { return std::abs(s.diff); };
  const auto res = detail::tuple_search<state>(K, J, opts, init, extend, score);
  double two_j = 1.0;
  for (int j = 0; j <= J; ++j) {
    dj_row row;
    row.j = j;
    row.d_j = res.best.empty() ? 0.0 : res.best[j];
    row.witness = res.best.empty() ? std::vector<std::size_t>{} : res.witness[j];
    row.exhaustive = !res.exhaustive.empty() && res.exhaustive[j];
    row.bound = (j + 1) * two_j * rep.d;
    two_j *= 2.0;
    row.pass = row.d_j <= row.bound * (1.0 + 1e-12) + 1e-15;
    rep.all_pass = rep.all_pass && row.pass;
    rep.rows.push_back(row);
  }
  return rep;
}

struct eigenfield_row {
  double eta = 0.0, xi = 0.0;
  double base = 0.0;
  double d_metric = 0.0;
  double star_searched = 0.0;
  double star_upper = 0.0;
  double ratio = 0.0;
  bool pass = true;
};

struct eigenfield_report {
  std::vector<eigenfield_row> rows;
  double C_impl = sqrt_half_pi + 1.0;
  double max_ratio = 0.0;
  bool all_pass = true;
};

/// ||e_eta - e_xi||_* against ||e_eta - e_xi|| + d_(n_k) for all pairs of angles (turns).
inline eigenfield_report eigenfield_modulus(const index_sequence& seq, const std::vector<double>& thetas, int J,
                                            std::size_t K, const star_options& opts = {}) {
  if (thetas.size() < 2) throw error(errc::precondition_violated, "eigenfield_modulus needs at least two angles");
  check_horizon(seq, K);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t a = 0; a < thetas.size(); ++a)
    for (std::size_t b = a + 1; b < thetas.size(); ++b) pairs.emplace_back(a, b);
  eigenfield_report rep;
  auto shards = map_shards<std::vector<eigenfield_row>>(
      pairs.size(),
      [&](std::size_t, std::size_t begin, std::size_t end) {
        std::vector<eigenfield_row> rows;
        for (std::size_t p = begin; p < end; ++p) {
          eigenfield_row row;
          row.eta = turns_to_radians(thetas[pairs[p].first]);
          row.xi = turns_to_radians(thetas[pairs[p].second]);
          const auto v = exp_span::difference(row.eta, row.xi);
          row.base = base_norm(v);
          row.d_metric = d_metric(torus_point(thetas[pairs[p].first]), torus_point(thetas[pairs[p].second]), seq, K);
          const auto s = star_norm(v, seq, J, K, opts);
          row.star_searched = s.value;
          row.star_upper = s.upper_bound;
          const double denom = row.base + row.d_metric;
          row.ratio = denom > 0.0 ? row.star_searched / denom : 0.0;
          rows.push_back(row);
        }
        return rows;
      },
      1);
  for (auto& shard : shards)
    for (auto& row : shard) {
      row.pass = row.ratio <= rep.C_impl;
      rep.max_ratio = std::max(rep.max_ratio, row.ratio);
      rep.all_pass = rep.all_pass && row.pass;
      rep.rows.push_back(row);
    }
  return rep;
}

}  // namespace jamison
