#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "index_sequence.hpp"
#include "parallel.hpp"
#include "torus.hpp"

namespace jamison {

// ---------------------------------------------------------------------------
// Horizon profile f_K(theta) = max_{k<K} ||n_k theta||
// ---------------------------------------------------------------------------

inline double horizon_profile(const index_sequence& seq, std::size_t K, double theta) {
  double m = 0.0;
  for (std::size_t k = 0; k < K; ++k) m = std::max(m, scaled_torus_norm(seq[k], theta));
  return m;
}

/// Like horizon_profile, but stops as soon as the running max reaches cap.
inline double horizon_profile_capped(const index_sequence& seq, std::size_t K, double theta, double cap) {
  double m = 0.0;
  for (std::size_t k = K; k-- > 0;) {
    m = std::max(m, scaled_torus_norm(seq[k], theta));
    if (m >= cap) return m;
  }
  return m;
}

/// max_{k<K} |e^{2 pi i n_k a} - e^{2 pi i n_k b}|.
inline double d_metric(const torus_point& a, const torus_point& b, const index_sequence& seq, std::size_t K) {
  check_horizon(seq, K);
  const double d = a.theta() - b.theta();
  double m = 0.0;
  for (std::size_t k = 0; k < K; ++k)
    m = std::max(m, 2.0 * std::sin(std::numbers::pi * scaled_torus_norm(seq[k], d)));
  return m;
}

// ---------------------------------------------------------------------------
// Separation constant
// ---------------------------------------------------------------------------

struct separation_report {
  std::size_t horizon = 0;
  double epsilon_hat = 0.0;        // chordal units
  double epsilon_hat_torus = 0.0;  // torus-norm units
  torus_point witness;
  double grid_resolution = 0.0;
  double certified_lower_torus = 0.0;
  double domain_floor = 0.0;
  bool boundary_limited = false;
  std::size_t evaluations = 0;
};

struct separation_options {
  /// Lower end of the scanned interval. Defaults to 1/(2 n_K); values of
  /// theta below it are unresolved at horizon K since f_K(theta) = n_K theta there.
  std::optional<double> domain_floor;
  std::size_t refine_candidates = 8;
  std::size_t max_grid_points = std::size_t{1} << 26;
};

/// Start of the resolved domain at horizon K; 0 when n_K = 1.
inline double resolved_floor(const index_sequence& seq, std::size_t K) {
  const double nK = seq[K - 1];
  return nK > 1.0 ? 0.5 / nK : 0.0;
}

namespace detail {

struct grid_candidate {
  double value;
  double theta;
  friend bool operator<(const grid_candidate& a, const grid_candidate& b) {
    return a.value != b.value ? a.value < b.value : a.theta < b.theta;
  }
};

struct shard_minima {
  std::vector<grid_candidate> best;
  std::size_t evaluations = 0;
};

inline void keep_best(std::vector<grid_candidate>& best, grid_candidate c, std::size_t keep) {
  if (best.size() < keep) {
    best.push_back(c);
    std::sort(best.begin(), best.end());
    return;
  }
  if (!(c < best.back())) return;
  best.back() = c;
  std::sort(best.begin(), best.end());
}

}  // namespace detail

inline separation_report separation_constant(const index_sequence& seq, std::size_t K, double resolution,
                                             int refine_steps, const separation_options& opts = {}) {
  if (!(resolution > 0.0) || !std::isfinite(resolution) || resolution > 0.5)
    throw error(errc::invalid_resolution, "resolution must lie in (0, 1/2]");
  if (K < 1) throw error(errc::horizon_exceeds_sequence, "horizon must be >= 1");
  check_horizon(seq, K);

  const double lo = opts.domain_floor ? *opts.domain_floor : resolved_floor(seq, K);
  if (!(lo >= 0.0 && lo < 0.5)) throw error(errc::invalid_resolution, "domain floor outside [0, 1/2)");
  const bool open = lo == 0.0;
  const double width = 0.5 - lo;
  // Dips of f_K have width ~ 1/n_K; the spacing is tightened to resolve them
  // unless that would exceed max_grid_points.
  double spacing = resolution;
  const double dip = 0.25 / seq[K - 1];
  if (dip < spacing && width / dip <= static_cast<double>(opts.max_grid_points)) spacing = dip;
  const std::size_t cells = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(width / spacing)));
  const double h = width / static_cast<double>(cells);
  // Points lo + i h for i in [first, cells]; the open end skips theta = 0.
  const std::size_t first = open ? 1 : 0;
  const std::size_t count = cells + 1 - first;
  const std::size_t keep = std::max<std::size_t>(1, opts.refine_candidates);

  auto shards = map_shards<detail::shard_minima>(count, [&](std::size_t, std::size_t b, std::size_t e) {
    detail::shard_minima out;
    for (std::size_t idx = b; idx < e; ++idx) {
      const std::size_t i = idx + first;
      const double theta = i == cells ? 0.5 : lo + static_cast<double>(i) * h;
      const double cap = out.best.size() < keep ? std::numeric_limits<double>::infinity() : out.best.back().value;
      const double v = horizon_profile_capped(seq, K, theta, cap);
      ++out.evaluations;
      if (v < cap) detail::keep_best(out.best, {v, theta}, keep);
    }
    return out;
  });

  std::vector<detail::grid_candidate> best;
  std::size_t evaluations = 0;
  for (auto& s : shards) {
    evaluations += s.evaluations;
    for (auto& c : s.best) detail::keep_best(best, c, keep);
  }
  const double grid_min = best.front().value;

  detail::grid_candidate winner = best.front();
  for (const auto& start : best) {
    double x = start.theta, fx = start.value, step = h;
    for (int r = 0; r < refine_steps; ++r) {
      for (double off : {-2.0 / 3.0, -1.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0}) {
        const double y = x + off * step;
        if (y > 0.5 || y < lo || (open && y <= 0.0)) continue;
        const double fy = horizon_profile(seq, K, y);
        ++evaluations;
        if (fy < fx || (fy == fx && y < x)) {
          fx = fy;
          x = y;
        }
      }
      step /= 3.0;
    }
    detail::grid_candidate c{fx, x};
    if (c < winner) winner = c;
  }

  separation_report rep;
  rep.horizon = K;
  rep.epsilon_hat_torus = winner.value;
  rep.epsilon_hat = chord_from_turns(winner.value);
  rep.witness = torus_point(winner.theta);
  rep.grid_resolution = h;
  rep.domain_floor = lo;
  rep.evaluations = evaluations;
  const double lipschitz = seq[K - 1];
  rep.certified_lower_torus = open ? 0.0 : std::max(0.0, grid_min - lipschitz * h / 2.0);
  rep.boundary_limited = open ? winner.theta <= 2.0 * h : (winner.theta - lo) <= h;
  return rep;
}

// ---------------------------------------------------------------------------
// Jamison classification (heuristic, finite horizon)
// ---------------------------------------------------------------------------

enum class jamison_verdict { separated, vanishing, inconclusive };

inline const char* to_string(jamison_verdict v) {
  switch (v) {
    case jamison_verdict::separated: return "SEPARATED";
    case jamison_verdict::vanishing: return "VANISHING";
    case jamison_verdict::inconclusive: return "INCONCLUSIVE";
  }
  return "INCONCLUSIVE";
}

struct classify_options {
  double resolution = 1e-6;
  int refine_steps = 20;
  double separated_spread = 0.10;
  double vanishing_threshold = 1e-2;
  double vanishing_slope = -0.5;
  std::optional<double> domain_floor;
};

struct jamison_classification {
  std::vector<separation_report> table;
  jamison_verdict verdict = jamison_verdict::inconclusive;
  double floor = 0.0;           // SEPARATED: smallest of the last three estimates (torus units)
  double decay_exponent = 0.0;  // least-squares slope of log eps_hat against log K
  bool heuristic = true;
};

inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2) return 0.0;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(x[i]);
    my += std::log(std::max(y[i], 1e-300));
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(std::max(y[i], 1e-300)) - my);
    sxx += dx * dx;
  }
  return sxx > 0 ? sxy / sxx : 0.0;
}

inline jamison_classification classify_jamison(const index_sequence& seq, const std::vector<std::size_t>& horizons,
                                               const classify_options& opts = {}) {
  if (horizons.empty()) throw error(errc::empty_horizons, "no horizons given");
  for (std::size_t i = 1; i < horizons.size(); ++i)
    if (horizons[i] <= horizons[i - 1]) throw error(errc::precondition_violated, "horizons must be strictly increasing");

  jamison_classification out;
  separation_options sopts;
  sopts.domain_floor = opts.domain_floor;
  std::vector<double> ks, vs;
  for (std::size_t K : horizons) {
    out.table.push_back(separation_constant(seq, K, opts.resolution, opts.refine_steps, sopts));
    ks.push_back(static_cast<double>(K));
    vs.push_back(out.table.back().epsilon_hat_torus);
  }
  out.decay_exponent = loglog_slope(ks, vs);

  const std::size_t n = vs.size();
  if (n >= 3) {
    const double a = vs[n - 3], b = vs[n - 2], c = vs[n - 1];
    const double lo = std::min({a, b, c}), hi = std::max({a, b, c});
    if (lo > opts.vanishing_threshold && hi <= lo * (1.0 + opts.separated_spread)) {
      out.verdict = jamison_verdict::separated;
      out.floor = lo;
      return out;
    }
  }
  bool decreasing = n >= 2;
  for (std::size_t i = 1; i < n; ++i) decreasing = decreasing && vs[i] < vs[i - 1];
  if (decreasing && (vs.back() < opts.vanishing_threshold || out.decay_exponent <= opts.vanishing_slope))
    out.verdict = jamison_verdict::vanishing;
  return out;
}

// ---------------------------------------------------------------------------
// Near-return search
// ---------------------------------------------------------------------------

struct arc_interval {
  double lo = 0.0;  // open when lo == 0
  double hi = 0.5;
};

struct near_return {
  torus_point point;
  double value = 0.0;
};

struct near_return_options {
  std::size_t grid_points = 1024;
  int max_depth = 64;
  std::size_t zoom_cells = 4;
};

/// Points theta with f_K(theta) <= eta, sorted by (f_K, theta).
/// Since n_0 = 1 forces f_K(theta) >= ||theta||, only (0, eta] is searched.
inline std::vector<near_return> near_return_search(const index_sequence& seq, std::size_t K, double eta,
                                                   std::size_t max_candidates,
                                                   const std::vector<torus_point>& exclude = {},
                                                   std::optional<arc_interval> arc = std::nullopt,
                                                   const near_return_options& opts = {}) {
  if (!(eta > 0.0) || !std::isfinite(eta)) throw error(errc::invalid_eta, "eta must be positive");
  check_horizon(seq, K);
  if (K < 1) throw error(errc::horizon_exceeds_sequence, "horizon must be >= 1");
  arc_interval a = arc ? *arc : arc_interval{resolved_floor(seq, K), 0.5};
  if (!(a.lo >= 0.0 && a.hi <= 0.5 && a.lo < a.hi)) throw error(errc::out_of_domain, "arc must be a sub-interval of (0, 1/2]");
  a.hi = std::min(a.hi, eta);
  std::vector<near_return> found;
  if (max_candidates == 0 || a.lo >= a.hi) return found;

  auto excluded = [&](double theta) {
    for (const auto& p : exclude)
      if (p.theta() == torus_point(theta).theta()) return true;
    return false;
  };
  auto already = [&](double theta) {
    for (const auto& r : found)
      if (r.point.theta() == theta) return true;
    return false;
  };

  const std::size_t G = std::max<std::size_t>(8, opts.grid_points);
  std::vector<std::pair<double, double>> intervals{{a.lo, a.hi}};
  for (int depth = 0; depth < opts.max_depth && !intervals.empty(); ++depth) {
    std::vector<detail::grid_candidate> ranked;
    std::vector<double> spacing;
    for (auto [lo, hi] : intervals) {
      const double h = (hi - lo) / static_cast<double>(G);
      for (std::size_t i = 0; i < G; ++i) {
        const double theta = lo + (static_cast<double>(i) + 0.5) * h;
        if (!(theta > 0.0) || theta < a.lo || theta > a.hi) continue;
        const double v = horizon_profile(seq, K, theta);
        ranked.push_back({v, theta});
        spacing.push_back(h);
        if (v <= eta && !excluded(theta) && !already(theta)) found.push_back({torus_point(theta), v});
      }
    }
    if (found.size() >= max_candidates) break;
    std::vector<std::size_t> order(ranked.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return ranked[x] < ranked[y]; });
    std::vector<std::pair<double, double>> next;
    for (std::size_t r = 0; r < order.size() && next.size() < opts.zoom_cells; ++r) {
      const double c = ranked[order[r]].theta, h = spacing[order[r]];
      const double lo = std::max(a.lo, c - h), hi = std::min(a.hi, c + h);
      if (!(hi > lo) || (hi - lo) < 4.0 * std::numeric_limits<double>::min()) continue;
      if (hi - lo <= std::abs(c) * 1e-15) continue;
      bool overlap = false;
      for (auto& iv : next) overlap = overlap || (lo < iv.second && hi > iv.first);
      if (!overlap) next.emplace_back(lo, hi);
    }
    intervals = std::move(next);
  }
  std::sort(found.begin(), found.end(), [](const near_return& x, const near_return& y) {
    return x.value != y.value ? x.value < y.value : x.point.theta() < y.point.theta();
  });
  if (found.size() > max_candidates) found.resize(max_candidates);
  return found;
}

// ---------------------------------------------------------------------------
// Real sequences and Lemma-style checks
// ---------------------------------------------------------------------------

/// Returns ((n_k), (1, n_k + 1 for k >= 1)) with n_k = floor(t_k), deduplicated.
inline std::pair<index_sequence, index_sequence> integer_part_reduce(const index_sequence& seq) {
  std::vector<double> n = seq.integer_parts();
  n.erase(std::unique(n.begin(), n.end()), n.end());
  std::vector<double> shifted{1.0};
  for (std::size_t k = 1; k < n.size(); ++k) shifted.push_back(n[k] + 1.0);
  shifted.erase(std::unique(shifted.begin(), shifted.end()), shifted.end());
  return {index_sequence(std::move(n)), index_sequence(std::move(shifted))};
}

struct shifted_separation_record {
  bool pass = true;
  double min_slack = std::numeric_limits<double>::infinity();
  std::vector<double> slacks;
};

/// Term-by-term |l^{n+1} - 1| >= |l^n - 1| - eps/2 for |l - 1| <= eps/2.
inline shifted_separation_record shifted_separation_check(const index_sequence& seq, const torus_point& lambda,
                                                          double eps, double tolerance = 1e-12) {
  if (!seq.is_integer()) throw error(errc::precondition_violated, "integer sequence required");
  const double theta = lambda.theta();
  if (chord_from_turns(theta) > eps / 2.0) throw error(errc::precondition_violated, "|lambda - 1| > eps/2");
  shifted_separation_record rec;
  for (std::size_t k = 0; k < seq.size(); ++k) {
    const double n = seq[k];
    const double next = 2.0 * std::sin(std::numbers::pi * scaled_torus_norm(n + 1.0, theta));
    const double cur = 2.0 * std::sin(std::numbers::pi * scaled_torus_norm(n, theta));
    const double slack = next - (cur - eps / 2.0);
    rec.slacks.push_back(slack);
    rec.min_slack = std::min(rec.min_slack, slack);
  }
  rec.pass = rec.min_slack >= -tolerance;
  return rec;
}

struct chord_bounds_report {
  bool pass = true;
  std::size_t count = 0;
  double min_lower_ratio = std::numeric_limits<double>::infinity();  // chord / (4 ||theta||), >= 1
  double max_upper_ratio = 0.0;                                      // chord / (2 pi ||theta||), <= 1
  double min_ratio = std::numeric_limits<double>::infinity();        // chord / ||theta||
  double max_ratio = 0.0;
};

inline chord_bounds_report chord_torus_bounds_check(const std::vector<double>& samples, double slack = 1e-14) {
  if (samples.empty()) throw error(errc::precondition_violated, "no samples");
  chord_bounds_report rep;
  for (double theta : samples) {
    if (!(theta > 0.0 && theta <= 0.5)) throw error(errc::out_of_domain, "sample outside (0, 1/2]");
    const double t = torus_norm(theta);
    const double c = chord_from_turns(theta);
    const double lower = 4.0 * t, upper = 2.0 * std::numbers::pi * t;
    rep.pass = rep.pass && lower <= c + slack && c <= upper + slack;
    rep.min_lower_ratio = std::min(rep.min_lower_ratio, c / lower);
    rep.max_upper_ratio = std::max(rep.max_upper_ratio, c / upper);
    rep.min_ratio = std::min(rep.min_ratio, c / t);
    rep.max_ratio = std::max(rep.max_ratio, c / t);
    ++rep.count;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Packings and dimension probes
// ---------------------------------------------------------------------------

struct separated_family_options {
  std::size_t grid = 7200;
  std::size_t near_return_extras = 64;
  double tolerance = 1e-12;
};

/// Greedy packing in the d_metric at horizon K.
inline std::vector<torus_point> separated_family(const index_sequence& seq, std::size_t K, double eps,
                                                 std::size_t budget, const separated_family_options& opts = {}) {
  if (!(eps > 0.0)) throw error(errc::precondition_violated, "eps must be positive");
  if (budget < 1) throw error(errc::precondition_violated, "budget must be >= 1");
  check_horizon(seq, K);
  std::vector<double> cand;
  for (std::size_t i = 0; i < opts.grid; ++i) cand.push_back(static_cast<double>(i) / static_cast<double>(opts.grid));
  if (K >= 1 && opts.near_return_extras > 0)
    for (const auto& r : near_return_search(seq, K, 0.25, opts.near_return_extras)) cand.push_back(r.point.theta());
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());

  std::vector<torus_point> kept;
  for (double c : cand) {
    const torus_point p(c);
    bool ok = true;
    for (const auto& q : kept)
      if (d_metric(p, q, seq, K) < eps - opts.tolerance) {
        ok = false;
        break;
      }
    if (ok || kept.empty()) kept.push_back(p);
    if (kept.size() >= budget) break;
  }
  return kept;
}

/// Least-squares slope of log N(delta) against log(1/delta), clamped to [0, 1].
inline double box_dimension_estimate(const std::vector<torus_point>& points, const std::vector<double>& scales) {
  std::vector<double> th;
  for (const auto& p : points) th.push_back(p.theta());
  std::sort(th.begin(), th.end());
  th.erase(std::unique(th.begin(), th.end()), th.end());
  if (th.size() < 2) throw error(errc::degenerate_input, "need at least two distinct points");
  if (scales.size() < 2) throw error(errc::degenerate_input, "need at least two scales");
  for (std::size_t i = 0; i < scales.size(); ++i) {
    if (!(scales[i] > 0.0 && scales[i] < 1.0)) throw error(errc::degenerate_input, "scales must lie in (0,1)");
    if (i > 0 && !(scales[i] < scales[i - 1])) throw error(errc::degenerate_input, "scales must be strictly decreasing");
  }
  std::vector<double> x, y;
  for (double delta : scales) {
    std::vector<std::int64_t> bins;
    for (double t : th) bins.push_back(static_cast<std::int64_t>(std::floor(t / delta + 1e-9)));
    std::sort(bins.begin(), bins.end());
    const auto n = std::unique(bins.begin(), bins.end()) - bins.begin();
    x.push_back(std::log(1.0 / delta));
    y.push_back(std::log(static_cast<double>(n)));
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= x.size();
  my /= y.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) sxy += (x[i] - mx) * (y[i] - my), sxx += (x[i] - mx) * (x[i] - mx);
  return std::clamp(sxx > 0 ? sxy / sxx : 0.0, 0.0, 1.0);
}

/// theta = sum_{k=1}^{depth} a_k / (n_k 2^k), digits a_k drawn from a seeded mt19937_64.
inline std::vector<torus_point> lacunary_digit_points(const index_sequence& seq, std::size_t depth, std::size_t count,
                                                      std::uint64_t rng_seed) {
  if (depth + 1 > seq.size()) throw error(errc::depth_exceeds_sequence, "depth exceeds sequence length - 1");
  if (count < 1) throw error(errc::precondition_violated, "count must be >= 1");
  std::mt19937_64 gen(rng_seed);
  std::vector<torus_point> out;
  out.reserve(count);
  for (std::size_t c = 0; c < count; ++c) {
    double theta = 0.0;
    std::uint64_t word = 0;
    for (std::size_t k = 1; k <= depth; ++k) {
      if ((k - 1) % 64 == 0) word = gen();
      if ((word >> ((k - 1) % 64)) & 1u) theta += 1.0 / (seq[k] * std::ldexp(1.0, static_cast<int>(k)));
    }
    out.emplace_back(theta);
  }
  return out;
}

}  // namespace jamison
