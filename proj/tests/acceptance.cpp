// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <jamison/jamison.hpp>

#include "oracles.hpp"

using namespace jamison;

namespace {

struct outcome {
  bool pass = true;
  std::string detail;
};

struct criterion {
  int id;
  const char* name;
  double time_limit;  // seconds, 0 for none
  std::function<outcome()> body;
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

constexpr double two_pi = 2.0 * std::numbers::pi;

const shift_construction& certified() {
  static const shift_construction c =
      build_construction(index_sequence::factorials(8), 8, 8, weight_schedule::linear(8));
  return c;
}

outcome separation_dichotomy() {
  outcome o;
  std::ostringstream d;
  const auto ints = index_sequence::integers(1000);
  for (std::size_t K : {10, 100, 1000}) {
    const double e = separation_constant(ints, K, 1e-6, 20).epsilon_hat_torus;
    o.pass = o.pass && e >= 0.30 && std::abs(e - 1.0 / 3.0) <= 0.04;
    d << "ints K=" << K << ": " << num(e) << "; ";
  }
  const auto fact = index_sequence::factorials(8);
  double prev = 1.0;
  for (std::size_t K = 3; K <= 8; ++K) {
    const auto r = separation_constant(fact, K, 1e-6, 20);
    o.pass = o.pass && r.epsilon_hat_torus < prev;
    prev = r.epsilon_hat_torus;
    if (K == 8) {
      o.pass = o.pass && r.epsilon_hat_torus <= 1.0 / 7.0 + r.grid_resolution * fact[7];
      d << "factorials K=8: " << num(r.epsilon_hat_torus) << ", decreasing from K=3";
    }
  }
  o.detail = d.str();
  return o;
}

outcome construction_certification() {
  outcome o;
  const auto& c = certified();
  o.pass = c.certified() && c.levels() == 8 && c.budgets.size() == 7;
  for (const auto& b : c.budgets) o.pass = o.pass && b.gap_ratio_ok && b.eigvec_budget_ok && b.tail_sum_ok;
  std::ostringstream d;
  d << "factorials certified, g_8 = " << num(c.gap(8)) << "; integers: ";
  try {
    build_construction(index_sequence::integers(100), 8, 100, weight_schedule::linear(8));
    o.pass = false;
    d << "unexpectedly feasible";
  } catch (const budget_infeasible& e) {
    o.pass = o.pass && e.level() <= 3;
    d << "BudgetInfeasible at level " << e.level() << " (" << e.predicate() << ")";
  }
  o.detail = d.str();
  return o;
}

outcome power_bound() {
  const auto rep = verify_partial_power_bound(certified(), 8, 2, 8, norm_kind::two);
  outcome o;
  double worst_diff = 0.0, worst_T = 0.0;
  for (const auto& r : rep.rows) {
    worst_diff = std::max(worst_diff, r.norm_diff);
    worst_T = std::max(worst_T, r.norm_T);
  }
  o.pass = rep.rows.size() == 8 && worst_diff <= 1.0 + 1e-8 && worst_T <= 2.0 + 1e-8;
  o.detail = "max ||T^n - D^n|| = " + num(worst_diff) + ", max ||T^n|| = " + num(worst_T) + " over n_k <= 8!";
  return o;
}

outcome eigenvector_cauchy() {
  outcome o;
  double worst = 0.0;
  for (int n = 3; n <= 8; ++n) {
    const double dist = eigenvector_increment(certified(), n).total;
    o.pass = o.pass && dist <= std::ldexp(1.0, -n);
    worst = std::max(worst, dist * std::ldexp(1.0, n));
  }
  o.detail = "max distance * 2^n = " + num(worst);
  return o;
}

outcome symmetric_sum_oracle() {
  outcome o;
  std::mt19937_64 g(2024);
  double worst_sum = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int r = 1 + static_cast<int>(g() % 5);
    const int m = static_cast<int>(g() % 13);
    std::vector<cplx> x;
    for (int i = 0; i < r; ++i) x.push_back(std::polar(1.0, two_pi * oracle::uniform(g)));
    const cplx ref = oracle::brute_symmetric_sum(x, m);
    worst_sum = std::max(worst_sum, std::abs(symmetric_sum(x, m) - ref) / std::max(1.0, std::abs(ref)));
  }
  double worst_power = 0.0;
  auto compare = [&](const shift_construction& c, int L, int I) {
    const matrix T = assemble_operator(c, L, I).dense();
    matrix Tn = matrix::Identity(T.rows(), T.cols());
    for (int n = 0; n <= 12; ++n) {
      for (int i = 1; i <= I; ++i)
        for (int k = 1; k <= L; ++k)
          for (int l = 1; l <= L; ++l) {
            const cplx ref = Tn(truncated_operator::index(i, k, I), truncated_operator::index(i, l, I));
            worst_power = std::max(worst_power, std::abs(power_coefficient(c, k, l, i, n) - ref) / std::max(1.0, std::abs(ref)));
          }
      Tn = Tn * T;
    }
  };
  for (int L = 2; L <= 8; ++L) {
    std::vector<double> th;
    for (int l = 0; l < L; ++l) th.push_back(oracle::uniform(g, 0.02, 0.98));
    compare(oracle::synthetic_construction(th), L, 2);
  }
  compare(certified(), 8, 2);
  o.pass = worst_sum <= 1e-10 && worst_power <= 1e-10;
  o.detail = "symmetric sum rel err " + num(worst_sum) + ", power coefficient rel err " + num(worst_power);
  return o;
}

matrix_semigroup certified_semigroup() { return principal_log(assemble_operator(certified(), 8, 2)); }

outcome semigroup_lift() {
  const auto sg = certified_semigroup();
  const matrix T = sg.base().dense();
  const double roundtrip = spectral_norm(expm(sg.generator()) - T).upper / spectral_norm(T).value;
  const auto lat = check_lattice(sg, certified().seq, 8, 1e-8);
  double worst_lat = 0.0;
  for (const auto& r : lat.rows) worst_lat = std::max(worst_lat, r.relative_error);
  const auto spec = generator_spectrum_check(sg, 1e-9);
  const double b = shift_norm(sg.base());
  outcome o;
  o.pass = roundtrip <= 1e-10 && lat.all_pass && lat.rows.size() == 8 && spec.max_real_part <= 1e-9 && b < 1.0 / 3.0;
  o.detail = "exp(log T) err " + num(roundtrip) + ", lattice err " + num(worst_lat) + ", max Re " +
             num(spec.max_real_part) + ", ||B|| " + num(b) + " (" + to_string(sg.method()) + ")";
  return o;
}

outcome bounded_along_half_times() {
  const auto sg = certified_semigroup();
  const auto& seq = certified().seq;
  std::vector<double> t{1.0};
  for (std::size_t k = 1; k < seq.size(); ++k) t.push_back(seq[k] + 0.5);
  const auto rep = bounded_along(sg, index_sequence(t, sequence_kind::real), 8);
  double worst = 0.0;
  for (const auto& r : rep.rows) worst = std::max(worst, r.ratio);
  outcome o;
  o.pass = rep.all_pass && rep.rows.size() == 8;
  o.detail = "M0 = " + num(rep.M0) + ", max ||T(t_k)|| / ||T(n_k)|| = " + num(worst);
  return o;
}

outcome star_norm_constants() {
  outcome o;
  const auto seq = index_sequence::factorials(8);
  std::mt19937_64 g(8);
  double worst_single = 0.0;
  for (int i = 0; i < 50; ++i)
    worst_single = std::max(worst_single,
                            std::abs(star_norm(exp_span::single(two_pi * oracle::uniform(g)), seq, 8, 8).value - sqrt_half_pi));

  std::vector<exp_span> samples;
  for (int i = 0; i < 8; ++i) samples.push_back(exp_span::single(two_pi * oracle::uniform(g)));
  for (int i = 0; i < 8; ++i) {
    const double eta = two_pi * oracle::uniform(g);
    samples.push_back(exp_span::difference(eta, eta + two_pi * oracle::uniform(g) * std::pow(10.0, -(i % 4))));
  }
  const auto tr = verify_translation_bound(seq, samples, 6, 8, 7);

  double worst_quad = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double eta = two_pi * oracle::uniform(g), xi = two_pi * oracle::uniform(g);
    const double closed = std::numbers::pi * (1.0 - std::exp(-std::abs(eta - xi)));
    const auto q = base_norm_squared_quadrature(exp_span::difference(eta, xi), 1e-9);
    worst_quad = std::max(worst_quad, std::abs(q.value - closed));
  }
  o.pass = worst_single <= 1e-12 && tr.all_pass && tr.max_ratio <= 5.0 && worst_quad <= 1e-8;
  o.detail = "single err " + num(worst_single) + ", max translation ratio " + num(tr.max_ratio) +
             " (k <= 6), closed form vs quadrature " + num(worst_quad);
  return o;
}

outcome dj_induction() {
  outcome o;
  const auto seq = index_sequence::factorials(6);
  std::mt19937_64 g(9);
  double worst = 0.0, worst_eq = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double eta = two_pi * oracle::uniform(g), xi = two_pi * oracle::uniform(g);
    const auto rep = dj_bound_check(eta, xi, seq, 3, 6);
    o.pass = o.pass && rep.all_pass;
    for (const auto& r : rep.rows) {
      o.pass = o.pass && r.exhaustive;
      if (r.bound > 0) worst = std::max(worst, r.d_j / r.bound);
    }
    worst_eq = std::max(worst_eq, std::abs(rep.rows[0].d_j - rep.d));
  }
  o.pass = o.pass && worst_eq <= 1e-12;
  o.detail = "max d_j / bound = " + num(worst) + ", |d_0 - d| <= " + num(worst_eq);
  return o;
}

outcome chord_sandwich() {
  std::vector<double> s;
  for (int i = 1; i <= 100000; ++i) s.push_back(0.5 * i / 100000.0);
  const auto rep = chord_torus_bounds_check(s, 1e-14);
  outcome o;
  o.pass = rep.pass && rep.count == 100000;
  o.detail = "chord/(4||t||) >= " + num(rep.min_lower_ratio) + ", chord/(2 pi ||t||) <= " + num(rep.max_upper_ratio);
  return o;
}

outcome dimension_probe() {
  std::vector<torus_point> uniform;
  for (int i = 0; i < 1024; ++i) uniform.emplace_back((i + 0.5) / 1024.0);
  std::vector<double> dyadic;
  for (int k = 3; k <= 8; ++k) dyadic.push_back(std::ldexp(1.0, -k));
  const double du = box_dimension_estimate(uniform, dyadic);

  std::vector<torus_point> cantor;
  for (int word = 0; word < 512; ++word) {
    double x = 0.0, scale = 1.0;
    for (int d = 0; d < 9; ++d) {
      scale /= 3.0;
      if ((word >> d) & 1) x += 2.0 * scale;
    }
    cantor.emplace_back(x);
  }
  std::vector<double> triadic;
  for (int k = 1; k <= 7; ++k) triadic.push_back(std::pow(3.0, -k));
  const double dc = box_dimension_estimate(cantor, triadic);
  outcome o;
  o.pass = std::abs(du - 1.0) <= 0.05 && std::abs(dc - std::log(2.0) / std::log(3.0)) <= 0.05;
  o.detail = "uniform " + num(du) + ", middle thirds " + num(dc);
  return o;
}

}  // namespace

int main() {
  const std::vector<criterion> criteria{
      {1, "separation dichotomy", 30.0, separation_dichotomy},
      {2, "construction certification", 60.0, construction_certification},
      {3, "power-bound verification", 120.0, power_bound},
      {4, "eigenvector Cauchy estimate", 0.0, eigenvector_cauchy},
      {5, "symmetric-sum oracle equivalence", 0.0, symmetric_sum_oracle},
      {6, "semigroup lift", 30.0, semigroup_lift},
      {7, "boundedness along t_k", 0.0, bounded_along_half_times},
      {8, "star-norm constants", 60.0, star_norm_constants},
      {9, "d_j induction bound", 0.0, dj_induction},
      {10, "chord-torus sandwich", 0.0, chord_sandwich},
      {11, "dimension-probe sanity", 0.0, dimension_probe},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.time_limit > 0 && secs > c.time_limit) {
      o.pass = false;
      o.detail += "; over the " + num(c.time_limit) + " s limit";
    }
    failed += o.pass ? 0 : 1;
    std::printf("%s  %2d  %-34s %8.3f s  %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
