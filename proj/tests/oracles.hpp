#pragma once

// Independent reference computations used only by the tests.

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include <jamison/construction.hpp>
#include <jamison/starnorm.hpp>

namespace oracle {

using cplx = std::complex<double>;

inline double uniform(std::mt19937_64& g, double lo = 0.0, double hi = 1.0) {
  return lo + (hi - lo) * static_cast<double>(g() >> 11) * 0x1.0p-53;
}

/// Sum over all exponent vectors (e_1..e_r) with sum m of prod x_i^{e_i}.
inline cplx brute_symmetric_sum(const std::vector<cplx>& x, int m) {
  cplx total = 0.0;
  std::vector<int> e(x.size(), 0);
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
    if (i + 1 == x.size()) {
      e[i] = left;
      cplx p = 1.0;
      for (std::size_t q = 0; q < x.size(); ++q) p *= std::pow(x[q], e[q]);
      total += p;
      return;
    }
    for (int v = 0; v <= left; ++v) {
      e[i] = v;
      rec(i + 1, left - v);
    }
  };
  rec(0, m);
  return total;
}

/// int_0^inf sin(at)/(1+t^2) dt = [e^{-a} Ei(a) - e^{a} Ei(-a)] / 2 for a > 0.
inline double sine_kernel_closed_form(double a) {
  if (a == 0.0) return 0.0;
  if (a < 0.0) return -sine_kernel_closed_form(-a);
  return 0.5 * (std::exp(-a) * std::expint(a) - std::exp(a) * std::expint(-a));
}

/// ||sum u_m e_{eta_m}||^2 with the closed-form kernel.
inline double span_norm_squared(const std::vector<double>& eta, const std::vector<cplx>& u) {
  cplx s = 0.0;
  for (std::size_t p = 0; p < eta.size(); ++p)
    for (std::size_t q = 0; q < eta.size(); ++q) {
      const double a = eta[p] - eta[q];
      s += u[p] * std::conj(u[q]) * cplx(std::numbers::pi / 2.0 * std::exp(-std::abs(a)), sine_kernel_closed_form(a));
    }
  return s.real();
}

/// Calls fn(tuple) for every ordered tuple in [0,K)^len.
inline void for_each_tuple(std::size_t K, std::size_t len, const std::function<void(const std::vector<std::size_t>&)>& fn) {
  std::vector<std::size_t> t(len, 0);
  while (true) {
    fn(t);
    std::size_t i = 0;
    while (i < len && ++t[i] == K) t[i++] = 0;
    if (i == len) return;
  }
}

/// sup over ordered tuples of |prod (e^{i eta n} - 1) - prod (e^{i xi n} - 1)| using std::polar.
inline double brute_dj(double eta, double xi, const jamison::index_sequence& seq, int j, std::size_t K) {
  double best = 0.0;
  for_each_tuple(K, static_cast<std::size_t>(j) + 1, [&](const std::vector<std::size_t>& t) {
    cplx a = 1.0, b = 1.0;
    for (auto k : t) {
      a *= std::polar(1.0, eta * seq[k]) - 1.0;
      b *= std::polar(1.0, xi * seq[k]) - 1.0;
    }
    best = std::max(best, std::abs(a - b));
  });
  return best;
}

/// sup over ordered tuples of ||prod (S_{n_k} - I) v|| for a fixed j.
inline double brute_star_level(const jamison::exp_span& v, const jamison::index_sequence& seq, int j, std::size_t K) {
  std::vector<double> eta;
  std::vector<cplx> c;
  for (const auto& t : v.terms()) {
    eta.push_back(t.frequency);
    c.push_back(t.coefficient);
  }
  double best = 0.0;
  for_each_tuple(K, static_cast<std::size_t>(j) + 1, [&](const std::vector<std::size_t>& t) {
    std::vector<cplx> u = c;
    for (auto k : t)
      for (std::size_t m = 0; m < u.size(); ++m) u[m] *= std::polar(1.0, eta[m] * seq[k]) - 1.0;
    best = std::max(best, std::sqrt(std::max(0.0, span_norm_squared(eta, u))));
  });
  return best;
}

/// M^n by plain repeated multiplication.
inline jamison::matrix dense_power(const jamison::matrix& M, int n) {
  jamison::matrix R = jamison::matrix::Identity(M.rows(), M.cols());
  for (int i = 0; i < n; ++i) R = R * M;
  return R;
}

inline jamison::matrix eigen_expm(const jamison::matrix& M) { return M.exp(); }
inline jamison::matrix eigen_logm(const jamison::matrix& M) { return M.log(); }

/// Hand-built construction with given angles (turns) and linear weights.
inline jamison::shift_construction synthetic_construction(const std::vector<double>& thetas, std::size_t horizon = 4) {
  jamison::shift_construction c;
  c.seq = jamison::index_sequence::integers(static_cast<std::int64_t>(std::max<std::size_t>(horizon, 1)));
  c.horizon = horizon;
  c.schedule = jamison::weight_schedule::linear(static_cast<int>(thetas.size()) + 1);
  for (double t : thetas) c.thetas.emplace_back(t);
  jamison::refresh_gaps(c);
  return c;
}

}  // namespace oracle
