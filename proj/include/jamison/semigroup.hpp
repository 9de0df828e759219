#pragma once

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "construction.hpp"
#include "error.hpp"
#include "matrix.hpp"

namespace jamison {

enum class log_method { eigendecomposition, inverse_scaling_squaring };

inline const char* to_string(log_method m) {
  return m == log_method::eigendecomposition ? "eigendecomposition" : "inverse_scaling_squaring";
}

/// Operator from explicit diagonal and superband entries.
inline truncated_operator make_operator(const vector& diagonal, const vector& superband, int levels, int fibers) {
  if (diagonal.size() != static_cast<Eigen::Index>(levels) * fibers ||
      superband.size() != static_cast<Eigen::Index>(std::max(levels - 1, 0)) * fibers)
    throw error(errc::size_mismatch, "operator entry counts do not match levels x fibers");
  truncated_operator op;
  op.levels = levels;
  op.fibers = fibers;
  op.diagonal = diagonal;
  op.superband = superband;
  return op;
}

class matrix_semigroup {
 public:
  matrix_semigroup(truncated_operator base, matrix generator, double eig_cond, log_method method)
      : base_(std::move(base)), generator_(std::move(generator)), eig_cond_(eig_cond), method_(method) {}

  const truncated_operator& base() const noexcept { return base_; }
  const matrix& generator() const noexcept { return generator_; }
  double eig_cond() const noexcept { return eig_cond_; }
  log_method method() const noexcept { return method_; }

  /// e^{tG}
  matrix evolve(double t) const {
    if (!std::isfinite(t)) throw error(errc::out_of_domain, "evolve needs a finite time");
    if (t == 0.0) return matrix::Identity(generator_.rows(), generator_.cols());
    return expm(t * generator_);
  }

  /// Same base with a replaced generator (fault injection).
  matrix_semigroup with_generator(matrix G) const { return {base_, std::move(G), eig_cond_, method_}; }

 private:
  truncated_operator base_;
  matrix generator_;
  double eig_cond_;
  log_method method_;
};

struct log_options {
  double cond_limit = 1e3;
};

inline matrix_semigroup principal_log(const truncated_operator& T, const log_options& opts = {}) {
  const int L = T.levels, I = T.fibers;
  for (Eigen::Index s = 0; s < T.diagonal.size(); ++s)
    if (!(T.diagonal(s).real() > 0.5)) throw error(errc::spectrum_outside_domain, "eigenvalue with real part <= 1/2");
  const bool coupled = T.superband.size() > 0 && T.superband.cwiseAbs().maxCoeff() > 0.0;
  if (coupled)
    for (int a = 1; a <= L; ++a)
      for (int b = a + 1; b <= L; ++b) {
        const bool same = T.level_thetas.size() == static_cast<std::size_t>(L)
                              ? T.level_thetas[a - 1] == T.level_thetas[b - 1]
                              : T.diagonal(truncated_operator::index(1, a, I)) == T.diagonal(truncated_operator::index(1, b, I));
        if (same) throw error(errc::degenerate_spectrum, "repeated eigenvalue on coupled levels");
      }

  matrix G = matrix::Zero(T.dimension(), T.dimension());
  double worst_cond = 1.0;
  log_method method = log_method::eigendecomposition;
  for (int i = 1; i <= I; ++i) {
    const matrix block = T.fiber_block(i);
    matrix Gi;
    Eigen::ComplexEigenSolver<matrix> es(block);
    const matrix V = es.eigenvectors();
    const double cond = es.info() == Eigen::Success ? condition_number(V) : std::numeric_limits<double>::infinity();
    worst_cond = std::max(worst_cond, cond);
    if (cond <= opts.cond_limit) {
      vector logs = es.eigenvalues().unaryExpr([](const cplx& z) { return std::log(z); });
      Gi = V * logs.asDiagonal() * V.inverse();
    } else {
      Gi = logm_upper_triangular(block);
      method = log_method::inverse_scaling_squaring;
    }
    for (int a = 1; a <= L; ++a)
      for (int b = 1; b <= L; ++b) G(truncated_operator::index(i, a, I), truncated_operator::index(i, b, I)) = Gi(a - 1, b - 1);
  }
  return {T, std::move(G), worst_cond, method};
}

// ---------------------------------------------------------------------------
// Checks
// ---------------------------------------------------------------------------

struct lattice_row {
  std::size_t k = 0;
  double n_k = 0.0;
  double relative_error = 0.0;
  bool pass = true;
};

struct lattice_report {
  std::vector<lattice_row> rows;
  bool all_pass = true;
};

/// evolve(n_k) against T^{n_k} for k < P.
inline lattice_report check_lattice(const matrix_semigroup& sg, const index_sequence& seq, std::size_t P,
                                    double tolerance = 1e-8) {
  check_horizon(seq, P);
  lattice_report rep;
  const matrix T = sg.base().dense();
  for (std::size_t k = 0; k < P; ++k) {
    const double n = std::floor(seq[k]);
    const matrix Tn = banded_power(T, static_cast<std::uint64_t>(n), 1, sg.base().fibers);
    const matrix Et = sg.evolve(n);
    lattice_row row;
    row.k = k;
    row.n_k = n;
    row.relative_error = spectral_norm(Et - Tn).upper / spectral_norm(Tn).value;
    row.pass = row.relative_error <= tolerance;
    rep.all_pass = rep.all_pass && row.pass;
    rep.rows.push_back(row);
  }
  return rep;
}

struct boundedness_row {
  std::size_t k = 0;
  double t_k = 0.0;
  double n_k = 0.0;
  double norm_t = 0.0;
  double norm_n = 0.0;
  double ratio = 0.0;
  bool pass = true;
};

struct boundedness_report {
  double M0 = 0.0;          // certified upper bound of sup_{s in [0,1]} ||evolve(s)||
  double M0_grid = 0.0;     // largest sampled value
  double lipschitz = 0.0;   // ||G|| e^{||G||}
  std::size_t samples = 0;
  std::vector<boundedness_row> rows;
  double sup_norm = 0.0;
  bool all_pass = true;
};

struct boundedness_options {
  std::size_t grid = 64;
  double certify_tolerance = 1e-4;
  int max_depth = 40;
};

/// Certified sup of ||evolve(s)||_2 on [0,1], then the bound along t_k.
inline boundedness_report bounded_along(const matrix_semigroup& sg, const index_sequence& realseq, std::size_t P,
                                        const boundedness_options& opts = {}) {
  check_horizon(realseq, P);
  boundedness_report rep;
  const double gnorm = spectral_norm(sg.generator()).upper;
  rep.lipschitz = gnorm * std::exp(gnorm);

  auto norm_at = [&](double s) { return spectral_norm(sg.evolve(s)).value; };
  struct segment {
    double a, b, fa, fb;
    int depth;
  };
  std::vector<segment> work;
  const std::size_t n = std::max<std::size_t>(2, opts.grid);
  std::vector<double> grid(n), vals(n);
  for (std::size_t i = 0; i < n; ++i) {
    grid[i] = static_cast<double>(i) / static_cast<double>(n - 1);
    vals[i] = norm_at(grid[i]);
  }
  rep.samples = n;
  for (std::size_t i = 0; i + 1 < n; ++i) work.push_back({grid[i], grid[i + 1], vals[i], vals[i + 1], 0});
  for (double v : vals) rep.M0_grid = std::max(rep.M0_grid, v);
  double bound = 0.0;
  while (!work.empty()) {
    segment sgm = work.back();
    work.pop_back();
    const double top = std::max(sgm.fa, sgm.fb) + rep.lipschitz * (sgm.b - sgm.a) / 2.0;
    if (top - rep.M0_grid <= opts.certify_tolerance || sgm.depth >= opts.max_depth) {
      bound = std::max(bound, top);
      continue;
    }
    const double m = 0.5 * (sgm.a + sgm.b);
    const double fm = norm_at(m);
    ++rep.samples;
    rep.M0_grid = std::max(rep.M0_grid, fm);
    work.push_back({sgm.a, m, sgm.fa, fm, sgm.depth + 1});
    work.push_back({m, sgm.b, fm, sgm.fb, sgm.depth + 1});
  }
  rep.M0 = std::max(bound, rep.M0_grid);

  for (std::size_t k = 0; k < P; ++k) {
    boundedness_row row;
    row.k = k;
    row.t_k = realseq[k];
    row.n_k = std::floor(realseq[k]);
    row.norm_t = spectral_norm(sg.evolve(row.t_k)).value;
    row.norm_n = spectral_norm(sg.evolve(row.n_k)).value;
    row.ratio = row.norm_t / row.norm_n;
    row.pass = row.norm_t <= rep.M0 * row.norm_n * (1.0 + 1e-6);
    rep.all_pass = rep.all_pass && row.pass;
    rep.sup_norm = std::max(rep.sup_norm, row.norm_t);
    rep.rows.push_back(row);
  }
  return rep;
}

struct spectrum_report {
  std::vector<cplx> eigenvalues;  // of G, sorted by (imag, real)
  std::vector<cplx> expected;     // i 2 pi theta_l, each with multiplicity I
  double max_real_part = 0.0;
  double max_deviation = 0.0;
  double spectral_mapping_deviation = 0.0;  // eigenvalues of evolve(1) against lambda_l
  bool pass = true;
};

inline spectrum_report generator_spectrum_check(const matrix_semigroup& sg, double tolerance = 1e-9) {
  spectrum_report rep;
  const auto& base = sg.base();
  auto by_imag = [](const cplx& a, const cplx& b) { return a.imag() != b.imag() ? a.imag() < b.imag() : a.real() < b.real(); };
  Eigen::ComplexEigenSolver<matrix> es(sg.generator(), false);
  for (Eigen::Index s = 0; s < es.eigenvalues().size(); ++s) rep.eigenvalues.push_back(es.eigenvalues()(s));
  for (int l = 1; l <= base.levels; ++l) {
    double theta;
    if (base.level_thetas.size() == static_cast<std::size_t>(base.levels)) {
      const precise_real t = base.level_thetas[l - 1];
      theta = static_cast<double>(precise_real(t - boost::multiprecision::round(t)));
    } else {
      theta = std::arg(base.diagonal(truncated_operator::index(1, l, base.fibers))) / (2.0 * std::numbers::pi);
    }
    for (int i = 0; i < base.fibers; ++i) rep.expected.emplace_back(0.0, 2.0 * std::numbers::pi * theta);
  }
  std::sort(rep.eigenvalues.begin(), rep.eigenvalues.end(), by_imag);
  std::sort(rep.expected.begin(), rep.expected.end(), by_imag);
  for (std::size_t s = 0; s < rep.eigenvalues.size() && s < rep.expected.size(); ++s) {
    rep.max_real_part = std::max(rep.max_real_part, std::abs(rep.eigenvalues[s].real()));
    rep.max_deviation = std::max(rep.max_deviation, std::abs(rep.eigenvalues[s] - rep.expected[s]));
  }

  Eigen::ComplexEigenSolver<matrix> e1(sg.evolve(1.0), false);
  std::vector<cplx> got, want;
  for (Eigen::Index s = 0; s < e1.eigenvalues().size(); ++s) got.push_back(e1.eigenvalues()(s));
  for (Eigen::Index s = 0; s < base.diagonal.size(); ++s) want.push_back(base.diagonal(s));
  std::sort(got.begin(), got.end(), by_imag);
  std::sort(want.begin(), want.end(), by_imag);
  for (std::size_t s = 0; s < got.size() && s < want.size(); ++s)
    rep.spectral_mapping_deviation = std::max(rep.spectral_mapping_deviation, std::abs(got[s] - want[s]));

  rep.pass = rep.eigenvalues.size() == rep.expected.size() && rep.max_real_part <= tolerance &&
             rep.max_deviation <= tolerance && rep.spectral_mapping_deviation <= tolerance;
  return rep;
}

/// ||B||_2 of the operator.
inline double shift_norm(const truncated_operator& op) { return spectral_norm(op.shift_part()).value; }

}  // namespace jamison
