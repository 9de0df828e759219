#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <string>

#include "error.hpp"

namespace jamison {

using cplx = std::complex<double>;
using matrix = Eigen::MatrixXcd;
using vector = Eigen::VectorXcd;

enum class norm_kind { one, two, inf };

inline const char* to_string(norm_kind p) {
  switch (p) {
    case norm_kind::one: return "1";
    case norm_kind::two: return "2";
    case norm_kind::inf: return "inf";
  }
  return "2";
}

inline norm_kind parse_norm_kind(const std::string& s) {
  if (s == "1") return norm_kind::one;
  if (s == "2") return norm_kind::two;
  if (s == "inf" || s == "Inf" || s == "INF") return norm_kind::inf;
  throw error(errc::config_invalid, "norm must be 1, 2 or inf");
}

struct spectral_norm_bounds {
  double value = 0.0;  // Rayleigh estimate
  double lower = 0.0;  // ||M v|| / ||v|| for the final iterate
  double upper = 0.0;  // min(Frobenius, sqrt(||M||_1 ||M||_inf))
  int iterations = 0;
  bool converged = false;
};

inline double norm_one(const matrix& M) {
  return M.rows() == 0 ? 0.0 : M.cwiseAbs().colwise().sum().maxCoeff();
}
inline double norm_inf(const matrix& M) {
  return M.rows() == 0 ? 0.0 : M.cwiseAbs().rowwise().sum().maxCoeff();
}

/// Largest singular value by power iteration on M^H M.
inline spectral_norm_bounds spectral_norm(const matrix& M, double rel_tol = 1e-10, int max_iter = 5000) {
  spectral_norm_bounds b;
  const Eigen::Index n = M.cols();
  b.upper = std::min(M.norm(), std::sqrt(norm_one(M) * norm_inf(M)));
  if (n == 0 || b.upper == 0.0) {
    b.converged = true;
    return b;
  }
  vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = cplx(1.0 + 0.5 * std::sin(1.0 + i), 0.25 * std::cos(2.0 + i));
  v.normalize();
  double prev = 0.0;
  for (int it = 1; it <= max_iter; ++it) {
    vector w = M * v;
    const double est = w.norm();
    vector u = M.adjoint() * w;
    const double un = u.norm();
    b.iterations = it;
    b.lower = std::max(b.lower, est);
    if (un == 0.0) break;
    v = u / un;
    if (std::abs(est - prev) <= rel_tol * est * 1e-2) {
      b.converged = true;
      break;
    }
    prev = est;
  }
  // sigma_max^2 <= ||M^H M v|| / ||v|| is not a bound in general, so slow
  // convergence falls back to a dense SVD.
  if (!b.converged) {
    Eigen::JacobiSVD<matrix> svd(M);
    b.lower = std::max(b.lower, svd.singularValues()(0));
    b.converged = true;
  }
  b.value = b.lower;
  return b;
}

inline double operator_norm(const matrix& M, norm_kind p) {
  if (M.rows() != M.cols()) throw error(errc::non_square, "operator_norm needs a square matrix");
  switch (p) {
    case norm_kind::one: return norm_one(M);
    case norm_kind::inf: return norm_inf(M);
    case norm_kind::two: return spectral_norm(M).value;
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Block-banded upper-triangular products (level index = row / fibers)
// ---------------------------------------------------------------------------

/// C = A B for matrices whose nonzeros satisfy 0 <= level(c) - level(r) <= band.
inline matrix banded_product(const matrix& A, int bandA, const matrix& B, int bandB, int fibers) {
  const Eigen::Index n = A.rows();
  const int L = static_cast<int>(n / fibers);
  const int band = std::min(bandA + bandB, L - 1);
  matrix C = matrix::Zero(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const int lr = static_cast<int>(r / fibers);
    const int lc_max = std::min(L - 1, lr + band);
    for (Eigen::Index c = static_cast<Eigen::Index>(lr) * fibers; c < static_cast<Eigen::Index>(lc_max + 1) * fibers; ++c) {
      const int lc = static_cast<int>(c / fibers);
      const int lj_lo = std::max(lr, lc - bandB), lj_hi = std::min(lc, lr + bandA);
      cplx s = 0.0;
      for (Eigen::Index j = static_cast<Eigen::Index>(lj_lo) * fibers; j < static_cast<Eigen::Index>(lj_hi + 1) * fibers; ++j)
        s += A(r, j) * B(j, c);
      C(r, c) = s;
    }
  }
  return C;
}

/// M^n by repeated squaring, exploiting the level band of width `band`.
inline matrix banded_power(const matrix& M, std::uint64_t n, int band, int fibers) {
  const Eigen::Index dim = M.rows();
  const int L = static_cast<int>(dim / fibers);
  matrix result = matrix::Identity(dim, dim);
  int result_band = 0;
  matrix base = M;
  int base_band = std::min(band, L - 1);
  while (n > 0) {
    if (n & 1u) {
      result = banded_product(result, result_band, base, base_band, fibers);
      result_band = std::min(result_band + base_band, L - 1);
    }
    n >>= 1;
    if (n > 0) {
      base = banded_product(base, base_band, base, base_band, fibers);
      base_band = std::min(2 * base_band, L - 1);
    }
  }
  return result;
}

/// Largest level distance between any nonzero entry's row and column (-1 for zero matrices).
inline int level_bandwidth(const matrix& M, int fibers) {
  int bw = -1;
  for (Eigen::Index r = 0; r < M.rows(); ++r)
    for (Eigen::Index c = 0; c < M.cols(); ++c)
      if (M(r, c) != cplx(0.0))
        bw = std::max(bw, static_cast<int>(c / fibers) - static_cast<int>(r / fibers));
  return bw;
}

// ---------------------------------------------------------------------------
// Matrix exponential and logarithm
// ---------------------------------------------------------------------------

/// exp(A) by scaling and squaring with the degree-13 Pade approximant.
inline matrix expm(const matrix& A) {
  static constexpr double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                                 1187353796428800.0,  129060195264000.0,   10559470521600.0,
                                 670442572800.0,      33522128640.0,       1323241920.0,
                                 40840800.0,          960960.0,            16380.0,
                                 182.0,               1.0};
  constexpr double theta13 = 5.371920351148152;
  const Eigen::Index n = A.rows();
  if (n == 0) return A;
  const double a1 = norm_one(A);
  if (!std::isfinite(a1)) throw error(errc::out_of_domain, "non-finite matrix in expm");
  int s = 0;
  if (a1 > theta13) s = static_cast<int>(std::ceil(std::log2(a1 / theta13)));
  const matrix X = A / std::ldexp(1.0, s);
  const matrix I = matrix::Identity(n, n);
  const matrix X2 = X * X, X4 = X2 * X2, X6 = X4 * X2;
  const matrix U = X * (X6 * (b[13] * X6 + b[11] * X4 + b[9] * X2) + b[7] * X6 + b[5] * X4 + b[3] * X2 + b[1] * I);
  const matrix V = X6 * (b[12] * X6 + b[10] * X4 + b[8] * X2) + b[6] * X6 + b[4] * X4 + b[2] * X2 + b[0] * I;
  matrix R = (V - U).partialPivLu().solve(V + U);
  for (int k = 0; k < s; ++k) R = R * R;
  return R;
}

/// Principal square root of an upper-triangular matrix (column recurrence).
inline matrix sqrtm_upper_triangular(const matrix& T) {
  const Eigen::Index n = T.rows();
  matrix R = matrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    R(j, j) = std::sqrt(T(j, j));
    for (Eigen::Index i = j - 1; i >= 0; --i) {
      cplx s = T(i, j);
      for (Eigen::Index k = i + 1; k < j; ++k) s -= R(i, k) * R(k, j);
      R(i, j) = s / (R(i, i) + R(j, j));
    }
  }
  return R;
}

/// Principal log of an upper-triangular matrix by inverse scaling and squaring.
inline matrix logm_upper_triangular(const matrix& T, int* roots_taken = nullptr) {
  const Eigen::Index n = T.rows();
  const matrix I = matrix::Identity(n, n);
  matrix A = T;
  int s = 0;
  while (norm_one(A - I) > 0.05 && s < 64) {
    A = sqrtm_upper_triangular(A);
    ++s;
  }
  // log A = 2 atanh(Z), Z = (A - I)(A + I)^{-1}
  const matrix Z = (A + I).transpose().partialPivLu().solve((A - I).transpose()).transpose();
  const matrix Z2 = Z * Z;
  matrix term = Z, sum = Z;
  for (int k = 1; k < 60; ++k) {
    term = term * Z2;
    const matrix add = term / static_cast<double>(2 * k + 1);
    sum += add;
    if (norm_one(add) <= 1e-18 * std::max(1.0, norm_one(sum))) break;
  }
  if (roots_taken) *roots_taken = s;
  return std::ldexp(2.0, s) * sum;
}

/// 2-norm condition number via SVD.
inline double condition_number(const matrix& V) {
  Eigen::JacobiSVD<matrix> svd(V);
  const auto& sv = svd.singularValues();
  const double smin = sv(sv.size() - 1);
  return smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
}

}  // namespace jamison
