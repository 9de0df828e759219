#pragma once

#include <algorithm>
#include <complex>
#include <vector>

#include "error.hpp"

namespace jamison {

/// Complete homogeneous symmetric polynomial h_m(x_1, ..., x_r).
/// Recursion h_m(x_1..x_r) = h_m(x_1..x_{r-1}) + x_r h_{m-1}(x_1..x_r), O(r m).
template <class Scalar>
Scalar complete_homogeneous(const std::vector<Scalar>& x, int m) {
  if (m < 0) throw error(errc::negative_degree, "degree must be >= 0");
  if (x.empty()) throw error(errc::precondition_violated, "empty variable list");
  std::vector<Scalar> h(static_cast<std::size_t>(m) + 1, Scalar(0));
  h[0] = Scalar(1);
  for (const Scalar& xr : x)
    for (int d = 1; d <= m; ++d) h[d] += xr * h[d - 1];
  return h[m];
}

inline std::complex<double> symmetric_sum(const std::vector<std::complex<double>>& lambdas, int m) {
  return complete_homogeneous(lambdas, m);
}

/// For a fixed last variable x_l and degree budget n, returns
/// out[r] = h_{n-r}(x_{l-r}, ..., x_l) for r = 0..max_span (variables added backwards).
template <class Scalar>
std::vector<Scalar> trailing_symmetric_sums(const std::vector<Scalar>& x_backwards, int n) {
  const int spans = static_cast<int>(x_backwards.size());
  std::vector<Scalar> out;
  std::vector<Scalar> h(static_cast<std::size_t>(std::max(n, 0)) + 1, Scalar(0));
  h[0] = Scalar(1);
  for (int r = 0; r < spans; ++r) {
    const int degree = n - r;
    if (degree < 0) break;
    const Scalar& xr = x_backwards[r];
    for (int d = 1; d <= degree; ++d) h[d] += xr * h[d - 1];
    out.push_back(h[degree]);
  }
  return out;
}

}  // namespace jamison
