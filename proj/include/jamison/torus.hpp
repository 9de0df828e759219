#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace jamison {

/// Distance from theta to the nearest integer, in [0, 1/2].
inline double torus_norm(double theta) { return std::abs(theta - std::nearbyint(theta)); }

/// torus_norm(n * theta) with the product residual taken exactly by fma.
inline double scaled_torus_norm(double n, double theta) {
  const double p = n * theta;
  const double r = std::nearbyint(p);
  return torus_norm(std::fma(n, theta, -r));
}

/// |e^{2 pi i d} - 1| for an angle difference d in turns.
inline double chord_from_turns(double d) {
  return 2.0 * std::sin(std::numbers::pi * torus_norm(d));
}

/// e^{2 pi i theta}.
inline std::complex<double> unimodular(double theta) {
  const double a = 2.0 * std::numbers::pi * (theta - std::nearbyint(theta));
  return {std::cos(a), std::sin(a)};
}

/// e^{2 pi i d} - 1, accurate for tiny d.
inline std::complex<double> unimodular_minus_one(double d) {
  const double x = std::numbers::pi * (d - std::nearbyint(d));
  const double s = std::sin(x);
  return {-2.0 * s * s, 2.0 * s * std::cos(x)};
}

/// Frequencies in radians (exponential vectors) to angles in turns.
inline double radians_to_turns(double eta) { return eta / (2.0 * std::numbers::pi); }
inline double turns_to_radians(double theta) { return theta * 2.0 * std::numbers::pi; }

/// Point of the unit circle stored as a reduced angle in turns.
template <class Real>
class basic_torus_point {
 public:
  using value_type = Real;

  basic_torus_point() : theta_(0) {}
  explicit basic_torus_point(const Real& theta) : theta_(reduce(theta)) {}

  const Real& theta() const noexcept { return theta_; }
  double theta_double() const { return static_cast<double>(theta_); }
  std::complex<double> value() const { return unimodular(theta_double()); }

  friend bool operator==(const basic_torus_point& a, const basic_torus_point& b) {
    return a.theta_ == b.theta_;
  }
  friend bool operator<(const basic_torus_point& a, const basic_torus_point& b) {
    return a.theta_ < b.theta_;
  }

  static Real reduce(const Real& theta) {
    using std::floor;
    Real f = theta - floor(theta);
    if (f >= Real(1)) f -= Real(1);
    return f;
  }

 private:
  Real theta_;
};

using torus_point = basic_torus_point<double>;

template <class Real>
double chord_distance(const basic_torus_point<Real>& a, const basic_torus_point<Real>& b) {
  return chord_from_turns(static_cast<double>(Real(a.theta() - b.theta())));
}

}  // namespace jamison
