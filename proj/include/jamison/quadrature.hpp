#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <queue>
#include <vector>

namespace jamison {

struct quadrature_result {
  double value = 0.0;
  double error = 0.0;
  std::size_t evaluations = 0;
  bool converged = true;
};

namespace detail {

// 15-point Kronrod nodes (abscissae >= 0) and weights; odd entries carry the 7-point Gauss rule.
inline constexpr double xgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                  0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                  0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                  0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double wgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                  0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                  0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                  0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                 0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

}  // namespace detail

/// One G7-K15 panel on [a, b]; error is |K15 - G7|.
template <class F>
quadrature_result gauss_kronrod_15(F&& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double fc = f(c);
  double resk = fc * detail::wgk[7];
  double resg = fc * detail::wg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * detail::xgk[j];
    const double s = f(c - dx) + f(c + dx);
    resk += detail::wgk[j] * s;
    if (j % 2 == 1) resg += detail::wg[j / 2] * s;
  }
  return {resk * h, std::abs((resk - resg) * h), 15, true};
}

/// Globally adaptive G7-K15: bisects the panel with the largest error estimate.
template <class F>
quadrature_result integrate(F&& f, double a, double b, double abs_tol, double rel_tol = 0.0,
                            std::size_t max_panels = 200000) {
  struct panel {
    double a, b, value, error;
    bool operator<(const panel& o) const { return error < o.error; }
  };
  quadrature_result out;
  if (a == b) return out;
  std::priority_queue<panel> heap;
  auto first = gauss_kronrod_15(f, a, b);
  heap.push({a, b, first.value, first.error});
  out.value = first.value;
  out.error = first.error;
  out.evaluations = 15;
  while (out.error > std::max(abs_tol, rel_tol * std::abs(out.value))) {
    if (heap.size() >= max_panels) {
      out.converged = false;
      break;
    }
    const panel p = heap.top();
    heap.pop();
    const double m = 0.5 * (p.a + p.b);
    if (!(m > p.a && m < p.b)) {
      heap.push(p);
      out.converged = false;
      break;
    }
    const auto l = gauss_kronrod_15(f, p.a, m);
    const auto r = gauss_kronrod_15(f, m, p.b);
    out.evaluations += 30;
    out.value += l.value + r.value - p.value;
    out.error += l.error + r.error - p.error;
    heap.push({p.a, m, l.value, l.error});
    heap.push({m, p.b, r.value, r.error});
  }
  // Re-sum to shed accumulated cancellation in the running totals.
  double v = 0.0, e = 0.0;
  while (!heap.empty()) {
    v += heap.top().value;
    e += heap.top().error;
    heap.pop();
  }
  out.value = v;
  out.error = e;
  return out;
}

}  // namespace jamison
