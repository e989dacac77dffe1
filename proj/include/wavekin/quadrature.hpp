#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <queue>

#include "wavekin/common.hpp"

namespace wavekin {
namespace quad {

// Gauss-Kronrod 7-15 nodes/weights on [-1,1] (abscissae >= 0, symmetric).
inline constexpr std::array<real, 8> kronrod_x = {
    0.0,
    0.2077849550078985,
    0.4058451513773972,
    0.5860872354676911,
    0.7415311855993945,
    0.8648644233597691,
    0.9491079123427585,
    0.9914553711208126};
inline constexpr std::array<real, 8> kronrod_w = {
    0.2094821410847278, 0.2044329400752989, 0.1903505780647854,
    0.1690047266392679, 0.1406532597155259, 0.1047900103222502,
    0.0630920926299786, 0.0229353220105292};
inline constexpr std::array<real, 4> gauss_w = {
    0.4179591836734694, 0.3818300505051189, 0.2797053914892767,
    0.1294849661688697};

struct Result {
  real value = 0;
  real error = 0;
};

template <class F>
Result kronrod_panel(const F& f, real a, real b) {
  const real c = 0.5 * (a + b), h = 0.5 * (b - a);
  real fc = f(c);
  real k_acc = kronrod_w[0] * fc;
  real g_acc = gauss_w[0] * fc;
  for (int i = 1; i < 8; ++i) {
    real fv = f(c - h * kronrod_x[i]) + f(c + h * kronrod_x[i]);
    k_acc += kronrod_w[i] * fv;
    if (i % 2 == 0) g_acc += gauss_w[i / 2] * fv;
  }
  Result r;
  r.value = k_acc * h;
  r.error = std::abs(k_acc - g_acc) * h;
  return r;
}

// Adaptive bisection on [a,b]. `initial_panels` seeds a uniform split so
// oscillatory integrands are resolved before the error estimate is trusted.
template <class F>
Result integrate(const F& f, real a, real b, real abs_tol = 1e-10,
                 real rel_tol = 1e-8, int initial_panels = 1,
                 int max_panels = 20000) {
  struct Piece {
    real a, b, value, error;
    bool operator<(const Piece& o) const { return error < o.error; }
  };
  std::priority_queue<Piece> q;
  real total = 0, err = 0;
  int panels = 0;
  real w = (b - a) / initial_panels;
  for (int i = 0; i < initial_panels; ++i) {
    real lo = a + i * w, hi = (i + 1 == initial_panels) ? b : a + (i + 1) * w;
    Result r = kronrod_panel(f, lo, hi);
    q.push({lo, hi, r.value, r.error});
    total += r.value;
    err += r.error;
    ++panels;
  }
  while (err > abs_tol && err > rel_tol * std::abs(total) &&
         panels < max_panels) {
    Piece p = q.top();
    q.pop();
    real mid = 0.5 * (p.a + p.b);
    if (mid <= p.a || mid >= p.b) break;  // interval exhausted
    Result r1 = kronrod_panel(f, p.a, mid);
    Result r2 = kronrod_panel(f, mid, p.b);
    total += r1.value + r2.value - p.value;
    err += r1.error + r2.error - p.error;
    q.push({p.a, mid, r1.value, r1.error});
    q.push({mid, p.b, r2.value, r2.error});
    ++panels;
  }
  return {total, err};
}

}  // namespace quad
}  // namespace wavekin
