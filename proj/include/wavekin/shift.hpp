#pragma once

#include <vector>

#include "wavekin/model.hpp"

namespace wavekin {

// ---------------------------------------------------------------------------
// Deterministic nonlinear frequency shift, w~_k(s) = omega_k A(s).
// Order 0 keeps the leading linear-in-s term A = C0 beta T s; order 2 closes
// the ODE with the order-<=2 correlation sums (see closure.hpp). The table
// form carries both A and dA/ds so diagnostics can check |Adot_>=| <~ beta T.
// ---------------------------------------------------------------------------
struct FrequencyShift {
  real C0 = 0;
  int order = 0;
  bool linear = true;
  real slope = 0;  // A(s) = slope * s in the linear case

  std::vector<real> sgrid;  // uniform on [0,1] when tabulated
  std::vector<real> Aval;
  std::vector<real> Adot;

  real adot_excess_ratio = 0;  // max |Adot - C0 beta T| / (beta T), measured

  real A(real s) const {
    if (linear) return slope * s;
    return hermite(s, false);
  }

  real dA(real s) const {
    if (linear) return slope;
    return hermite(s, true);
  }

  static FrequencyShift make_linear(real C0, real slope) {
    FrequencyShift f;
    f.C0 = C0;
    f.order = 0;
    f.linear = true;
    f.slope = slope;
    return f;
  }

 private:
  // cubic Hermite on the uniform table; clamped at the ends
  real hermite(real s, bool deriv) const {
    const std::size_t n = sgrid.size();
    if (n < 2) return 0;
    real h = sgrid[1] - sgrid[0];
    real x = (s - sgrid[0]) / h;
    std::size_t i = 0;
    if (x >= static_cast<real>(n - 1))
      i = n - 2;
    else if (x > 0)
      i = static_cast<std::size_t>(x);
    real u = (s - sgrid[i]) / h;
    real a0 = Aval[i], a1 = Aval[i + 1];
    real m0 = Adot[i] * h, m1 = Adot[i + 1] * h;
    if (!deriv) {
      real u2 = u * u, u3 = u2 * u;
      return (2 * u3 - 3 * u2 + 1) * a0 + (u3 - 2 * u2 + u) * m0 +
             (-2 * u3 + 3 * u2) * a1 + (u3 - u2) * m1;
    }
    real du2 = 2 * u, du3 = 3 * u * u;
    return ((2 * du3 - 3 * du2) * a0 + (du3 - 2 * du2 + 1) * m0 +
            (-2 * du3 + 3 * du2) * a1 + (du3 - du2) * m1) /
           h;
  }
};

// C0 = 3/(2 kappa^2 N) sum_l omega_l n_in(l), the scale-0 coefficient of
// Adot = C0 beta T + Adot_>=.
inline real leading_shift_constant(const Spectrum& n_in, const SimParams& p) {
  Grid g = build_grid(p.N);
  real acc = 0;
  for (int i = 0; i < g.size(); ++i)
    acc += dispersion(g.k(i), p) * n_in.values[static_cast<std::size_t>(i)];
  return 1.5 / (p.kappa * p.kappa * p.N) * acc;
}

// Right side of the per-mode shift ODE for a given correlation spectrum E,
// written as the two degenerate sums (k1 side and k3 side). The reduction
// to the scalar A relies on both sums being equal; tests assert it.
inline std::vector<real> vector_shift_rhs(const Spectrum& E,
                                          const SimParams& p) {
  Grid g = build_grid(p.N);
  std::vector<real> out(static_cast<std::size_t>(g.size()), 0.0);
  for (int i = 0; i < g.size(); ++i) {
    real k = g.k(i);
    real s1 = 0, s3 = 0;
    for (int j = 0; j < g.size(); ++j) {
      real l = g.k(j);
      s1 += interaction_coeff(k, l, l, k, p) * E.values[static_cast<std::size_t>(j)];
      s3 += interaction_coeff(k, k, l, l, p) * E.values[static_cast<std::size_t>(j)];
    }
    out[static_cast<std::size_t>(i)] = p.beta * p.T / p.N * (s1 + s3);
  }
  return out;
}

// c_k = b'_k e^{i omega_k A(s)}; unimodular, hence exactly invertible.
inline ModeField gauge_transform(const ModeField& b_prime,
                                 const FrequencyShift& shift, real s,
                                 const SimParams& p) {
  if (s < 0 || s > 1) throw invalid_parameter("gauge time s must be in [0,1]");
  Grid g = build_grid(p.N);
  ModeField c;
  c.time = b_prime.time;
  c.values.resize(b_prime.values.size());
  real As = shift.A(s);
  for (int i = 0; i < g.size(); ++i) {
    real th = dispersion(g.k(i), p) * As;
    c.values[static_cast<std::size_t>(i)] =
        b_prime.values[static_cast<std::size_t>(i)] *
        cplx(std::cos(th), std::sin(th));
  }
  return c;
}

inline ModeField gauge_untransform(const ModeField& c,
                                   const FrequencyShift& shift, real s,
                                   const SimParams& p) {
  Grid g = build_grid(p.N);
  ModeField b;
  b.time = c.time;
  b.values.resize(c.values.size());
  real As = shift.A(s);
  for (int i = 0; i < g.size(); ++i) {
    real th = -dispersion(g.k(i), p) * As;
    b.values[static_cast<std::size_t>(i)] =
        c.values[static_cast<std::size_t>(i)] * cplx(std::cos(th), std::sin(th));
  }
  return b;
}

// Order-0 closure: A(s) = C0 beta T s exactly. The order-2 solver lives in
// closure.hpp next to the couple kernels it needs.
inline FrequencyShift solve_frequency_shift_order0(const Spectrum& n_in,
                                                   const SimParams& p) {
  real C0 = leading_shift_constant(n_in, p);
  return FrequencyShift::make_linear(C0, C0 * p.beta * p.T);
}

}  // namespace wavekin
