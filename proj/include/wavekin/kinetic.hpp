#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <vector>

#include "wavekin/model.hpp"
#include "wavekin/quadrature.hpp"
#include "wavekin/shift.hpp"

namespace wavekin {

struct invalid_input : error {
  explicit invalid_input(const std::string& msg) : error("invalid-input", msg) {}
};

enum class DeltaMethod { sinc_broadened, level_set, discrete_sum };

struct CollisionResult {
  std::vector<real> values;
  DeltaMethod method = DeltaMethod::sinc_broadened;
  real broadening = 0;                 // tau (sinc method only)
  real quadrature_error_estimate = 0;  // summed over evaluation points
  real excised_mass = 0;               // level_set: estimated tube mass
  long resonance_count = 0;            // discrete_sum: quadruples on Omega=0
  real action_sum = 0;                 // discrete_sum: orbit-grouped, exact 0
  real energy_sum = 0;                 // discrete_sum: orbit-grouped, exact 0
};

struct CollisionOptions {
  real tau = 200.0;   // sinc broadening
  real sing_tol = 0;  // level_set tube half-width; 0 -> 1/T
  real abs_tol = 1e-8;
  real rel_tol = 1e-6;
};

namespace detail {

// Collision integrand on the momentum-constrained set: the squared
// interaction tensor times phi phi1 phi2 phi3 times the 1/phi bracket.
// With phi = c/omega the omega factors cancel the poles, so the integrand
// stays bounded through the edge of the torus.
struct CollisionIntegrand {
  const std::function<real(real)>& phi;
  real xi, phi_xi, om_xi;
  const SimParams& p;
  real tensor_pref;  // (3/(4 kappa^2))^2

  CollisionIntegrand(const std::function<real(real)>& f, real xi_,
                     const SimParams& p_)
      : phi(f), xi(xi_), p(p_) {
    phi_xi = check(phi(xi_), xi_);
    om_xi = dispersion(xi_, p_);
    real c = 0.75 / (p_.kappa * p_.kappa);
    tensor_pref = c * c;
  }

  static real check(real v, real at) {
    if (!(v > 0))
      throw invalid_input("phi must be positive, got " + std::to_string(v) +
                          " at xi=" + std::to_string(at));
    return v;
  }

  // Division-free form of W phi phi1 phi2 phi3 [1/phi - 1/phi1 + ...]: each
  // term carries the omega*phi products, so 1/omega-type profiles stay
  // finite through the edge of the torus.
  real operator()(real x1, real x2) const {
    real x3 = mod1(xi - x1 + x2);
    if (x3 == 0) x3 = 1e-300;  // grazing hit of the excluded endpoint
    real f1 = check(phi(x1), x1), f2 = check(phi(x2), x2),
         f3 = check(phi(x3), x3);
    real o1 = dispersion(x1, p), o2 = dispersion(x2, p), o3 = dispersion(x3, p);
    real q0 = om_xi * phi_xi, q1 = o1 * f1, q2 = o2 * f2, q3 = o3 * f3;
    return tensor_pref * (om_xi * q1 * q2 * q3 - o1 * q0 * q2 * q3 +
                          o2 * q0 * q1 * q3 - o3 * q0 * q1 * q2);
  }

  real mismatch(real x1, real x2) const {
    real x3 = mod1(xi - x1 + x2);
    return dispersion(x1, p) - dispersion(x2, p) + dispersion(x3, p) - om_xi;
  }

  // d(mismatch)/dx2 at fixed x1
  real dmismatch_dx2(real x1, real x2) const {
    real x3 = mod1(xi - x1 + x2);
    real c = 2 * std::sqrt(p.kappa / p.mass) * pi;
    return c * (std::cos(pi * x3) - std::cos(pi * x2));
  }
};

inline real sinc_sq(real x) {
  if (std::abs(x) < 1e-8) return 1.0 - x * x / 3.0;
  real s = std::sin(x) / x;
  return s * s;
}

// delta_tau(x) = (tau / 2 pi) sinc^2(tau x / 2), unit mass
inline real delta_tau(real x, real tau) {
  return tau / (2 * pi) * sinc_sq(0.5 * tau * x);
}

}  // namespace detail

// K(phi)(xi) with the broadened delta, integrated over (x1,x2) in (0,1)^2.
inline quad::Result collision_sinc(const std::function<real(real)>& phi,
                                   real xi, const SimParams& p,
                                   const CollisionOptions& opt) {
  detail::CollisionIntegrand f(phi, xi, p);
  int inner_panels = std::max(16, static_cast<int>(opt.tau / 2));
  auto outer = [&](real x1) {
    auto inner = [&](real x2) {
      return f(x1, x2) * detail::delta_tau(f.mismatch(x1, x2), opt.tau);
    };
    return quad::integrate(inner, 0.0, 1.0, opt.abs_tol, opt.rel_tol,
                           inner_panels, 4 * inner_panels)
        .value;
  };
  return quad::integrate(outer, 0.0, 1.0, opt.abs_tol, opt.rel_tol, 32, 512);
}

// K(phi)(xi) by resolving the delta on the resonant manifold: for each x1,
// find the roots of Omega(x1, .) and weight by the co-area factor
// 1/|dOmega/dx2|. A tube of half-width sing_tol around the singular set
// {x1 = xi} u {x2 = x2_E(x1)} is excised and reported.
inline quad::Result collision_level_set(const std::function<real(real)>& phi,
                                        real xi, const SimParams& p,
                                        const CollisionOptions& opt,
                                        real* excised = nullptr) {
  detail::CollisionIntegrand f(phi, xi, p);
  real tol = opt.sing_tol > 0 ? opt.sing_tol : 1.0 / std::max(p.T, real(1));
  real excised_acc = 0;

  auto slice = [&](real x1) -> real {
    // singular x2 on this slice: cos(pi x2) = cos(pi x3)
    real xe = 0.5 * (x1 - xi);
    if (xe <= 0) xe += 1.0;  // representative in (0,1)
    // sample Omega on the slice, inserting the wrap kink of x3
    std::vector<real> nodes;
    const int ns = 256;
    real kink = mod1(x1 - xi);  // x2 where xi - x1 + x2 crosses an integer
    for (int i = 0; i <= ns; ++i) nodes.push_back(static_cast<real>(i) / ns);
    if (kink > 0 && kink < 1) nodes.push_back(kink);
    std::sort(nodes.begin(), nodes.end());
    real acc = 0;
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
      real a = nodes[i], b = nodes[i + 1];
      if (b - a < 1e-14) continue;
      real fa = f.mismatch(x1, a + 1e-15), fb = f.mismatch(x1, b - 1e-15);
      if (fa == 0) fa = 1e-300;
      if (fa * fb > 0) continue;
      // bisection for the root
      real lo = a, hi = b, flo = fa;
      for (int it = 0; it < 80; ++it) {
        real mid = 0.5 * (lo + hi);
        real fm = f.mismatch(x1, mid);
        if (flo * fm <= 0)
          hi = mid;
        else {
          lo = mid;
          flo = fm;
        }
      }
      real root = 0.5 * (lo + hi);
      real dO = std::abs(f.dmismatch_dx2(x1, root));
      real dist = std::min(std::abs(root - xe), std::abs(root - xe + 1));
      dist = std::min(dist, std::abs(root - xe - 1));
      if (dist < tol || dO < 1e-12) {
        excised_acc += std::abs(f(x1, root)) / std::max(dO, 1e-12) * 2 * tol;
        continue;
      }
      acc += f(x1, root) / dO;
    }
    return acc;
  };

  // exclude the degenerate slice x1 ~ xi (whole line is resonant there)
  quad::Result left{0, 0}, right{0, 0};
  if (xi - tol > 0)
    left = quad::integrate(slice, 0.0, xi - tol, opt.abs_tol, opt.rel_tol, 64,
                           1024);
  if (xi + tol < 1)
    right = quad::integrate(slice, xi + tol, 1.0, opt.abs_tol, opt.rel_tol, 64,
                            1024);
  if (excised) *excised = excised_acc;
  return {left.value + right.value, left.error + right.error};
}

namespace detail {

// Exact-resonance grid sum. The support is the set Omega = 0 (bitwise, on
// a reflection-symmetrized omega table, which captures the structural
// resonance families exactly). The summand is antisymmetric under
// (k,k2) <-> (k1,k3) and symmetric under k <-> k2 and k1 <-> k3; grouping
// the four images of each quadruple makes both conservation sums vanish
// term by term, in floating point as well.
struct DiscreteCollision {
  std::vector<real> values;
  long resonance_count = 0;
  real action_sum = 0, energy_sum = 0;
};

inline DiscreteCollision collision_discrete(const std::vector<real>& phi,
                                            const SimParams& p) {
  const int N = p.N;
  if (static_cast<int>(phi.size()) != N - 1)
    throw invalid_input("discrete method needs phi tabulated on the grid");
  for (real v : phi)
    if (!(v > 0)) throw invalid_input("phi must be positive on the grid");
  std::vector<real> om(static_cast<std::size_t>(N), 0.0);
  for (int j = 1; 2 * j <= N; ++j) {
    om[(std::size_t)j] = dispersion((real)j / N, p);
    om[(std::size_t)(N - j)] = om[(std::size_t)j];  // bitwise symmetric
  }
  real pref = 0.75 / (p.kappa * p.kappa);
  pref *= pref;
  real scale = 1.0 / ((real)N * (real)N);

  struct Quad {
    int k, k1, k2, k3;
    bool operator<(const Quad& o) const {
      return std::tie(k, k1, k2, k3) < std::tie(o.k, o.k1, o.k2, o.k3);
    }
    bool operator==(const Quad& o) const {
      return k == o.k && k1 == o.k1 && k2 == o.k2 && k3 == o.k3;
    }
  };
  auto sigma = [](Quad q) { return Quad{q.k2, q.k3, q.k, q.k1}; };
  auto tau_swap = [](Quad q) { return Quad{q.k1, q.k, q.k3, q.k2}; };

  // canonical kernel evaluation: always on the orbit minimum, so every
  // image of a quadruple sees bit-identical magnitudes
  auto kernel = [&](const Quad& q) {
    real w = pref * om[(std::size_t)q.k] * om[(std::size_t)q.k1] *
             om[(std::size_t)q.k2] * om[(std::size_t)q.k3];
    real f = phi[(std::size_t)(q.k - 1)], f1 = phi[(std::size_t)(q.k1 - 1)],
         f2 = phi[(std::size_t)(q.k2 - 1)], f3 = phi[(std::size_t)(q.k3 - 1)];
    return scale * w * f * f1 * f2 * f3 * (1 / f - 1 / f1 + 1 / f2 - 1 / f3);
  };

  DiscreteCollision out;
  out.values.assign((std::size_t)(N - 1), 0.0);
  for (int jk = 1; jk < N; ++jk)
    for (int j1 = 1; j1 < N; ++j1)
      for (int j2 = 1; j2 < N; ++j2) {
        int j3 = (((jk - j1 + j2) % N) + N) % N;
        if (j3 == 0) continue;
        real Om = (om[(std::size_t)jk] - om[(std::size_t)j1]) +
                  (om[(std::size_t)j2] - om[(std::size_t)j3]);
        if (Om != 0.0) continue;
        Quad q{jk, j1, j2, j3};
        Quad imgs[4] = {q, sigma(q), tau_swap(q), sigma(tau_swap(q))};
        Quad c = *std::min_element(imgs, imgs + 4);
        real s = kernel(c);
        // +s on the even coset {c, sigma(c)}, -s on the swapped one
        real sign = (q == c || q == sigma(c)) ? 1.0 : -1.0;
        out.values[(std::size_t)(jk - 1)] += sign * s;
        ++out.resonance_count;
        if (q == c) {
          // grouped conservation contributions of the whole orbit:
          // action picks up (+s) + (+s) + (-s) + (-s), energy picks up
          // s * ((om_k - om_k1) + (om_k2 - om_k3)) = s * Omega = 0
          out.action_sum += (s - s);
          out.energy_sum += s * Om;
        }
      }
  return out;
}

}  // namespace detail

// Single-point evaluation (sinc_broadened / level_set).
inline real collision_operator(const std::function<real(real)>& phi, real xi,
                               DeltaMethod method, const SimParams& p,
                               const CollisionOptions& opt = {},
                               real* error_estimate = nullptr) {
  if (method == DeltaMethod::discrete_sum)
    throw invalid_parameter("discrete_sum evaluates on the whole grid");
  quad::Result r = (method == DeltaMethod::sinc_broadened)
                       ? collision_sinc(phi, xi, p, opt)
                       : collision_level_set(phi, xi, p, opt);
  if (error_estimate) *error_estimate = r.error;
  return r.value;
}

// Whole-grid evaluation for any method.
inline CollisionResult collision_on_grid(const std::function<real(real)>& phi,
                                         DeltaMethod method, const SimParams& p,
                                         const CollisionOptions& opt = {}) {
  Grid g = build_grid(p.N);
  CollisionResult res;
  res.method = method;
  if (method == DeltaMethod::discrete_sum) {
    std::vector<real> tab(static_cast<std::size_t>(g.size()));
    for (int i = 0; i < g.size(); ++i)
      tab[(std::size_t)i] = phi(g.k(i));
    auto d = detail::collision_discrete(tab, p, opt.resonance_tol);
    res.values = std::move(d.values);
    res.resonance_count = d.resonance_count;
    res.action_sum = d.action_sum;
    res.energy_sum = d.energy_sum;
    return res;
  }
  res.broadening = (method == DeltaMethod::sinc_broadened) ? opt.tau : 0;
  res.values.resize(static_cast<std::size_t>(g.size()));
  for (int i = 0; i < g.size(); ++i) {
    real err = 0, exc = 0;
    if (method == DeltaMethod::sinc_broadened) {
      quad::Result r = collision_sinc(phi, g.k(i), p, opt);
      res.values[(std::size_t)i] = r.value;
      err = r.error;
    } else {
      quad::Result r = collision_level_set(phi, g.k(i), p, opt, &exc);
      res.values[(std::size_t)i] = r.value;
      err = r.error;
    }
    res.quadrature_error_estimate += err;
    res.excised_mass += exc;
  }
  return res;
}

// ---------------------------------------------------------------------------
// WKE time stepping. The collision term is discretized as the broadened
// grid double sum (periodic trapezoid over the torus), which converges
// spectrally for smooth spectra and keeps a step affordable.
// ---------------------------------------------------------------------------
namespace detail {

inline std::vector<real> collision_grid_sinc(const std::vector<real>& phi,
                                             const SimParams& p, real tau) {
  const int N = p.N;
  std::vector<real> om((std::size_t)N, 0.0);
  for (int j = 1; j < N; ++j) om[(std::size_t)j] = dispersion((real)j / N, p);
  real pref = 0.75 / (p.kappa * p.kappa);
  pref *= pref;
  real scale = 1.0 / ((real)N * (real)N);
  std::vector<real> out((std::size_t)(N - 1), 0.0);
  for (int jk = 1; jk < N; ++jk) {
    real f = phi[(std::size_t)(jk - 1)];
    if (!(f > 0)) throw positivity_lost(0.0);
    real acc = 0;
    for (int j1 = 1; j1 < N; ++j1)
      for (int j2 = 1; j2 < N; ++j2) {
        int j3 = (((jk - j1 + j2) % N) + N) % N;
        if (j3 == 0) continue;
        real Om = om[(std::size_t)jk] - om[(std::size_t)j1] +
                  om[(std::size_t)j2] - om[(std::size_t)j3];
        real f1 = phi[(std::size_t)(j1 - 1)], f2 = phi[(std::size_t)(j2 - 1)],
             f3 = phi[(std::size_t)(j3 - 1)];
        real w = pref * om[(std::size_t)jk] * om[(std::size_t)j1] *
                 om[(std::size_t)j2] * om[(std::size_t)j3];
        acc += w * f * f1 * f2 * f3 * (1 / f - 1 / f1 + 1 / f2 - 1 / f3) *
               delta_tau(Om, tau);
      }
    out[(std::size_t)(jk - 1)] = scale * acc;
  }
  return out;
}

}  // namespace detail

struct WkeOptions {
  real dt_max = 0.05;        // in units of T_kin
  real max_rel_change = 0.02;  // per-step cap driving the step control
  real tau = 200.0;
};

// Explicit RK4 on dn/dt = K(n), t measured in units of T_kin so the spectrum
// moves by O(1) per unit time. Positivity is enforced; losing it reports the
// time stamp.
inline std::vector<std::pair<real, Spectrum>> wke_solve(
    const Spectrum& n_in, real t_end, const SimParams& p,
    const WkeOptions& opt = {}, std::vector<real> out_times = {}) {
  for (real v : n_in.values)
    if (!(v > 0)) throw invalid_input("wke needs strictly positive n_in");
  out_times.push_back(0.0);
  out_times.push_back(t_end);
  std::sort(out_times.begin(), out_times.end());
  out_times.erase(std::unique(out_times.begin(), out_times.end()),
                  out_times.end());

  auto K = [&](const std::vector<real>& n) {
    return detail::collision_grid_sinc(n, p, opt.tau);
  };

  std::vector<std::pair<real, Spectrum>> result;
  std::vector<real> n = n_in.values;
  real t = 0;
  result.push_back({t, Spectrum{n}});
  for (std::size_t oi = 1; oi < out_times.size(); ++oi) {
    real target = out_times[oi];
    while (t < target - 1e-12) {
      std::vector<real> k1 = K(n);
      real rate = 0;
      for (std::size_t i = 0; i < n.size(); ++i)
        rate = std::max(rate, std::abs(k1[i]) / n[i]);
      real h = std::min(opt.dt_max, opt.max_rel_change / std::max(rate, 1e-12));
      h = std::min(h, target - t);
      auto stage = [&](const std::vector<real>& base, const std::vector<real>& k,
                       real c) {
        std::vector<real> y(base.size());
        for (std::size_t i = 0; i < base.size(); ++i) y[i] = base[i] + c * k[i];
        for (real v : y)
          if (!(v > 0)) throw positivity_lost(t);
        return y;
      };
      std::vector<real> k2 = K(stage(n, k1, 0.5 * h));
      std::vector<real> k3 = K(stage(n, k2, 0.5 * h));
      std::vector<real> k4 = K(stage(n, k3, h));
      for (std::size_t i = 0; i < n.size(); ++i)
        n[i] += h / 6 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
      for (real v : n)
        if (!(v > 0)) throw positivity_lost(t + h);
      t += h;
    }
    t = target;
    result.push_back({t, Spectrum{n}});
  }
  return result;
}

// ---------------------------------------------------------------------------
// Second-order diagrammatic predictor
// ---------------------------------------------------------------------------
struct PredictorDetail {
  Spectrum main;            // quasi-resonant sum (the predictor S_k)
  Spectrum resonant;        // exact resonances Omega = 0, excluded and logged
  Spectrum degenerate_pos;  // + degenerate assembly from |c^(1)|^2
  Spectrum degenerate_neg;  // - degenerate assembly from 2 Re c^(2) c^(0)*
  long resonant_terms = 0;
};

// S_k at physical time t (t <= T): the |c1|^2 + 2Re(c2 c0*) assembly with
// the sinc^2 kernel at the shifted time t + A(t/T). Exact resonances with
// {k1,k3} != {k,k2} are lower order and reported separately; the degenerate
// sums cancel and both halves are returned so tests can assert it.
inline PredictorDetail second_order_predictor_detail(const Spectrum& n_in,
                                                     real t,
                                                     const FrequencyShift& shift,
                                                     const SimParams& p) {
  if (p.T <= 0) throw invalid_parameter("params.T must be positive");
  if (t > p.T * (1 + 1e-12))
    throw invalid_parameter("predictor needs t <= T");
  const int N = p.N;
  real s = t / p.T;
  real As = shift.A(s);
  real tshift = t + As;

  std::vector<real> om((std::size_t)N, 0.0);
  for (int j = 1; j < N; ++j) om[(std::size_t)j] = dispersion((real)j / N, p);
  real cpref = 0.75 / (p.kappa * p.kappa);
  real w2pref = cpref * cpref;

  PredictorDetail out;
  auto sized = [&] {
    Spectrum sp;
    sp.values.assign((std::size_t)(N - 1), 0.0);
    return sp;
  };
  out.main = sized();
  out.resonant = sized();
  out.degenerate_pos = sized();
  out.degenerate_neg = sized();

  real pref = 2 * p.beta * p.beta * t * t / ((real)N * (real)N);
  real ratio = (t > 0) ? (tshift / t) : 1.0;
  real res_tol = 1e-12 * 4 * std::sqrt(p.kappa / p.mass);

  for (int jk = 1; jk < N; ++jk) {
    real f = n_in.values[(std::size_t)(jk - 1)];
    real main = 0, res = 0, degp = 0, degn = 0;
    for (int j1 = 1; j1 < N; ++j1)
      for (int j2 = 1; j2 < N; ++j2) {
        int j3 = (((jk - j1 + j2) % N) + N) % N;
        if (j3 == 0) continue;
        if (j1 == j2 || j3 == j2) continue;  // the x restriction k1,k3 != k2
        real Om = om[(std::size_t)jk] - om[(std::size_t)j1] +
                  om[(std::size_t)j2] - om[(std::size_t)j3];
        real f1 = n_in.values[(std::size_t)(j1 - 1)],
             f2 = n_in.values[(std::size_t)(j2 - 1)],
             f3 = n_in.values[(std::size_t)(j3 - 1)];
        real w = w2pref * om[(std::size_t)jk] * om[(std::size_t)j1] *
                 om[(std::size_t)j2] * om[(std::size_t)j3];
        real core = w * f * f1 * f2 * f3 * (1 / f - 1 / f1 + 1 / f2 - 1 / f3);
        if (std::abs(Om) <= res_tol) {
          res += core;
          ++out.resonant_terms;
        } else {
          main += core * detail::sinc_sq(0.5 * Om * tshift) * ratio * ratio;
        }
      }
    // degenerate assembly: +4 sum |T_{k,1,1,k}|^2 phi_1^2 phi_k from
    // |c^(1)|^2 against -4 of the same from 2 Re c^(2) c^(0)*
    for (int j1 = 1; j1 < N; ++j1) {
      real Td = cpref * om[(std::size_t)jk] * om[(std::size_t)j1];
      real f1 = n_in.values[(std::size_t)(j1 - 1)];
      degp += 2 * Td * Td * f1 * f1 * f;
      degn -= 2 * Td * Td * f1 * f1 * f;
    }
    out.main.values[(std::size_t)(jk - 1)] = pref * main;
    out.resonant.values[(std::size_t)(jk - 1)] = pref * res;
    out.degenerate_pos.values[(std::size_t)(jk - 1)] = pref * degp;
    out.degenerate_neg.values[(std::size_t)(jk - 1)] = pref * degn;
  }
  return out;
}

inline Spectrum second_order_predictor(const Spectrum& n_in, real t,
                                       const FrequencyShift& shift,
                                       const SimParams& p) {
  return second_order_predictor_detail(n_in, t, shift, p).main;
}

// ---------------------------------------------------------------------------
// Discrete-to-continuum comparison (convergence of iterates)
// ---------------------------------------------------------------------------
struct DiscreteContinuum {
  real discrete = 0;   // (1/N^2) sum F chi(T Omega)
  real integral = 0;   // continuum double integral
  real difference = 0;
  real quad_error = 0;
};

// Both sides of the iterate-convergence identity for the no-wrap region
// {x,y in (0,1), k-x+y in (0,1)}, divided by N^2. Omega here is the
// sin-combination with |sin(pi k)| subtracted.
inline DiscreteContinuum discrete_continuum_compare(
    const std::function<real(real, real)>& F,
    const std::function<real(real)>& chi, real k, int N, real T) {
  auto Om = [&](real x, real y) {
    return std::sin(pi * x) - std::sin(pi * y) + std::sin(pi * (k - x + y)) -
           std::abs(std::sin(pi * k));
  };
  DiscreteContinuum out;
  real acc = 0;
  for (int jx = 1; jx < N; ++jx)
    for (int jy = 1; jy < N; ++jy) {
      real x = (real)jx / N, y = (real)jy / N;
      real z = k - x + y;
      if (z <= 0 || z >= 1) continue;
      acc += F(x, y) * chi(T * Om(x, y));
    }
  out.discrete = acc / ((real)N * (real)N);

  int panels = std::max(64, static_cast<int>(T));
  auto outer = [&](real x) {
    real lo = std::max(real(0), x - k), hi = std::min(real(1), x - k + 1);
    if (hi <= lo) return real(0);
    auto inner = [&](real y) { return F(x, y) * chi(T * Om(x, y)); };
    return quad::integrate(inner, lo, hi, 1e-12, 1e-10, panels, 4 * panels)
        .value;
  };
  quad::Result r = quad::integrate(outer, 0.0, 1.0, 1e-12, 1e-10, 64, 1024);
  out.integral = r.value;
  out.quad_error = r.error;
  out.difference = out.discrete - out.integral;
  return out;
}

// ---------------------------------------------------------------------------
// sinc^2 concentration: D(t) = |t Int sinc^2(t x / 2) f(x) dx - 2 pi f(0)|
// and the fitted decay exponent of D over a t range.
// ---------------------------------------------------------------------------
inline real sinc_concentration_error(const std::function<real(real)>& f,
                                     real t, real L) {
  int panels = std::max(64, static_cast<int>(t * L / pi));
  auto g = [&](real x) { return detail::sinc_sq(0.5 * t * x) * f(x); };
  quad::Result r = quad::integrate(g, -L, L, 1e-13, 1e-11, panels, 8 * panels);
  return std::abs(t * r.value - 2 * pi * f(0.0));
}

struct SincFit {
  real exponent = 0;  // fitted decay rate: D(t) ~ t^-exponent
  std::vector<std::pair<real, real>> samples;  // (t, D(t))
};

inline SincFit sinc_concentration_fit(const std::function<real(real)>& f,
                                      real t_lo, real t_hi, real L,
                                      int npts = 25) {
  SincFit fit;
  std::vector<real> lt, ld;
  for (int i = 0; i < npts; ++i) {
    real t = t_lo * std::pow(t_hi / t_lo, (real)i / (npts - 1));
    // rms over a small window to damp the oscillation of D(t)
    real d2 = 0;
    const int win = 3;
    for (int w = 0; w < win; ++w) {
      real tw = t * (1.0 + 0.03 * w);
      real d = sinc_concentration_error(f, tw, L);
      d2 += d * d;
    }
    real d = std::sqrt(d2 / win);
    fit.samples.push_back({t, d});
    if (d > 0) {
      lt.push_back(std::log(t));
      ld.push_back(std::log(d));
    }
  }
  // least-squares slope of log D vs log t
  real n = (real)lt.size(), sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lt.size(); ++i) {
    sx += lt[i];
    sy += ld[i];
    sxx += lt[i] * lt[i];
    sxy += lt[i] * ld[i];
  }
  fit.exponent = -(n * sxy - sx * sy) / (n * sxx - sx * sx);
  return fit;
}

}  // namespace wavekin
