#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "wavekin/common.hpp"
#include "wavekin/rng.hpp"

namespace wavekin {

// ---------------------------------------------------------------------------
// Wavenumber grid: k = j/N for j = 1..N-1, strictly inside (0,1). The
// endpoints are excluded because the dispersion and the normal-mode
// transform degenerate there.
// ---------------------------------------------------------------------------
struct Grid {
  int N = 0;
  std::vector<real> points;  // increasing, points[j-1] = j/N

  int size() const { return N - 1; }
  real k(int idx) const { return points[static_cast<std::size_t>(idx)]; }
};

inline Grid build_grid(int N) {
  if (N < 2) throw invalid_parameter("grid needs N >= 2, got " + std::to_string(N));
  Grid g;
  g.N = N;
  g.points.resize(static_cast<std::size_t>(N - 1));
  for (int j = 1; j < N; ++j)
    g.points[static_cast<std::size_t>(j - 1)] = static_cast<real>(j) / N;
  return g;
}

enum class Dist { gaussian, phase };

// ---------------------------------------------------------------------------
// Run parameters. beta and T_kin are derived from (N, gamma) and kept
// consistent by construction; T defaults to the sub-kinetic rescale time
// min(N, N^{5 gamma/4}) * N^{-epsilon}.
// ---------------------------------------------------------------------------
struct SimParams {
  int N = 64;
  real gamma = 0.6;
  real beta = 0;       // N^-gamma
  real kappa = 1.0;
  real mass = 1.0;
  real T = 0;          // time rescale, t_phys = T * s
  real T_kin = 0;      // N^{2 gamma} / (4 pi)
  real epsilon = 0.05;
  std::uint64_t seed = 0;
  Dist dist = Dist::gaussian;

  static SimParams make(int N, real gamma, std::uint64_t seed = 0,
                        Dist dist = Dist::gaussian, real epsilon = 0.05) {
    SimParams p;
    p.N = N;
    p.gamma = gamma;
    p.beta = std::pow(static_cast<real>(N), -gamma);
    p.T_kin = std::pow(static_cast<real>(N), 2 * gamma) / (4 * pi);
    p.T = std::pow(static_cast<real>(N), -epsilon) *
          std::min(static_cast<real>(N),
                   std::pow(static_cast<real>(N), 1.25 * gamma));
    p.epsilon = epsilon;
    p.seed = seed;
    p.dist = dist;
    return p;
  }
};

// Complex amplitudes b_k (or b'_k, c_k) on the grid, stamped with a time.
struct ModeField {
  std::vector<cplx> values;
  real time = 0;
};

// Nonnegative spectrum values on the grid (n_in or n(t,k)).
struct Spectrum {
  std::vector<real> values;
};

// ---------------------------------------------------------------------------
// Dispersion and interaction tensor
// ---------------------------------------------------------------------------

// omega(k) = 2 sqrt(kappa/m) |sin(pi k)|, total on the reals; the counting
// routines use it on the extended domain (-1,2).
inline real dispersion(real k, const SimParams& p) {
  return 2 * std::sqrt(p.kappa / p.mass) * std::abs(std::sin(pi * k));
}

// iota(x) = sgn sin(pi x), the 2-periodic sign in the interaction tensor.
inline int iota(real x) {
  real s = std::sin(pi * x);
  return (s > 0) - (s < 0);
}

inline real mod1(real x) {
  real r = x - std::floor(x);
  return r;
}

// T_{k,1,2,3} = 3/(4 kappa^2) iota(k1-k2+k3) iota(k1) iota(k2) iota(k3)
//               sqrt(omega_k omega_1 omega_2 omega_3).
// For grid arguments all iota(k_i) = +1 and only the wrap sign of
// k1 - k2 + k3 survives.
inline real interaction_coeff(real k, real k1, real k2, real k3,
                              const SimParams& p) {
  real raw = k1 - k2 + k3;
  real diff = raw - k;
  real wrapped = std::round(diff);
  if (std::abs(diff - wrapped) > 1e-9)
    throw invalid_parameter("momentum constraint k1-k2+k3 = k (mod 1) violated");
  int sgn = iota(k1) * iota(k2) * iota(k3) * iota(raw);
  return 0.75 / (p.kappa * p.kappa) * sgn *
         std::sqrt(dispersion(k, p) * dispersion(k1, p) * dispersion(k2, p) *
                   dispersion(k3, p));
}

// Omega_k = omega_k - omega_{k1} + omega_{k2} - omega_{k3}.
inline real resonance_mismatch(real k, real k1, real k2, real k3,
                               const SimParams& p) {
  return dispersion(k, p) - dispersion(k1, p) + dispersion(k2, p) -
         dispersion(k3, p);
}

// ---------------------------------------------------------------------------
// Initial spectra. The default profile 1 + cos(2 pi k)/2 is smooth, O(1)
// and strictly positive, so 1/phi in the collision bracket is safe.
// ---------------------------------------------------------------------------
inline real default_profile(real k) { return 1.0 + 0.5 * std::cos(2 * pi * k); }

inline Spectrum spectrum_from_profile(const Grid& g,
                                      const std::function<real(real)>& f) {
  Spectrum s;
  s.values.resize(static_cast<std::size_t>(g.size()));
  for (int i = 0; i < g.size(); ++i) {
    real v = f(g.k(i));
    if (v < 0) throw invalid_parameter("spectrum profile negative at k=" +
                                       std::to_string(g.k(i)));
    s.values[static_cast<std::size_t>(i)] = v;
  }
  return s;
}

inline Spectrum default_spectrum(const Grid& g) {
  return spectrum_from_profile(g, default_profile);
}

// b_k(0) = sqrt(n_in(k)) eta_k, eta i.i.d. unit-variance (Gaussian or unit
// modulus). Draws are keyed by (seed, sample, mode), so distinct samples are
// independent streams and reproducible in parallel.
inline ModeField sample_initial_data(const Spectrum& n_in, const SimParams& p,
                                     std::uint64_t sample_index = 0) {
  ModeField b;
  b.time = 0;
  b.values.resize(n_in.values.size());
  for (std::size_t i = 0; i < n_in.values.size(); ++i) {
    if (n_in.values[i] < 0)
      throw invalid_parameter("n_in must be nonnegative");
    std::uint64_t stream = (sample_index << 24) ^ (i + 1);
    cplx eta = (p.dist == Dist::gaussian)
                   ? rng::complex_gaussian(p.seed, stream, 0)
                   : rng::unit_phase(p.seed, stream, 0);
    b.values[i] = std::sqrt(n_in.values[i]) * eta;
  }
  return b;
}

}  // namespace wavekin
