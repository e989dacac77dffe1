#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include "wavekin/fft.hpp"
#include "wavekin/model.hpp"

namespace wavekin {

enum class RhsMethod { direct, fft_split, autodetect };

namespace detail {

// Shared precomputation for the cubic term. With u_k = sqrt(omega_k) b_k the
// sum splits into a wrap-free and a wrapped part,
//   NL_k = pref * sqrt(omega_k) * (2 * linear_conv - cyclic_conv)[k],
// because the iota sign of k1-k2+k3 is +1 exactly on the wrap-free set.
struct NonlinearWorkspace {
  int N = 0;
  std::vector<real> sqrt_omega;  // indexed by j = 0..N-1, entry 0 unused
  real prefactor = 0;            // 3 beta / (4 kappa^2 N)
  std::size_t Lpad = 0;          // linear-convolution FFT length
  mutable std::vector<cplx> u, cyc, lin;

  NonlinearWorkspace() = default;
  NonlinearWorkspace(const Grid& g, const SimParams& p) {
    N = g.N;
    sqrt_omega.assign(static_cast<std::size_t>(N), 0.0);
    for (int j = 1; j < N; ++j)
      sqrt_omega[static_cast<std::size_t>(j)] =
          std::sqrt(dispersion(static_cast<real>(j) / N, p));
    prefactor = 0.75 * p.beta / (p.kappa * p.kappa * N);
    Lpad = 1;
    while (Lpad < static_cast<std::size_t>(3 * N)) Lpad <<= 1;
  }
};

inline void cubic_term_direct(const NonlinearWorkspace& w,
                              const std::vector<cplx>& b,
                              std::vector<cplx>& out) {
  const int N = w.N;
  auto& u = w.u;
  u.assign(static_cast<std::size_t>(N), cplx(0, 0));
  for (int j = 1; j < N; ++j)
    u[static_cast<std::size_t>(j)] =
        w.sqrt_omega[static_cast<std::size_t>(j)] *
        b[static_cast<std::size_t>(j - 1)];
  out.assign(static_cast<std::size_t>(N - 1), cplx(0, 0));
  for (int jk = 1; jk < N; ++jk) {
    cplx acc(0, 0);
    for (int j1 = 1; j1 < N; ++j1) {
      const cplx u1 = u[static_cast<std::size_t>(j1)];
      if (u1 == cplx(0, 0)) continue;
      for (int j2 = 1; j2 < N; ++j2) {
        int t = jk - j1 + j2;
        int j3 = ((t % N) + N) % N;
        if (j3 == 0) continue;  // k3 = 0 is off the grid
        real sgn = (j3 == t) ? 1.0 : -1.0;
        acc += sgn * u1 * std::conj(u[static_cast<std::size_t>(j2)]) *
               u[static_cast<std::size_t>(j3)];
      }
    }
    out[static_cast<std::size_t>(jk - 1)] =
        w.prefactor * w.sqrt_omega[static_cast<std::size_t>(jk)] * acc;
  }
}

inline void cubic_term_fft(const NonlinearWorkspace& w,
                           const std::vector<cplx>& b,
                           std::vector<cplx>& out) {
  const int N = w.N;
  const std::size_t L = w.Lpad;
  auto& u = w.u;
  auto& cyc = w.cyc;
  auto& lin = w.lin;

  u.assign(static_cast<std::size_t>(N), cplx(0, 0));
  for (int j = 1; j < N; ++j)
    u[static_cast<std::size_t>(j)] =
        w.sqrt_omega[static_cast<std::size_t>(j)] *
        b[static_cast<std::size_t>(j - 1)];

  // cyclic triple convolution over Z_N
  cyc = u;
  fft::forward(cyc);
  for (auto& z : cyc) z = z * z * std::conj(z);
  fft::inverse(cyc);

  // wrap-free triple convolution via zero padding
  lin.assign(L, cplx(0, 0));
  for (int j = 1; j < N; ++j) lin[static_cast<std::size_t>(j)] = u[static_cast<std::size_t>(j)];
  fft::forward(lin);
  for (auto& z : lin) z = z * z * std::conj(z);
  fft::inverse(lin);

  out.assign(static_cast<std::size_t>(N - 1), cplx(0, 0));
  for (int jk = 1; jk < N; ++jk)
    out[static_cast<std::size_t>(jk - 1)] =
        w.prefactor * w.sqrt_omega[static_cast<std::size_t>(jk)] *
        (2.0 * lin[static_cast<std::size_t>(jk)] - cyc[static_cast<std::size_t>(jk)]);
}

inline void cubic_term(const NonlinearWorkspace& w, const std::vector<cplx>& b,
                       std::vector<cplx>& out, RhsMethod m) {
  bool fft_ok = fft::is_pow2(static_cast<std::size_t>(w.N));
  if (m == RhsMethod::fft_split && !fft_ok)
    throw invalid_parameter("fft_split rhs needs power-of-two N");
  if (m == RhsMethod::direct || (m == RhsMethod::autodetect && (!fft_ok || w.N < 32)))
    cubic_term_direct(w, b, out);
  else
    cubic_term_fft(w, b, out);
}

}  // namespace detail

// d b_k/dt = -i [omega_k b_k + (beta/N) sum T_{k,1,2,3} b_1 b_2^* b_3].
inline ModeField rhs_reduced(const ModeField& b, real /*t*/, const SimParams& p,
                             RhsMethod method = RhsMethod::autodetect) {
  Grid g = build_grid(p.N);
  detail::NonlinearWorkspace w(g, p);
  std::vector<cplx> nl;
  detail::cubic_term(w, b.values, nl, method);
  ModeField out;
  out.time = b.time;
  out.values.resize(b.values.size());
  for (int i = 0; i < g.size(); ++i) {
    real om = dispersion(g.k(i), p);
    out.values[static_cast<std::size_t>(i)] =
        cplx(0, -1) * (om * b.values[static_cast<std::size_t>(i)] +
                       nl[static_cast<std::size_t>(i)]);
  }
  return out;
}

struct Trajectory {
  std::vector<ModeField> snapshots;  // times strictly increasing, first at t=0
  SimParams params;
};

namespace detail {

inline void rotate(std::vector<cplx>& b, const std::vector<real>& omega,
                   real dt) {
  for (std::size_t i = 0; i < b.size(); ++i) {
    real th = -omega[i] * dt;
    b[i] *= cplx(std::cos(th), std::sin(th));
  }
}

inline real max_abs(const std::vector<cplx>& b) {
  real m = 0;
  for (const auto& z : b) m = std::max(m, std::abs(z));
  return m;
}

}  // namespace detail

// Strang step: exact linear rotation halves around one RK4 substep for the
// cubic part. Second order overall, the nonlinear composition is fourth
// order in dt on its own.
class Integrator {
 public:
  Integrator(const SimParams& p, RhsMethod method = RhsMethod::autodetect)
      : params_(p), method_(method), grid_(build_grid(p.N)), work_(grid_, p) {
    omega_.resize(static_cast<std::size_t>(grid_.size()));
    for (int i = 0; i < grid_.size(); ++i)
      omega_[static_cast<std::size_t>(i)] = dispersion(grid_.k(i), params_);
  }

  // One full step of size h applied in place.
  void step(std::vector<cplx>& b, real h) const {
    detail::rotate(b, omega_, h / 2);
    rk4_nonlinear(b, h);
    detail::rotate(b, omega_, h / 2);
  }

  const Grid& grid() const { return grid_; }
  const std::vector<real>& omega() const { return omega_; }

  real suggested_dt() const {
    real om_max = 2 * std::sqrt(params_.kappa / params_.mass);
    return 0.1 / om_max;
  }

 private:
  void nl(const std::vector<cplx>& b, std::vector<cplx>& out) const {
    detail::cubic_term(work_, b, out, method_);
    for (auto& z : out) z *= cplx(0, -1);
  }

  void rk4_nonlinear(std::vector<cplx>& b, real h) const {
    const std::size_t n = b.size();
    std::vector<cplx> k1(n), k2(n), k3(n), k4(n), tmp(n);
    nl(b, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = b[i] + 0.5 * h * k1[i];
    nl(tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = b[i] + 0.5 * h * k2[i];
    nl(tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = b[i] + h * k3[i];
    nl(tmp, k4);
    for (std::size_t i = 0; i < n; ++i)
      b[i] += h / 6 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }

  SimParams params_;
  RhsMethod method_;
  Grid grid_;
  detail::NonlinearWorkspace work_;
  std::vector<real> omega_;
};

// Integrates (R-FPUT) from b0 up to t_end, storing snapshots at the
// requested times (t=0 and t_end always included). Within each snapshot
// interval the step is shrunk to divide the interval exactly.
inline Trajectory evolve(const ModeField& b0, real t_end, real dt,
                         const SimParams& p,
                         std::vector<real> snapshot_times = {},
                         RhsMethod method = RhsMethod::autodetect) {
  if (dt <= 0) throw invalid_parameter("evolve needs dt > 0");
  snapshot_times.push_back(0.0);
  snapshot_times.push_back(t_end);
  std::sort(snapshot_times.begin(), snapshot_times.end());
  snapshot_times.erase(std::unique(snapshot_times.begin(), snapshot_times.end()),
                       snapshot_times.end());
  if (snapshot_times.front() < 0 || snapshot_times.back() > t_end)
    throw invalid_parameter("snapshot times must lie in [0, t_end]");

  Integrator integ(p, method);
  Trajectory traj;
  traj.params = p;
  std::vector<cplx> b = b0.values;
  real t = 0;
  traj.snapshots.push_back(ModeField{b, t});
  for (std::size_t s = 1; s < snapshot_times.size(); ++s) {
    real target = snapshot_times[s];
    real span = target - t;
    if (span <= 0) continue;
    long nsub = std::max<long>(1, static_cast<long>(std::ceil(span / dt - 1e-12)));
    real h = span / static_cast<real>(nsub);
    for (long i = 0; i < nsub; ++i) {
      integ.step(b, h);
      if (!(detail::max_abs(b) <= 1e6)) throw integration_diverged(t + i * h);
    }
    t = target;
    traj.snapshots.push_back(ModeField{b, t});
  }
  return traj;
}

// (action, hamiltonian): action = sum |b_k|^2 and (Ham) with the quartic
// part recovered from <b, NL(b)>/2, which reuses the convolution.
inline std::pair<real, real> conserved_quantities(
    const ModeField& b, const SimParams& p,
    RhsMethod method = RhsMethod::autodetect) {
  Grid g = build_grid(p.N);
  detail::NonlinearWorkspace w(g, p);
  std::vector<cplx> nl;
  detail::cubic_term(w, b.values, nl, method);
  real action = 0, quad = 0, quart = 0;
  for (int i = 0; i < g.size(); ++i) {
    std::size_t ii = static_cast<std::size_t>(i);
    real a = std::norm(b.values[ii]);
    action += a;
    quad += dispersion(g.k(i), p) * a;
    quart += std::real(std::conj(b.values[ii]) * nl[ii]);
  }
  return {action, quad + 0.5 * quart};
}

// ---------------------------------------------------------------------------
// Ensemble statistics
// ---------------------------------------------------------------------------
struct EnsembleSpectrum {
  std::vector<real> times;
  std::vector<Spectrum> mean;            // one per time
  std::vector<std::vector<real>> stderr_; // [time][k]
  int samples = 0;                       // members that finished
  int diverged = 0;                      // members excluded
};

// Empirical n(t,k) = mean |b_k(t)|^2 over M independent members. Members are
// embarrassingly parallel; the reduction is pairwise in member order, so the
// result does not depend on the thread count.
inline EnsembleSpectrum ensemble_spectrum(const Spectrum& n_in,
                                          const SimParams& p, int M,
                                          std::vector<real> times, real dt = 0,
                                          unsigned threads = 1,
                                          RhsMethod method = RhsMethod::autodetect) {
  if (M < 2) throw invalid_parameter("ensemble needs M >= 2");
  if (times.empty()) throw invalid_parameter("ensemble needs output times");
  std::sort(times.begin(), times.end());
  const real t_end = times.back();
  if (dt <= 0) dt = Integrator(p, method).suggested_dt();

  const std::size_t K = n_in.values.size();
  const std::size_t nt = times.size();
  std::vector<std::vector<real>> abs2(static_cast<std::size_t>(M));
  std::vector<char> ok(static_cast<std::size_t>(M), 0);

  parallel_for(static_cast<std::size_t>(M), threads, [&](std::size_t m) {
    ModeField b0 = sample_initial_data(n_in, p, m);
    try {
      Trajectory tr = evolve(b0, t_end, dt, p, times, method);
      std::vector<real> rec(nt * K);
      // evolve() may add t=0; index snapshots by requested time
      std::size_t si = 0;
      for (std::size_t ti = 0; ti < nt; ++ti) {
        while (si < tr.snapshots.size() &&
               tr.snapshots[si].time < times[ti] - 1e-12)
          ++si;
        for (std::size_t i = 0; i < K; ++i)
          rec[ti * K + i] = std::norm(tr.snapshots[si].values[i]);
      }
      abs2[m] = std::move(rec);
      ok[m] = 1;
    } catch (const integration_diverged&) {
      ok[m] = 0;
    }
  });

  std::vector<std::size_t> good;
  for (std::size_t m = 0; m < abs2.size(); ++m)
    if (ok[m]) good.push_back(m);
  EnsembleSpectrum es;
  es.times = times;
  es.samples = static_cast<int>(good.size());
  es.diverged = M - es.samples;
  if (es.samples < 2) throw invalid_parameter("fewer than 2 members survived");

  es.mean.resize(nt);
  es.stderr_.resize(nt);
  const real inv = 1.0 / static_cast<real>(es.samples);
  for (std::size_t ti = 0; ti < nt; ++ti) {
    es.mean[ti].values.resize(K);
    es.stderr_[ti].resize(K);
    for (std::size_t i = 0; i < K; ++i) {
      real mu = inv * pairwise_sum<real>(0, good.size(), [&](std::size_t g) {
                  return abs2[good[g]][ti * K + i];
                });
      real var = pairwise_sum<real>(0, good.size(), [&](std::size_t g) {
                   real d = abs2[good[g]][ti * K + i] - mu;
                   return d * d;
                 }) /
                 static_cast<real>(es.samples - 1);
      es.mean[ti].values[i] = mu;
      es.stderr_[ti][i] = std::sqrt(var * inv);
    }
  }
  return es;
}

// b'_k(s) = e^{i omega_k T s} b_k(T s): the phase-factored field on the
// rescaled clock s in [0,1].
inline ModeField to_interaction_picture(const ModeField& b, const SimParams& p) {
  Grid g = build_grid(p.N);
  ModeField out;
  out.time = b.time / p.T;
  out.values.resize(b.values.size());
  for (int i = 0; i < g.size(); ++i) {
    real th = dispersion(g.k(i), p) * b.time;
    out.values[static_cast<std::size_t>(i)] =
        b.values[static_cast<std::size_t>(i)] * cplx(std::cos(th), std::sin(th));
  }
  return out;
}

}  // namespace wavekin
