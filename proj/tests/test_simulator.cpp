#include <catch2/catch_amalgamated.hpp>

#include "wavekin/simulator.hpp"

using namespace wavekin;

namespace {

// Independent O(N^3) oracle: the quartic Hamiltonian sum done literally,
// quadruple by quadruple, with the wrap-signed tensor.
real hamiltonian_direct(const ModeField& b, const SimParams& p) {
  Grid g = build_grid(p.N);
  const int N = p.N;
  real quad = 0;
  for (int i = 0; i < g.size(); ++i)
    quad += dispersion(g.k(i), p) * std::norm(b.values[(std::size_t)i]);
  cplx quart(0, 0);
  for (int j1 = 1; j1 < N; ++j1)
    for (int j2 = 1; j2 < N; ++j2)
      for (int j3 = 1; j3 < N; ++j3) {
        int t = j1 - j2 + j3;
        int j4 = ((t % N) + N) % N;
        if (j4 == 0) continue;
        real sgn = (t == j4) ? 1.0 : -1.0;
        real w = 0.75 / (p.kappa * p.kappa) * sgn *
                 std::sqrt(dispersion((real)j1 / N, p) * dispersion((real)j2 / N, p) *
                           dispersion((real)j3 / N, p) * dispersion((real)j4 / N, p));
        quart += w * std::conj(b.values[(std::size_t)(j1 - 1)]) *
                 b.values[(std::size_t)(j2 - 1)] *
                 std::conj(b.values[(std::size_t)(j3 - 1)]) *
                 b.values[(std::size_t)(j4 - 1)];
      }
  return quad + p.beta / (2.0 * N) * std::real(quart);
}

ModeField random_field(const SimParams& p, std::uint64_t sample = 0) {
  Grid g = build_grid(p.N);
  Spectrum n_in = default_spectrum(g);
  return sample_initial_data(n_in, p, sample);
}

}  // namespace

TEST_CASE("rhs zero field and single mode") {
  SimParams p = SimParams::make(16, 0.6, 42);
  Grid g = build_grid(p.N);

  ModeField z;
  z.values.assign((std::size_t)g.size(), cplx(0, 0));
  ModeField dz = rhs_reduced(z, 0.0, p);
  for (auto& v : dz.values) CHECK(std::abs(v) == 0.0);

  // single mode k0: only the self-interaction survives the constraint
  int i0 = 7;
  real k0 = g.k(i0);
  cplx amp(0.8, -0.4);
  ModeField s = z;
  s.values[(std::size_t)i0] = amp;
  ModeField ds = rhs_reduced(s, 0.0, p, RhsMethod::direct);
  cplx expect = cplx(0, -1) *
                (dispersion(k0, p) * amp +
                 p.beta / p.N * interaction_coeff(k0, k0, k0, k0, p) *
                     std::norm(amp) * amp);
  for (int i = 0; i < g.size(); ++i) {
    if (i == i0)
      CHECK(std::abs(ds.values[(std::size_t)i] - expect) < 1e-14);
    else
      CHECK(std::abs(ds.values[(std::size_t)i]) < 1e-14);
  }
}

TEST_CASE("fft and direct rhs agree") {
  for (int N : {16, 64}) {
    SimParams p = SimParams::make(N, 0.6, 5);
    ModeField b = random_field(p);
    ModeField d1 = rhs_reduced(b, 0.0, p, RhsMethod::direct);
    ModeField d2 = rhs_reduced(b, 0.0, p, RhsMethod::fft_split);
    real scale = 0;
    for (auto& v : d1.values) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i < d1.values.size(); ++i)
      CHECK(std::abs(d1.values[i] - d2.values[i]) < 1e-12 * scale);
  }
}

TEST_CASE("action is orthogonal to the rhs") {
  // d/dt sum |b|^2 = 2 Re <rhs, b> must vanish identically
  SimParams p = SimParams::make(32, 0.6, 9);
  ModeField b = random_field(p);
  ModeField db = rhs_reduced(b, 0.0, p);
  cplx ip(0, 0);
  real scale = 0;
  for (std::size_t i = 0; i < b.values.size(); ++i) {
    ip += std::conj(b.values[i]) * db.values[i];
    scale += std::abs(b.values[i]) * std::abs(db.values[i]);
  }
  CHECK(std::abs(std::real(ip)) < 1e-12 * scale);
}

TEST_CASE("linear flow is exact when beta = 0") {
  SimParams p = SimParams::make(32, 0.6, 11);
  p.beta = 0.0;
  Grid g = build_grid(p.N);
  ModeField b0 = random_field(p);
  real t_end = 7.3;
  Trajectory tr = evolve(b0, t_end, 0.05, p, {0.0, 3.1, t_end});
  for (const auto& snap : tr.snapshots) {
    for (int i = 0; i < g.size(); ++i) {
      real th = -dispersion(g.k(i), p) * snap.time;
      cplx expect = b0.values[(std::size_t)i] * cplx(std::cos(th), std::sin(th));
      CHECK(std::abs(snap.values[(std::size_t)i] - expect) < 1e-12);
    }
  }
}

TEST_CASE("conserved quantities") {
  SimParams p = SimParams::make(12, 0.6, 3);

  SECTION("zero field") {
    ModeField z;
    z.values.assign((std::size_t)p.N - 1, cplx(0, 0));
    auto [a, h] = conserved_quantities(z, p);
    CHECK(a == 0.0);
    CHECK(h == 0.0);
  }

  SECTION("single mode closed form") {
    SimParams q = SimParams::make(16, 0.6, 3);
    Grid g = build_grid(q.N);
    ModeField s;
    s.values.assign((std::size_t)g.size(), cplx(0, 0));
    int i0 = 7;  // k = 0.5
    REQUIRE(g.k(i0) == Catch::Approx(0.5));
    s.values[(std::size_t)i0] = cplx(0.6, 0.8);  // |z| = 1
    auto [a, h] = conserved_quantities(s, q);
    CHECK(a == Catch::Approx(1.0).epsilon(1e-14));
    CHECK(h == Catch::Approx(2.0 + 3.0 * q.beta / (2.0 * q.N)).epsilon(1e-13));
  }

  SECTION("convolution reuse matches the direct quadruple sum") {
    ModeField b = random_field(p);
    auto [a, h] = conserved_quantities(b, p);
    (void)a;
    CHECK(h == Catch::Approx(hamiltonian_direct(b, p)).epsilon(1e-12));
  }
}

TEST_CASE("conservation drift over a short run") {
  SimParams p = SimParams::make(16, 0.6, 21);
  ModeField b0 = random_field(p);
  auto [a0, h0] = conserved_quantities(b0, p);
  Trajectory tr = evolve(b0, 5.0, 0.01, p);
  auto [a1, h1] = conserved_quantities(tr.snapshots.back(), p);
  CHECK(std::abs(a1 - a0) / a0 < 1e-10);
  CHECK(std::abs(h1 - h0) / std::abs(h0) < 5e-7);
}

TEST_CASE("drift shrinks under step halving") {
  SimParams p = SimParams::make(16, 0.6, 22);
  ModeField b0 = random_field(p);
  auto [a0, h0] = conserved_quantities(b0, p);

  auto drift = [&](real dt) {
    Trajectory tr = evolve(b0, 2.0, dt, p);
    auto [a1, h1] = conserved_quantities(tr.snapshots.back(), p);
    return std::make_pair(std::abs(a1 - a0) / a0,
                          std::abs(h1 - h0) / std::abs(h0));
  };
  auto [da1, dh1] = drift(0.08);
  auto [da2, dh2] = drift(0.04);
  // action error comes from RK4 on the cubic flow: at least 4th order
  CHECK(da2 < da1 / 10.0);
  // hamiltonian error is dominated by the Strang commutator: 2nd order
  CHECK(dh2 < dh1 / 3.0);
}

TEST_CASE("gauge invariance") {
  SimParams p = SimParams::make(16, 0.6, 31);
  ModeField b0 = random_field(p);
  cplx phase = std::polar(1.0, 0.7341);
  ModeField b0r = b0;
  for (auto& v : b0r.values) v *= phase;
  Trajectory t1 = evolve(b0, 1.5, 0.02, p);
  Trajectory t2 = evolve(b0r, 1.5, 0.02, p);
  for (std::size_t i = 0; i < b0.values.size(); ++i)
    CHECK(std::abs(t2.snapshots.back().values[i] -
                   phase * t1.snapshots.back().values[i]) < 1e-12);
}

TEST_CASE("interaction picture consistency") {
  // b'(s) = e^{i w T s} b(T s) must satisfy the phase-factored equation:
  // check d/ds b' against the claimed right side by central differences.
  SimParams p = SimParams::make(12, 0.6, 41);
  p.T = 2.0;  // keep the run short
  ModeField b0 = random_field(p);
  real s0 = 0.4, ds = 1e-3;
  std::vector<real> times = {p.T * (s0 - ds), p.T * s0, p.T * (s0 + ds)};
  Trajectory tr = evolve(b0, times.back(), 2e-4, p, times);
  REQUIRE(tr.snapshots.size() == 4);  // t=0 plus the three requested
  ModeField bm = to_interaction_picture(tr.snapshots[1], p);
  ModeField bc = to_interaction_picture(tr.snapshots[2], p);
  ModeField bp = to_interaction_picture(tr.snapshots[3], p);

  const int N = p.N;
  for (int jk = 1; jk < N; ++jk) {
    cplx lhs = (bp.values[(std::size_t)(jk - 1)] - bm.values[(std::size_t)(jk - 1)]) /
               (2 * ds);
    cplx rhs(0, 0);
    for (int j1 = 1; j1 < N; ++j1)
      for (int j2 = 1; j2 < N; ++j2) {
        int t = jk - j1 + j2;
        int j3 = ((t % N) + N) % N;
        if (j3 == 0) continue;
        real k = (real)jk / N, k1 = (real)j1 / N, k2 = (real)j2 / N,
             k3 = (real)j3 / N;
        real Om = resonance_mismatch(k, k1, k2, k3, p);
        rhs += interaction_coeff(k, k1, k2, k3, p) *
               bc.values[(std::size_t)(j1 - 1)] *
               std::conj(bc.values[(std::size_t)(j2 - 1)]) *
               bc.values[(std::size_t)(j3 - 1)] *
               std::polar(1.0, Om * p.T * s0);
      }
    rhs *= cplx(0, -1) * p.beta * p.T / (real)N;
    CHECK(std::abs(lhs - rhs) < 5e-3 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("ensemble spectrum statistics") {
  SimParams p = SimParams::make(8, 0.6, 77, Dist::gaussian);
  Grid g = build_grid(p.N);
  Spectrum n_in = default_spectrum(g);

  SECTION("t = 0 gaussian unbiased") {
    EnsembleSpectrum es = ensemble_spectrum(n_in, p, 800, {0.0}, 0.05, 2);
    REQUIRE(es.samples == 800);
    for (std::size_t i = 0; i < n_in.values.size(); ++i)
      CHECK(std::abs(es.mean[0].values[i] - n_in.values[i]) <=
            4 * es.stderr_[0][i]);
  }

  SECTION("t = 0 phase exact") {
    SimParams q = p;
    q.dist = Dist::phase;
    EnsembleSpectrum es = ensemble_spectrum(n_in, q, 16, {0.0}, 0.05, 2);
    for (std::size_t i = 0; i < n_in.values.size(); ++i) {
      CHECK(es.mean[0].values[i] == Catch::Approx(n_in.values[i]).epsilon(1e-12));
      CHECK(es.stderr_[0][i] < 1e-12);
    }
  }

  SECTION("CLT scaling of stderr") {
    EnsembleSpectrum e1 = ensemble_spectrum(n_in, p, 500, {0.3}, 0.05, 2);
    EnsembleSpectrum e4 = ensemble_spectrum(n_in, p, 2000, {0.3}, 0.05, 2);
    real r = 0;
    for (std::size_t i = 0; i < n_in.values.size(); ++i)
      r += e1.stderr_[0][i] / e4.stderr_[0][i];
    r /= (real)n_in.values.size();
    CHECK(r > 1.6);
    CHECK(r < 2.4);
  }

  SECTION("thread count does not change the result") {
    EnsembleSpectrum e1 = ensemble_spectrum(n_in, p, 64, {0.2}, 0.05, 1);
    EnsembleSpectrum e2 = ensemble_spectrum(n_in, p, 64, {0.2}, 0.05, 2);
    for (std::size_t i = 0; i < n_in.values.size(); ++i)
      CHECK(e1.mean[0].values[i] == e2.mean[0].values[i]);
  }
}
