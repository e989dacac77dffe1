#include <catch2/catch_amalgamated.hpp>

#include "wavekin/model.hpp"

using namespace wavekin;

TEST_CASE("build_grid basics") {
  Grid g = build_grid(4);
  REQUIRE(g.size() == 3);
  CHECK(g.k(0) == Catch::Approx(0.25));
  CHECK(g.k(1) == Catch::Approx(0.5));
  CHECK(g.k(2) == Catch::Approx(0.75));

  Grid g2 = build_grid(2);
  REQUIRE(g2.size() == 1);
  CHECK(g2.k(0) == Catch::Approx(0.5));

  CHECK_THROWS_AS(build_grid(1), invalid_parameter);

  // spacing exactly 1/N, all points strictly interior
  Grid g64 = build_grid(64);
  for (int i = 0; i < g64.size(); ++i) {
    CHECK(g64.k(i) > 0.0);
    CHECK(g64.k(i) < 1.0);
    if (i > 0) CHECK(g64.k(i) - g64.k(i - 1) == Catch::Approx(1.0 / 64).epsilon(1e-15));
  }
}

TEST_CASE("params derived quantities") {
  SimParams p = SimParams::make(64, 0.6);
  CHECK(p.beta == Catch::Approx(std::pow(64.0, -0.6)).epsilon(1e-15));
  CHECK(p.T_kin == Catch::Approx(std::pow(64.0, 1.2) / (4 * pi)).epsilon(1e-15));
  CHECK(p.T <= std::pow(64.0, 1.0 - p.epsilon) + 1e-12);
}

TEST_CASE("dispersion") {
  SimParams p = SimParams::make(16, 0.5);
  CHECK(dispersion(0.5, p) == Catch::Approx(2.0).epsilon(1e-15));
  CHECK(dispersion(1.0 / 6, p) == Catch::Approx(1.0).epsilon(1e-14));
  // reflection symmetry on the grid
  Grid g = build_grid(16);
  for (int i = 0; i < g.size(); ++i)
    CHECK(dispersion(g.k(i), p) ==
          Catch::Approx(dispersion(1.0 - g.k(i), p)).margin(1e-14));
  // extended domain stays nonnegative
  CHECK(dispersion(-0.3, p) >= 0.0);
  CHECK(dispersion(1.7, p) >= 0.0);
}

TEST_CASE("interaction coefficient") {
  SimParams p = SimParams::make(16, 0.5);

  SECTION("degenerate closed form T_{k,l,l,k} = 3/(4 kappa^2) w_k w_l") {
    Grid g = build_grid(16);
    for (int a = 0; a < g.size(); a += 3)
      for (int b = 0; b < g.size(); b += 3) {
        real k = g.k(a), l = g.k(b);
        real expect = 0.75 * dispersion(k, p) * dispersion(l, p);
        CHECK(interaction_coeff(k, l, l, k, p) ==
              Catch::Approx(expect).epsilon(1e-13));
      }
  }

  SECTION("all equal at k=1/2 gives 3") {
    CHECK(interaction_coeff(0.5, 0.5, 0.5, 0.5, p) ==
          Catch::Approx(3.0).epsilon(1e-14));
  }

  SECTION("wrap makes the sign negative") {
    // k1 - k2 + k3 = 1.1, reduced k = 0.1
    real v = interaction_coeff(0.1, 0.9, 0.1, 0.3, p);
    CHECK(v < 0.0);
  }

  SECTION("momentum violation rejected") {
    CHECK_THROWS_AS(interaction_coeff(0.3, 0.9, 0.1, 0.3, p),
                    invalid_parameter);
  }

  SECTION("wrap sign flips exactly when k1-k2+k3 leaves (0,1)") {
    Grid g = build_grid(8);
    for (int a = 0; a < g.size(); ++a)
      for (int b = 0; b < g.size(); ++b)
        for (int c = 0; c < g.size(); ++c) {
          real raw = g.k(a) - g.k(b) + g.k(c);
          real k = mod1(raw);
          if (k == 0.0) continue;
          real v = interaction_coeff(k, g.k(a), g.k(b), g.k(c), p);
          if (raw > 0 && raw < 1)
            CHECK(v > 0.0);
          else
            CHECK(v < 0.0);
        }
  }

  SECTION("symmetry under k1 <-> k3 and pair exchange") {
    Grid g = build_grid(8);
    SimParams q = SimParams::make(8, 0.5);
    for (int a = 0; a < g.size(); ++a)
      for (int b = 0; b < g.size(); ++b)
        for (int c = 0; c < g.size(); ++c) {
          real raw = g.k(a) - g.k(b) + g.k(c);
          real k = mod1(raw);
          if (k == 0.0) continue;
          real v = interaction_coeff(k, g.k(a), g.k(b), g.k(c), q);
          CHECK(interaction_coeff(k, g.k(c), g.k(b), g.k(a), q) ==
                Catch::Approx(v).epsilon(1e-13));
          // swap the pair structure (k,k2) <-> (k1,k3)
          CHECK(interaction_coeff(g.k(a), k, g.k(c), g.k(b), q) ==
                Catch::Approx(v).epsilon(1e-13));
        }
  }
}

TEST_CASE("resonance mismatch") {
  SimParams p = SimParams::make(16, 0.5);
  CHECK(resonance_mismatch(0.3, 0.3, 0.7, 0.7, p) == 0.0);
  CHECK(resonance_mismatch(0.5, 0.25, 0.25, 0.5, p) == 0.0);

  // frozen oracle: direct |sin| evaluation in extended precision
  long double om_k = 2.0L * fabsl(sinl(3.14159265358979323846264338327950288L * 0.5L));
  long double om_1 = 2.0L * fabsl(sinl(3.14159265358979323846264338327950288L * 0.125L));
  long double om_2 = 2.0L * fabsl(sinl(3.14159265358979323846264338327950288L * 0.25L));
  long double om_3 = 2.0L * fabsl(sinl(3.14159265358979323846264338327950288L * 0.625L));
  long double oracle = om_k - om_1 + om_2 - om_3;
  CHECK(static_cast<double>(oracle) ==
        Catch::Approx(0.80108763262034199).epsilon(1e-15));
  CHECK(resonance_mismatch(0.5, 0.125, 0.25, 0.625, p) ==
        Catch::Approx(static_cast<double>(oracle)).epsilon(1e-14));

  // antisymmetry under the swapped quadruple
  Grid g = build_grid(32);
  for (int t = 0; t < 50; ++t) {
    real k = g.k((7 * t) % g.size()), k1 = g.k((11 * t + 3) % g.size());
    real k2 = g.k((13 * t + 5) % g.size()), k3 = g.k((17 * t + 1) % g.size());
    CHECK(resonance_mismatch(k, k1, k2, k3, p) +
              resonance_mismatch(k1, k, k3, k2, p) ==
          Catch::Approx(0.0).margin(1e-15));
  }
}

TEST_CASE("initial data sampling") {
  SimParams p = SimParams::make(32, 0.6, 1234, Dist::phase);
  Grid g = build_grid(p.N);
  Spectrum n_in = default_spectrum(g);

  SECTION("phase samples have |b|^2 = n_in exactly") {
    for (int m = 0; m < 5; ++m) {
      ModeField b = sample_initial_data(n_in, p, m);
      for (std::size_t i = 0; i < b.values.size(); ++i)
        CHECK(std::norm(b.values[i]) ==
              Catch::Approx(n_in.values[i]).epsilon(1e-12));
    }
  }

  SECTION("reproducible and independent across sample indices") {
    ModeField a = sample_initial_data(n_in, p, 7);
    ModeField b = sample_initial_data(n_in, p, 7);
    ModeField c = sample_initial_data(n_in, p, 8);
    for (std::size_t i = 0; i < a.values.size(); ++i) {
      CHECK(a.values[i] == b.values[i]);  // bit reproducible
    }
    CHECK(a.values[0] != c.values[0]);
  }

  SECTION("gaussian moments: mean |b|^2 near n_in, mean b_k b_k' near 0") {
    SimParams pg = SimParams::make(8, 0.6, 99, Dist::gaussian);
    Grid g8 = build_grid(8);
    Spectrum n8 = default_spectrum(g8);
    const int M = 20000;
    std::vector<real> m2(n8.values.size(), 0.0);
    cplx cross(0, 0);
    for (int m = 0; m < M; ++m) {
      ModeField b = sample_initial_data(n8, pg, m);
      for (std::size_t i = 0; i < b.values.size(); ++i)
        m2[i] += std::norm(b.values[i]);
      cross += b.values[0] * b.values[1];
    }
    for (std::size_t i = 0; i < m2.size(); ++i) {
      real mean = m2[i] / M;
      real se = n8.values[i] / std::sqrt(static_cast<real>(M));  // var ~ n^2
      CHECK(std::abs(mean - n8.values[i]) < 4 * se);
    }
    real se01 = std::sqrt(n8.values[0] * n8.values[1] / M);
    CHECK(std::abs(cross / static_cast<real>(M)) < 4 * se01);
  }

  SECTION("negative n_in rejected") {
    Spectrum bad = n_in;
    bad.values[3] = -0.1;
    CHECK_THROWS_AS(sample_initial_data(bad, p, 0), invalid_parameter);
  }
}
