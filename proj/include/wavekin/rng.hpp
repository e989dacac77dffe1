#pragma once

#include <cstdint>

#include "wavekin/common.hpp"

namespace wavekin {

// ---------------------------------------------------------------------------
// Counter-based random numbers. A draw is a pure function of
// (seed, stream, counter), so ensemble members can be generated on any
// worker in any order and still be bit-identical run to run. Mixing is the
// splitmix64 finalizer applied to the keyed counter.
// ---------------------------------------------------------------------------
namespace rng {

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline std::uint64_t keyed(std::uint64_t seed, std::uint64_t stream,
                           std::uint64_t counter) {
  std::uint64_t h = mix64(seed ^ 0x243f6a8885a308d3ull);
  h = mix64(h ^ stream);
  return mix64(h ^ counter);
}

// Uniform in (0,1); never returns 0 or 1 so logs are safe.
inline real uniform(std::uint64_t seed, std::uint64_t stream,
                    std::uint64_t counter) {
  std::uint64_t u = keyed(seed, stream, counter);
  return (static_cast<real>(u >> 11) + 0.5) * 0x1.0p-53;
}

// Standard complex Gaussian, E eta = 0, E|eta|^2 = 1.
inline cplx complex_gaussian(std::uint64_t seed, std::uint64_t stream,
                             std::uint64_t counter) {
  real u1 = uniform(seed, stream, 2 * counter);
  real u2 = uniform(seed, stream, 2 * counter + 1);
  real r = std::sqrt(-std::log(u1));
  return cplx(r * std::cos(2 * pi * u2), r * std::sin(2 * pi * u2));
}

// Uniform on the unit circle, |eta| = 1 exactly up to rounding.
inline cplx unit_phase(std::uint64_t seed, std::uint64_t stream,
                       std::uint64_t counter) {
  real u = uniform(seed, stream, 2 * counter);
  return cplx(std::cos(2 * pi * u), std::sin(2 * pi * u));
}

}  // namespace rng
}  // namespace wavekin
