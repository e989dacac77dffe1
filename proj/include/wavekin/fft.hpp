#pragma once

#include <vector>

#include "wavekin/common.hpp"

namespace wavekin {
namespace fft {

inline bool is_pow2(std::size_t n) { return n && ((n & (n - 1)) == 0); }

// In-place iterative radix-2 Cooley-Tukey. Length must be a power of two;
// sign = -1 forward, +1 inverse (unnormalized).
inline void transform(std::vector<cplx>& a, int sign) {
  const std::size_t n = a.size();
  if (n <= 1) return;
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    real ang = sign * 2 * pi / static_cast<real>(len);
    cplx wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      cplx w(1.0, 0.0);
      for (std::size_t j = 0; j < len / 2; ++j) {
        cplx u = a[i + j];
        cplx v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

inline void forward(std::vector<cplx>& a) { transform(a, -1); }

inline void inverse(std::vector<cplx>& a) {
  transform(a, +1);
  real inv = 1.0 / static_cast<real>(a.size());
  for (auto& z : a) z *= inv;
}

}  // namespace fft
}  // namespace wavekin
