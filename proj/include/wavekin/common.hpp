#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace wavekin {

using real = double;
using cplx = std::complex<double>;

inline constexpr real pi = 3.141592653589793238462643383279502884;

// ---------------------------------------------------------------------------
// Error taxonomy. Every failure mode named by the public API maps to one of
// these; callers that want exit codes catch `error` and inspect `kind`.
// ---------------------------------------------------------------------------
struct error : std::runtime_error {
  std::string kind;
  error(std::string k, const std::string& msg)
      : std::runtime_error(k + ": " + msg), kind(std::move(k)) {}
};

struct invalid_parameter : error {
  explicit invalid_parameter(const std::string& msg)
      : error("invalid-parameter", msg) {}
};

struct integration_diverged : error {
  real last_good_time;
  explicit integration_diverged(real t)
      : error("integration-diverged",
              "trajectory diverged after t=" + std::to_string(t)),
        last_good_time(t) {}
};

struct fixed_point_failed : error {
  real residual;
  explicit fixed_point_failed(real r)
      : error("fixed-point-failed",
              "iteration stalled with residual " + std::to_string(r)),
        residual(r) {}
};

struct quadrature_failed : error {
  explicit quadrature_failed(const std::string& msg)
      : error("quadrature-failed", msg) {}
};

struct not_admissible : error {
  explicit not_admissible(const std::string& msg)
      : error("not-admissible", msg) {}
};

struct positivity_lost : error {
  real time;
  explicit positivity_lost(real t)
      : error("positivity-lost", "spectrum hit zero at t=" + std::to_string(t)),
        time(t) {}
};

struct structural_bug : error {
  explicit structural_bug(const std::string& msg)
      : error("structural-bug", msg) {}
};

// ---------------------------------------------------------------------------
// Deterministic pairwise reduction. Summation order is fixed by the index
// range, never by thread scheduling, so ensemble means reproduce to 1e-14.
// ---------------------------------------------------------------------------
template <class T, class F>
T pairwise_sum(std::size_t lo, std::size_t hi, F&& term) {
  if (hi == lo) return T{};
  if (hi - lo <= 8) {
    T acc = term(lo);
    for (std::size_t i = lo + 1; i < hi; ++i) acc += term(i);
    return acc;
  }
  std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum<T>(lo, mid, term) + pairwise_sum<T>(mid, hi, term);
}

template <class T>
T pairwise_sum(const std::vector<T>& v) {
  return pairwise_sum<T>(0, v.size(), [&](std::size_t i) { return v[i]; });
}

// Runs fn(i) for i in [0, n) on up to `threads` workers. Each index is
// processed exactly once; results must be written to disjoint slots.
inline void parallel_for(std::size_t n, unsigned threads,
                         const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  unsigned nw = std::min<std::size_t>(threads, n);
  std::vector<std::thread> pool;
  pool.reserve(nw);
  std::exception_ptr first_error = nullptr;
  std::mutex err_mtx;
  for (unsigned w = 0; w < nw; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += nw) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lk(err_mtx);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace wavekin
