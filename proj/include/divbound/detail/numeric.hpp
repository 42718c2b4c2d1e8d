#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace divbound::detail {

/// Neumaier-compensated accumulator. Keeps long sums of O(1) terms accurate
/// to a final rounding instead of growing with n.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      carry_ += (sum_ - t) + x;
    } else {
      carry_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  double value() const noexcept { return sum_ + carry_; }

 private:
  double sum_ = 0.0;
  double carry_ = 0.0;
};

/// lhs <= rhs up to a mixed absolute/relative tolerance. Values near zero are
/// compared absolutely.
inline bool leq_tol(double lhs, double rhs, double atol, double rtol) noexcept {
  const double scale = std::max(std::abs(lhs), std::abs(rhs));
  return rhs - lhs >= -(atol + rtol * scale);
}

inline bool close_tol(double a, double b, double atol, double rtol) noexcept {
  const double scale = std::max(std::abs(a), std::abs(b));
  return std::abs(a - b) <= atol + rtol * scale;
}

/// Log-spaced grid over [lo, hi], endpoints included. An odd point count
/// places the geometric midpoint exactly on the grid.
inline std::vector<double> log_grid(double lo, double hi, int points) {
  if (!(lo > 0.0) || !(hi > lo)) {
    throw std::invalid_argument("log_grid: requires 0 < lo < hi");
  }
  if (points < 2) {
    throw std::invalid_argument("log_grid: requires at least 2 points");
  }
  std::vector<double> grid(static_cast<std::size_t>(points));
  const double llo = std::log(lo);
  const double lhi = std::log(hi);
  for (int i = 0; i < points; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(points - 1);
    grid[static_cast<std::size_t>(i)] = std::exp(llo + f * (lhi - llo));
  }
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

/// Golden-section maximization of a unimodal function on [a, b].
/// Shrinks the bracket until its width is below rel_tol relative to the
/// abscissa scale; returns (argmax, max).
template <class F>
std::pair<double, double> golden_maximize(F&& f, double a, double b,
                                          double rel_tol) {
  constexpr double kInvPhi = 0.6180339887498949;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  while (b - a > rel_tol * std::max({std::abs(a), std::abs(b),
                                     std::numeric_limits<double>::min()})) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    }
  }
  const double xm = 0.5 * (a + b);
  return {xm, f(xm)};
}

template <class F>
std::pair<double, double> golden_minimize(F&& f, double a, double b,
                                          double rel_tol) {
  auto [x, fx] = golden_maximize([&](double t) { return -f(t); }, a, b, rel_tol);
  return {x, -fx};
}

/// SplitMix64: counter-style deterministic generator. Bit-exact on every
/// platform, which std::uniform_real_distribution does not guarantee.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double strictly inside (0, 1).
  double next_unit() noexcept {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Uniform double in [lo, hi].
  double next_in(double lo, double hi) noexcept {
    return lo + (hi - lo) * next_unit();
  }

  /// Uniform integer in [0, bound), bias-free by rejection.
  std::uint64_t next_below(std::uint64_t bound) noexcept {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t v = next();
    while (v >= limit) v = next();
    return v % bound;
  }

 private:
  std::uint64_t state_;
};

inline std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Stream seed for trial `counter` under a master seed. Counter-based so
/// trials are order-independent and safe to evaluate in parallel.
inline std::uint64_t derive_seed(std::uint64_t master,
                                 std::uint64_t counter) noexcept {
  return mix64(master + 0x9e3779b97f4a7c15ULL * (counter + 1));
}

}  // namespace divbound::detail
