#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "divbound/detail/numeric.hpp"

namespace divbound {

/// Tolerances for simplex membership. Inputs are accepted when their sum is
/// within kSimplexInputTol of one; stored weights are then snapped so that
/// every constructed Distribution satisfies the tighter kSimplexSumTol.
inline constexpr double kSimplexInputTol = 1e-9;
inline constexpr double kSimplexSumTol = 1e-12;

/// Smallest weight the random sampler will emit. Keeps likelihood ratios
/// finite so that ratio-dependent bounds stay well defined.
inline constexpr double kSamplerWeightFloor = 1e-6;

/// A finite probability distribution with strictly positive weights.
/// Instances can only be built through from_weights, so every Distribution
/// in circulation has been validated.
class Distribution {
 public:
  /// Validates (and optionally normalizes) a weight vector.
  ///
  /// Requirements: at least two entries, every entry finite and > 0, and --
  /// unless `normalize` is set -- a total within kSimplexInputTol of one.
  /// Throws std::invalid_argument otherwise.
  static Distribution from_weights(std::vector<double> weights,
                                   bool normalize = false) {
    if (weights.size() < 2) {
      throw std::invalid_argument(
          "Distribution: need at least 2 weights, got " +
          std::to_string(weights.size()));
    }
    detail::CompensatedSum total;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      const double w = weights[i];
      if (!std::isfinite(w) || !(w > 0.0)) {
        throw std::invalid_argument(
            "Distribution: weight[" + std::to_string(i) +
            "] must be a finite positive number");
      }
      total.add(w);
    }
    const double sum = total.value();
    if (!normalize && std::abs(sum - 1.0) > kSimplexInputTol) {
      char msg[128];
      std::snprintf(msg, sizeof(msg),
                    "Distribution: weights sum to %g, expected 1 within %g "
                    "(pass normalize to rescale)",
                    sum, kSimplexInputTol);
      throw std::invalid_argument(msg);
    }
    // Snap to the simplex whenever the raw sum misses the strict tolerance.
    // Dividing by the compensated total leaves the stored sum within a few
    // ulps of one, far inside kSimplexSumTol.
    if (std::abs(sum - 1.0) > kSimplexSumTol) {
      for (double& w : weights) w /= sum;
    }
    return Distribution(std::move(weights));
  }

  std::size_t size() const noexcept { return weights_.size(); }
  double operator[](std::size_t i) const { return weights_[i]; }
  const std::vector<double>& weights() const noexcept { return weights_; }

  auto begin() const noexcept { return weights_.begin(); }
  auto end() const noexcept { return weights_.end(); }

 private:
  explicit Distribution(std::vector<double> w) : weights_(std::move(w)) {}

  std::vector<double> weights_;
};

/// Extremes of the likelihood ratio p_i/q_i over the support.
struct RatioBounds {
  double lower = 0.0;  // min_i p_i/q_i, clamped to <= 1
  double upper = 0.0;  // max_i p_i/q_i, clamped to >= 1
};

/// Computes [min ratio, max ratio] for two distributions on a common support.
/// The interval is clamped to contain 1: the weighted mean of the ratios is
/// exactly 1, so only rounding can push both extremes to the same side.
inline RatioBounds ratio_bounds(const Distribution& p, const Distribution& q) {
  if (p.size() != q.size()) {
    throw std::invalid_argument("ratio_bounds: distributions differ in size (" +
                                std::to_string(p.size()) + " vs " +
                                std::to_string(q.size()) + ")");
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double r = p[i] / q[i];
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  return RatioBounds{std::min(lo, 1.0), std::max(hi, 1.0)};
}

/// Draws one random distribution of the given size. Weights are independent
/// exponentials floored at kSamplerWeightFloor and then normalized; the floor
/// bounds how extreme a sampled likelihood ratio can get.
inline Distribution sample_distribution(std::size_t n,
                                        detail::SplitMix64& rng) {
  if (n < 2) {
    throw std::invalid_argument("sample_distribution: need n >= 2");
  }
  std::vector<double> w(n);
  for (double& wi : w) {
    wi = std::max(-std::log(rng.next_unit()), kSamplerWeightFloor);
  }
  return Distribution::from_weights(std::move(w), /*normalize=*/true);
}

/// Draws a pair (P, Q) on a common support of size n, deterministically from
/// the seed. When `stress` is set, Q is a tilted copy of P (per-coordinate
/// factors up to 10^±1.5), which drives the ratio spread R/r toward 10^3.
inline std::pair<Distribution, Distribution> sample_pair(std::size_t n,
                                                         std::uint64_t seed,
                                                         bool stress = false) {
  detail::SplitMix64 rng(seed);
  Distribution p = sample_distribution(n, rng);
  if (!stress) {
    Distribution q = sample_distribution(n, rng);
    return {std::move(p), std::move(q)};
  }
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = p[i] * std::pow(10.0, rng.next_in(-1.5, 1.5));
  }
  return {std::move(p),
          Distribution::from_weights(std::move(w), /*normalize=*/true)};
}

}  // namespace divbound
