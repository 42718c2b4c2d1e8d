#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "divbound/detail/numeric.hpp"
#include "divbound/generators.hpp"
#include "divbound/prob.hpp"

namespace divbound {

/// Tolerances for certifying an inequality link between two computed
/// quantities: absolute floor for values near zero plus a relative part.
inline constexpr double kChainAtol = 1e-10;
inline constexpr double kChainRtol = 1e-9;

inline bool chain_leq(double lhs, double rhs) noexcept {
  return detail::leq_tol(lhs, rhs, kChainAtol, kChainRtol);
}

/// Weights lambda on points x inside a bracket [eta1, eta2]. The bracket
/// defaults to the extreme points and is what the endpoint bound evaluates.
struct WeightedPoints {
  Distribution lambda;
  std::vector<double> points;
  double eta1 = 0.0;
  double eta2 = 0.0;
};

/// Validates a weighted point set. Points must be finite and positive and
/// must lie inside the bracket; the bracket defaults to [min x, max x].
inline WeightedPoints make_weighted_points(Distribution lambda,
                                           std::vector<double> points,
                                           double eta1 = 0.0,
                                           double eta2 = 0.0) {
  if (lambda.size() != points.size()) {
    throw std::invalid_argument(
        "make_weighted_points: " + std::to_string(lambda.size()) +
        " weights vs " + std::to_string(points.size()) + " points");
  }
  double lo = points[0];
  double hi = points[0];
  for (double x : points) {
    if (!std::isfinite(x) || !(x > 0.0)) {
      throw std::invalid_argument(
          "make_weighted_points: points must be finite and > 0");
    }
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  if (eta1 == 0.0 && eta2 == 0.0) {
    eta1 = lo;
    eta2 = hi;
  }
  if (!(eta1 > 0.0) || !(eta2 >= eta1) || lo < eta1 || hi > eta2) {
    throw std::invalid_argument(
        "make_weighted_points: bracket [eta1, eta2] must be positive and "
        "contain every point");
  }
  return WeightedPoints{std::move(lambda), std::move(points), eta1, eta2};
}

/// Jensen gap sum lambda_i f(x_i) - f(sum lambda_i x_i). Nonnegative for
/// convex f.
inline double jensen_difference(const Generator& g, const WeightedPoints& wp) {
  detail::CompensatedSum fsum;
  detail::CompensatedSum mean;
  for (std::size_t i = 0; i < wp.points.size(); ++i) {
    fsum.add(wp.lambda[i] * g.value(wp.points[i]));
    mean.add(wp.lambda[i] * wp.points[i]);
  }
  return fsum.value() - g.value(mean.value());
}

/// The Jensen gap together with its two upper bounds:
///   gap <= gradient_bound (a covariance-style expression in f')
///       <= endpoint_bound (needs only f' at the bracket ends).
struct JensenReport {
  double gap = 0.0;
  double gradient_bound = 0.0;
  double endpoint_bound = 0.0;
  bool chain_ok = false;  // 0 <= gap <= gradient_bound <= endpoint_bound
};

inline JensenReport jensen_bounds(const Generator& g,
                                  const WeightedPoints& wp) {
  detail::CompensatedSum fsum;    // sum lambda f(x)
  detail::CompensatedSum mean;    // sum lambda x
  detail::CompensatedSum xd1sum;  // sum lambda x f'(x)
  detail::CompensatedSum d1sum;   // sum lambda f'(x)
  for (std::size_t i = 0; i < wp.points.size(); ++i) {
    const double w = wp.lambda[i];
    const double x = wp.points[i];
    const double d1 = g.d1(x);
    fsum.add(w * g.value(x));
    mean.add(w * x);
    xd1sum.add(w * x * d1);
    d1sum.add(w * d1);
  }
  const double m = mean.value();
  JensenReport r;
  r.gap = fsum.value() - g.value(m);
  r.gradient_bound = xd1sum.value() - m * d1sum.value();
  r.endpoint_bound =
      0.25 * (wp.eta2 - wp.eta1) * (g.d1(wp.eta2) - g.d1(wp.eta1));
  r.chain_ok = chain_leq(0.0, r.gap) && chain_leq(r.gap, r.gradient_bound) &&
               chain_leq(r.gradient_bound, r.endpoint_bound);
  return r;
}

/// Closed-form two-point case with weights v, w (unnormalized): the gap, the
/// gradient bound, and the endpoint bound evaluated at eta = (a, b).
struct TwoPointGap {
  double gap = 0.0;
  double gradient_bound = 0.0;
  double endpoint_bound = 0.0;
};

inline TwoPointGap two_point_gap(const Generator& g, double v, double w,
                                 double a, double b) {
  if (!std::isfinite(v) || !(v > 0.0) || !std::isfinite(w) || !(w > 0.0)) {
    throw std::invalid_argument("two_point_gap: weights must be finite and > 0");
  }
  if (!std::isfinite(a) || !(a > 0.0) || !std::isfinite(b) || !(b > 0.0)) {
    throw std::invalid_argument("two_point_gap: points must be finite and > 0");
  }
  const double l1 = v / (v + w);
  const double l2 = w / (v + w);
  TwoPointGap r;
  r.gap = l1 * g.value(a) + l2 * g.value(b) - g.value(l1 * a + l2 * b);
  // Covariance form: l1 l2 (a - b)(f'(a) - f'(b)).
  r.gradient_bound = l1 * l2 * (a - b) * (g.d1(a) - g.d1(b));
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);
  r.endpoint_bound = 0.25 * (hi - lo) * (g.d1(hi) - g.d1(lo));
  return r;
}

/// One two-sided comparison lower <= mid <= upper with per-side verdicts.
struct SandwichCheck {
  double lower = 0.0;
  double mid = 0.0;
  double upper = 0.0;
  bool lower_ok = false;
  bool upper_ok = false;
  bool ok() const noexcept { return lower_ok && upper_ok; }
};

inline SandwichCheck make_sandwich(double lower, double mid, double upper) {
  SandwichCheck s;
  s.lower = lower;
  s.mid = mid;
  s.upper = upper;
  s.lower_ok = chain_leq(lower, mid);
  s.upper_ok = chain_leq(mid, upper);
  return s;
}

/// Transfer of curvature-ratio bounds alpha <= f1''/f2'' <= beta to the
/// Jensen gap and to the residuals of both upper bounds: each quantity for
/// f1 is sandwiched between alpha and beta times the same quantity for f2.
struct GeneratorComparison {
  JensenReport first;
  JensenReport second;
  SandwichCheck gap;
  SandwichCheck gradient_residual;  // bound minus gap
  SandwichCheck endpoint_residual;
  bool all_ok() const noexcept {
    return gap.ok() && gradient_residual.ok() && endpoint_residual.ok();
  }
};

inline GeneratorComparison compare_generators(const Generator& g1,
                                              const Generator& g2,
                                              const WeightedPoints& wp,
                                              double alpha, double beta) {
  if (!(alpha <= beta)) {
    throw std::invalid_argument(
        "compare_generators: requires alpha <= beta, got alpha=" +
        std::to_string(alpha) + " beta=" + std::to_string(beta));
  }
  GeneratorComparison c;
  c.first = jensen_bounds(g1, wp);
  c.second = jensen_bounds(g2, wp);
  c.gap = make_sandwich(alpha * c.second.gap, c.first.gap,
                        beta * c.second.gap);
  const double res1_grad = c.first.gradient_bound - c.first.gap;
  const double res2_grad = c.second.gradient_bound - c.second.gap;
  c.gradient_residual =
      make_sandwich(alpha * res2_grad, res1_grad, beta * res2_grad);
  const double res1_end = c.first.endpoint_bound - c.first.gap;
  const double res2_end = c.second.endpoint_bound - c.second.gap;
  c.endpoint_residual =
      make_sandwich(alpha * res2_end, res1_end, beta * res2_end);
  return c;
}

/// Extrema of the curvature ratio f1''/f2'' over an interval, with the
/// locations where they are attained.
struct RatioExtrema {
  double minimum = 0.0;
  double maximum = 0.0;
  double arg_min = 0.0;
  double arg_max = 0.0;
};

/// Scans f1''/f2'' on a log-spaced grid over [lo, hi] and sharpens every
/// bracketed local extremum by golden-section search (relative tolerance
/// 1e-9). Throws std::domain_error if f2'' is not strictly positive at an
/// evaluation point.
inline RatioExtrema second_ratio_extrema(const Generator& g1,
                                         const Generator& g2, double lo,
                                         double hi, int grid_points = 513) {
  if (grid_points < 16) {
    throw std::invalid_argument("second_ratio_extrema: grid too coarse");
  }
  auto ratio = [&](double x) {
    const double denom = g2.d2(x);
    if (!(denom > 0.0)) {
      throw std::domain_error("second_ratio_extrema: f2'' of '" + g2.name() +
                              "' is not positive at x = " + std::to_string(x));
    }
    return g1.d2(x) / denom;
  };
  const std::vector<double> grid = detail::log_grid(lo, hi, grid_points);
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = ratio(grid[i]);

  RatioExtrema ext;
  std::size_t imin = 0;
  std::size_t imax = 0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (values[i] < values[imin]) imin = i;
    if (values[i] > values[imax]) imax = i;
  }
  ext.minimum = values[imin];
  ext.arg_min = grid[imin];
  ext.maximum = values[imax];
  ext.arg_max = grid[imax];

  constexpr double kRefineTol = 1e-9;
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    // Sharpen every grid point that is a (weak) local extremum over its cell
    // pair; this keeps multimodal ratios safe, not just unimodal ones.
    if (values[i] >= values[i - 1] && values[i] >= values[i + 1]) {
      auto [x, fx] = detail::golden_maximize(ratio, grid[i - 1], grid[i + 1],
                                             kRefineTol);
      if (fx > ext.maximum) {
        ext.maximum = fx;
        ext.arg_max = x;
      }
    }
    if (values[i] <= values[i - 1] && values[i] <= values[i + 1]) {
      auto [x, fx] = detail::golden_minimize(ratio, grid[i - 1], grid[i + 1],
                                             kRefineTol);
      if (fx < ext.minimum) {
        ext.minimum = fx;
        ext.arg_min = x;
      }
    }
  }
  return ext;
}

}  // namespace divbound
