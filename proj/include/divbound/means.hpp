#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "divbound/detail/numeric.hpp"
#include "divbound/prob.hpp"

namespace divbound {

/// Order of a binary power mean. Infinite orders are distinct named states,
/// never sentinel doubles, so t = +/-inf cannot be fed to pow() by accident.
class MeanOrder {
 public:
  MeanOrder(double t) : t_(t) {  // NOLINT: implicit by design for D(0.5) etc.
    if (!std::isfinite(t)) {
      throw std::invalid_argument(
          "MeanOrder: non-finite order; use MeanOrder::neg_inf()/pos_inf()");
    }
  }

  static MeanOrder neg_inf() noexcept { return MeanOrder(Tag::kNegInf); }
  static MeanOrder pos_inf() noexcept { return MeanOrder(Tag::kPosInf); }

  bool is_neg_inf() const noexcept { return tag_ == Tag::kNegInf; }
  bool is_pos_inf() const noexcept { return tag_ == Tag::kPosInf; }
  bool is_finite() const noexcept { return tag_ == Tag::kFinite; }

  /// Finite order value; only meaningful when is_finite().
  double value() const noexcept { return t_; }

 private:
  enum class Tag { kNegInf, kFinite, kPosInf };
  explicit MeanOrder(Tag tag) noexcept : tag_(tag) {}

  Tag tag_ = Tag::kFinite;
  double t_ = 0.0;
};

/// Power mean D_t(a, b) of two positive numbers: min at t = -inf, geometric
/// mean at t = 0, max at t = +inf, and ((a^t + b^t)/2)^(1/t) otherwise.
/// Monotone nondecreasing in t.
inline double power_mean(MeanOrder order, double a, double b) {
  if (!std::isfinite(a) || !(a > 0.0) || !std::isfinite(b) || !(b > 0.0)) {
    throw std::invalid_argument("power_mean: arguments must be finite and > 0");
  }
  if (order.is_neg_inf()) return std::min(a, b);
  if (order.is_pos_inf()) return std::max(a, b);
  const double t = order.value();
  if (t == 0.0) return std::sqrt(a * b);
  // Factor out the dominant argument: base * ((1 + (lo/hi)^|t|)/2)^(1/t)
  // with base = hi for t > 0 and base = lo for t < 0. The inner ratio is in
  // (0, 1], so a^t/b^t never overflows and a == b returns exactly a.
  const double hi = std::max(a, b);
  const double lo = std::min(a, b);
  const double ratio = lo / hi;
  const double base = t > 0.0 ? hi : lo;
  return base * std::pow(0.5 * (1.0 + std::pow(ratio, std::abs(t))),
                         1.0 / t);
}

/// The five binary means of the mean-divergence family, in chain order.
enum class MeanKind {
  kHarmonic,    // H  = 2ab/(a+b)
  kGeometric,   // G  = sqrt(ab)
  kN1,          // N1 = ((sqrt a + sqrt b)/2)^2
  kN2,          // N2 = ((sqrt a + sqrt b)/2) * sqrt((a+b)/2)
  kArithmetic,  // A  = (a+b)/2
};

inline double binary_mean(MeanKind kind, double a, double b) {
  if (!std::isfinite(a) || !(a > 0.0) || !std::isfinite(b) || !(b > 0.0)) {
    throw std::invalid_argument("binary_mean: arguments must be finite and > 0");
  }
  switch (kind) {
    case MeanKind::kHarmonic:
      return 2.0 * a * b / (a + b);
    case MeanKind::kGeometric:
      return std::sqrt(a * b);
    case MeanKind::kN1: {
      const double m = 0.5 * (std::sqrt(a) + std::sqrt(b));
      return m * m;
    }
    case MeanKind::kN2:
      return 0.5 * (std::sqrt(a) + std::sqrt(b)) * std::sqrt(0.5 * (a + b));
    case MeanKind::kArithmetic:
      return 0.5 * (a + b);
  }
  throw std::invalid_argument("binary_mean: unknown mean kind");
}

/// One evaluation of the five-mean chain H <= G <= N1 <= N2 <= A.
struct MeanChainReport {
  double harmonic = 0.0;
  double geometric = 0.0;
  double n1 = 0.0;
  double n2 = 0.0;
  double arithmetic = 0.0;
  bool ordered = false;  // every adjacent link holds within tolerance
};

/// Evaluates all five means and checks adjacent links at relative tolerance
/// rtol (the chain is scale-invariant, so a relative check is the right one).
inline MeanChainReport mean_chain(double a, double b, double rtol = 1e-12) {
  MeanChainReport r;
  r.harmonic = binary_mean(MeanKind::kHarmonic, a, b);
  r.geometric = binary_mean(MeanKind::kGeometric, a, b);
  r.n1 = binary_mean(MeanKind::kN1, a, b);
  r.n2 = binary_mean(MeanKind::kN2, a, b);
  r.arithmetic = binary_mean(MeanKind::kArithmetic, a, b);
  auto le = [rtol](double x, double y) {
    return detail::leq_tol(x, y, 0.0, rtol);
  };
  r.ordered = le(r.harmonic, r.geometric) && le(r.geometric, r.n1) &&
              le(r.n1, r.n2) && le(r.n2, r.arithmetic);
  return r;
}

/// Divergence measures built from gaps between two of the five means,
/// accumulated per coordinate. The A-anchored ones use the identity
/// sum A(p_i, q_i) = 1, e.g. M_AG = 1 - sum G(p_i, q_i).
enum class MeanDivergenceKind {
  kAG,    // 1 - sum G
  kAH,    // 1 - sum H
  kAN2,   // 1 - sum N2
  kN2G,   // sum (N2 - G)
  kN2N1,  // sum (N2 - N1)
  kN1G,   // sum (N1 - G)
  kAN1,   // 1 - sum N1
};

inline double mean_divergence(MeanDivergenceKind kind, const Distribution& p,
                              const Distribution& q) {
  if (p.size() != q.size()) {
    throw std::invalid_argument(
        "mean_divergence: distributions differ in size (" +
        std::to_string(p.size()) + " vs " + std::to_string(q.size()) + ")");
  }
  detail::CompensatedSum acc;
  switch (kind) {
    case MeanDivergenceKind::kAG:
      for (std::size_t i = 0; i < p.size(); ++i) {
        acc.add(binary_mean(MeanKind::kGeometric, p[i], q[i]));
      }
      return 1.0 - acc.value();
    case MeanDivergenceKind::kAH:
      for (std::size_t i = 0; i < p.size(); ++i) {
        acc.add(binary_mean(MeanKind::kHarmonic, p[i], q[i]));
      }
      return 1.0 - acc.value();
    case MeanDivergenceKind::kAN2:
      for (std::size_t i = 0; i < p.size(); ++i) {
        acc.add(binary_mean(MeanKind::kN2, p[i], q[i]));
      }
      return 1.0 - acc.value();
    case MeanDivergenceKind::kAN1:
      for (std::size_t i = 0; i < p.size(); ++i) {
        acc.add(binary_mean(MeanKind::kN1, p[i], q[i]));
      }
      return 1.0 - acc.value();
    case MeanDivergenceKind::kN2G:
      for (std::size_t i = 0; i < p.size(); ++i) {
        acc.add(binary_mean(MeanKind::kN2, p[i], q[i]) -
                binary_mean(MeanKind::kGeometric, p[i], q[i]));
      }
      return acc.value();
    case MeanDivergenceKind::kN2N1:
      for (std::size_t i = 0; i < p.size(); ++i) {
        acc.add(binary_mean(MeanKind::kN2, p[i], q[i]) -
                binary_mean(MeanKind::kN1, p[i], q[i]));
      }
      return acc.value();
    case MeanDivergenceKind::kN1G:
      for (std::size_t i = 0; i < p.size(); ++i) {
        acc.add(binary_mean(MeanKind::kN1, p[i], q[i]) -
                binary_mean(MeanKind::kGeometric, p[i], q[i]));
      }
      return acc.value();
  }
  throw std::invalid_argument("mean_divergence: unknown divergence kind");
}

}  // namespace divbound
