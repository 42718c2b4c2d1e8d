#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "divbound/detail/numeric.hpp"
#include "divbound/generators.hpp"
#include "divbound/jensen.hpp"
#include "divbound/means.hpp"
#include "divbound/prob.hpp"

namespace divbound {

/// f-divergence C_f(P, Q) = sum q_i f(p_i/q_i) for a convex generator f.
inline double csiszar_divergence(const Generator& g, const Distribution& p,
                                 const Distribution& q) {
  if (p.size() != q.size()) {
    throw std::invalid_argument(
        "csiszar_divergence: distributions differ in size (" +
        std::to_string(p.size()) + " vs " + std::to_string(q.size()) + ")");
  }
  detail::CompensatedSum acc;
  for (std::size_t i = 0; i < p.size(); ++i) {
    acc.add(q[i] * g.value(p[i] / q[i]));
  }
  return acc.value();
}

/// The divergence value with its three computable bounds:
///   0 <= value <= gradient_bound <= endpoint_bound   and
///   0 <= value <= chord_bound    <= endpoint_bound,
/// where the gradient bound needs f' on the support, while the chord and
/// endpoint bounds need f (resp. f') only at the ratio extremes r, R.
struct DivergenceBounds {
  double value = 0.0;
  double gradient_bound = 0.0;
  double endpoint_bound = 0.0;
  double chord_bound = 0.0;
  double ratio_min = 0.0;
  double ratio_max = 0.0;
  bool gradient_chain_ok = false;  // 0 <= value <= gradient <= endpoint
  bool chord_chain_ok = false;     // 0 <= value <= chord <= endpoint
};

inline DivergenceBounds divergence_bounds(const Generator& g,
                                          const Distribution& p,
                                          const Distribution& q) {
  if (!g.normalized()) {
    throw std::invalid_argument(
        "divergence_bounds: generator '" + g.name() +
        "' is not normalized (f(1) != 0); its divergence does not vanish at "
        "P = Q, so the bound chains do not apply");
  }
  const RatioBounds rb = ratio_bounds(p, q);
  DivergenceBounds out;
  out.ratio_min = rb.lower;
  out.ratio_max = rb.upper;

  detail::CompensatedSum val;
  detail::CompensatedSum grad;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double x = p[i] / q[i];
    val.add(q[i] * g.value(x));
    grad.add((p[i] - q[i]) * g.d1(x));
  }
  out.value = val.value();
  out.gradient_bound = grad.value();

  const double r = rb.lower;
  const double R = rb.upper;
  out.endpoint_bound = 0.25 * (R - r) * (g.d1(R) - g.d1(r));
  // Chord through (r, f(r)) and (R, f(R)) evaluated at 1; degenerate spread
  // (P = Q up to rounding) pins every bound at zero.
  out.chord_bound =
      (R - r > 0.0)
          ? ((R - 1.0) * g.value(r) + (1.0 - r) * g.value(R)) / (R - r)
          : 0.0;

  out.gradient_chain_ok = chain_leq(0.0, out.value) &&
                          chain_leq(out.value, out.gradient_bound) &&
                          chain_leq(out.gradient_bound, out.endpoint_bound);
  out.chord_chain_ok = chain_leq(0.0, out.value) &&
                       chain_leq(out.value, out.chord_bound) &&
                       chain_leq(out.chord_bound, out.endpoint_bound);
  return out;
}

/// Curvature-ratio transfer between two f-divergences on the same pair:
/// alpha <= f1''/f2'' <= beta sandwiches the divergence and all three bound
/// residuals of f1 between alpha/beta times those of f2.
struct DivergenceComparison {
  DivergenceBounds first;
  DivergenceBounds second;
  SandwichCheck value;
  SandwichCheck gradient_residual;  // gradient bound minus value
  SandwichCheck endpoint_residual;  // endpoint bound minus value
  SandwichCheck chord_residual;     // chord bound minus value
  bool all_ok() const noexcept {
    return value.ok() && gradient_residual.ok() && endpoint_residual.ok() &&
           chord_residual.ok();
  }
};

inline DivergenceComparison compare_divergences(const Generator& g1,
                                                const Generator& g2,
                                                const Distribution& p,
                                                const Distribution& q,
                                                double alpha, double beta) {
  if (!(alpha <= beta)) {
    throw std::invalid_argument(
        "compare_divergences: requires alpha <= beta, got alpha=" +
        std::to_string(alpha) + " beta=" + std::to_string(beta));
  }
  DivergenceComparison c;
  c.first = divergence_bounds(g1, p, q);
  c.second = divergence_bounds(g2, p, q);
  c.value = make_sandwich(alpha * c.second.value, c.first.value,
                          beta * c.second.value);
  auto residual_sandwich = [&](double b1, double v1, double b2, double v2) {
    return make_sandwich(alpha * (b2 - v2), b1 - v1, beta * (b2 - v2));
  };
  c.gradient_residual =
      residual_sandwich(c.first.gradient_bound, c.first.value,
                        c.second.gradient_bound, c.second.value);
  c.endpoint_residual =
      residual_sandwich(c.first.endpoint_bound, c.first.value,
                        c.second.endpoint_bound, c.second.value);
  c.chord_residual = residual_sandwich(c.first.chord_bound, c.first.value,
                                       c.second.chord_bound, c.second.value);
  return c;
}

/// The classical named divergences, all in nats.
enum class NamedDivergence {
  kKL,                   // sum p log(p/q)
  kKLReverse,            // sum q log(q/p)
  kJeffreys,             // KL + reverse KL
  kJensenShannon,        // information radius about the midpoint
  kArithmeticGeometric,  // sum A log(A/G) over per-coordinate means
  kTriangular,           // sum (p-q)^2/(p+q)
  kHellinger,            // 1 - sum sqrt(pq)
};

inline double named_divergence(NamedDivergence which, const Distribution& p,
                               const Distribution& q) {
  if (p.size() != q.size()) {
    throw std::invalid_argument(
        "named_divergence: distributions differ in size (" +
        std::to_string(p.size()) + " vs " + std::to_string(q.size()) + ")");
  }
  detail::CompensatedSum acc;
  switch (which) {
    case NamedDivergence::kKL:
      for (std::size_t i = 0; i < p.size(); ++i) {
        acc.add(p[i] * std::log(p[i] / q[i]));
      }
      return acc.value();
    case NamedDivergence::kKLReverse:
      for (std::size_t i = 0; i < p.size(); ++i) {
        acc.add(q[i] * std::log(q[i] / p[i]));
      }
      return acc.value();
    case NamedDivergence::kJeffreys:
      for (std::size_t i = 0; i < p.size(); ++i) {
        acc.add(p[i] * std::log(p[i] / q[i]) + q[i] * std::log(q[i] / p[i]));
      }
      return acc.value();
    case NamedDivergence::kJensenShannon:
      for (std::size_t i = 0; i < p.size(); ++i) {
        const double m = 0.5 * (p[i] + q[i]);
        acc.add(0.5 * (p[i] * std::log(p[i] / m) + q[i] * std::log(q[i] / m)));
      }
      return acc.value();
    case NamedDivergence::kArithmeticGeometric:
      for (std::size_t i = 0; i < p.size(); ++i) {
        const double a = 0.5 * (p[i] + q[i]);
        acc.add(a * std::log(a / std::sqrt(p[i] * q[i])));
      }
      return acc.value();
    case NamedDivergence::kTriangular:
      for (std::size_t i = 0; i < p.size(); ++i) {
        const double d = p[i] - q[i];
        acc.add(d * d / (p[i] + q[i]));
      }
      return acc.value();
    case NamedDivergence::kHellinger:
      for (std::size_t i = 0; i < p.size(); ++i) {
        acc.add(std::sqrt(p[i] * q[i]));
      }
      return 1.0 - acc.value();
  }
  throw std::invalid_argument("named_divergence: unknown divergence");
}

/// One-parameter power-divergence family: (sum p^s q^(1-s) - 1) / (s(s-1)),
/// with KL at s = 1 and reverse KL at s = 0 as continuous limits.
inline double power_divergence(double s, const Distribution& p,
                               const Distribution& q) {
  if (s == 1.0) return named_divergence(NamedDivergence::kKL, p, q);
  if (s == 0.0) return named_divergence(NamedDivergence::kKLReverse, p, q);
  if (p.size() != q.size()) {
    throw std::invalid_argument(
        "power_divergence: distributions differ in size");
  }
  detail::CompensatedSum acc;
  for (std::size_t i = 0; i < p.size(); ++i) {
    acc.add(q[i] * std::exp(s * std::log(p[i] / q[i])));
  }
  return (acc.value() - 1.0) / (s * (s - 1.0));
}

/// Symmetrized power family anchored at the midpoint: at s = 1 it reduces to
/// the information radius (Jensen-Shannon), at s = 0 to the per-coordinate
/// log of arithmetic over geometric mean.
inline double jensen_power_divergence(double s, const Distribution& p,
                                      const Distribution& q) {
  if (s == 1.0) return named_divergence(NamedDivergence::kJensenShannon, p, q);
  if (p.size() != q.size()) {
    throw std::invalid_argument(
        "jensen_power_divergence: distributions differ in size");
  }
  detail::CompensatedSum acc;
  if (s == 0.0) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double a = 0.5 * (p[i] + q[i]);
      acc.add(std::log(a / std::sqrt(p[i] * q[i])));
    }
    return acc.value();
  }
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double a = 0.5 * (p[i] + q[i]);
    acc.add(0.5 * (std::pow(p[i], s) + std::pow(q[i], s)) - std::pow(a, s));
  }
  return acc.value() / (s * (s - 1.0));
}

/// Symmetric difference-power family: at s = 1 it is the Jeffreys divergence
/// in its difference form, at s = 0 the summed squared difference over pq.
inline double jeffreys_power_divergence(double s, const Distribution& p,
                                        const Distribution& q) {
  if (p.size() != q.size()) {
    throw std::invalid_argument(
        "jeffreys_power_divergence: distributions differ in size");
  }
  detail::CompensatedSum acc;
  if (s == 1.0) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      acc.add((p[i] - q[i]) * std::log(p[i] / q[i]));
    }
    return acc.value();
  }
  if (s == 0.0) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double d = p[i] - q[i];
      acc.add(d * d / (p[i] * q[i]));
    }
    return acc.value();
  }
  for (std::size_t i = 0; i < p.size(); ++i) {
    acc.add((p[i] - q[i]) *
            (std::pow(p[i], s - 1.0) - std::pow(q[i], s - 1.0)));
  }
  return acc.value() / (s - 1.0);
}

/// Shannon entropy -sum p log p, in nats.
inline double shannon_entropy(const Distribution& p) {
  detail::CompensatedSum acc;
  for (double w : p) acc.add(w * std::log(w));
  return -acc.value();
}

}  // namespace divbound
