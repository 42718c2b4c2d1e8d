#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "divbound/detail/numeric.hpp"

namespace divbound {

/// A generator is normalized when f(1) = 0 (within rounding). Only
/// normalized generators yield divergences that vanish at P = Q.
inline constexpr double kNormalizedTol = 1e-14;

enum class GeneratorKind {
  kPower,        // fs: one-parameter power family, convex for s <= 1
  kCressieRead,  // phi: Cressie-Read family, convex for every real s
  kAH,           // arithmetic-harmonic gap generator
  kAG,           // arithmetic-geometric gap generator
  kN2N1,         // gap between the two square-root means
  kN2G,          // square-root-mean / geometric gap generator
  kAN2,          // arithmetic / square-root-mean gap generator
  kCustom,       // caller-supplied value/derivative triple
};

/// Construction request for make_generator. The parameter is consulted only
/// by the two parametric families; custom generators must supply all three
/// callables (value, first and second derivative).
struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::kPower;
  double param = 0.0;
  std::string name;  // optional label override for custom generators
  std::function<double(double)> value;
  std::function<double(double)> deriv1;
  std::function<double(double)> deriv2;
};

/// A convex generator f: (0, inf) -> R together with its first two
/// derivatives in closed form. Evaluation outside the domain throws.
class Generator {
 public:
  Generator(std::string name, std::function<double(double)> value,
            std::function<double(double)> d1, std::function<double(double)> d2)
      : name_(std::move(name)),
        value_(std::move(value)),
        d1_(std::move(d1)),
        d2_(std::move(d2)) {
    normalized_ = std::abs(value_(1.0)) <= kNormalizedTol;
  }

  const std::string& name() const noexcept { return name_; }
  bool normalized() const noexcept { return normalized_; }

  double value(double x) const {
    check_domain(x);
    return value_(x);
  }
  double d1(double x) const {
    check_domain(x);
    return d1_(x);
  }
  double d2(double x) const {
    check_domain(x);
    return d2_(x);
  }

 private:
  void check_domain(double x) const {
    if (!std::isfinite(x) || !(x > 0.0)) {
      throw std::domain_error("generator '" + name_ +
                              "' evaluated outside (0, inf)");
    }
  }

  std::string name_;
  std::function<double(double)> value_, d1_, d2_;
  bool normalized_ = false;
};

namespace detail {

/// Compact decimal rendering of a family parameter for generator labels.
inline std::string format_param(double s) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", s);
  return buf;
}

/// x^s - 1 evaluated as expm1(s log x): stable when s log x is small, exact
/// at s = 0.
inline double powm1(double x, double s) { return std::expm1(s * std::log(x)); }

}  // namespace detail

/// Builds a generator from a spec. Throws std::invalid_argument for a power
/// parameter s > 1 (the family loses convexity there) and for custom specs
/// missing any of the three callables.
inline Generator make_generator(const GeneratorSpec& spec) {
  using detail::format_param;
  using detail::powm1;
  const double s = spec.param;
  switch (spec.kind) {
    case GeneratorKind::kPower: {
      if (s > 1.0) {
        throw std::invalid_argument(
            "power generator: s = " + format_param(s) +
            " exceeds 1, where the family is no longer convex");
      }
      // f(x) = (1 - x^s)/s, with the s -> 0 limit -log x.
      auto value = (s == 0.0)
                       ? std::function<double(double)>(
                             [](double x) { return -std::log(x); })
                       : std::function<double(double)>(
                             [s](double x) { return -powm1(x, s) / s; });
      auto d1 = [s](double x) { return -std::pow(x, s - 1.0); };
      auto d2 = [s](double x) { return (1.0 - s) * std::pow(x, s - 2.0); };
      return Generator("fs:" + format_param(s), std::move(value), d1, d2);
    }
    case GeneratorKind::kCressieRead: {
      // f(x) = [x^s - 1 - s(x-1)] / [s(s-1)], limits -log x + x - 1 at s = 0
      // and x log x - x + 1 at s = 1. Second derivative x^(s-2) throughout.
      std::function<double(double)> value, d1;
      if (s == 0.0) {
        value = [](double x) { return x - 1.0 - std::log(x); };
        d1 = [](double x) { return 1.0 - 1.0 / x; };
      } else if (s == 1.0) {
        value = [](double x) { return x * std::log(x) - x + 1.0; };
        d1 = [](double x) { return std::log(x); };
      } else {
        value = [s](double x) {
          return (powm1(x, s) - s * (x - 1.0)) / (s * (s - 1.0));
        };
        d1 = [s](double x) { return powm1(x, s - 1.0) / (s - 1.0); };
      }
      auto d2 = [s](double x) { return std::pow(x, s - 2.0); };
      return Generator("phi:" + format_param(s), std::move(value),
                       std::move(d1), d2);
    }
    case GeneratorKind::kAH:
      // Per-coordinate gap between the arithmetic and harmonic means.
      return Generator(
          "ah",
          [](double x) { return (x - 1.0) * (x - 1.0) / (2.0 * (x + 1.0)); },
          [](double x) {
            const double u = x + 1.0;
            return (x - 1.0) * (x + 3.0) / (2.0 * u * u);
          },
          [](double x) {
            const double u = x + 1.0;
            return 4.0 / (u * u * u);
          });
    case GeneratorKind::kAG:
      // Per-coordinate gap between the arithmetic and geometric means.
      return Generator(
          "ag",
          [](double x) {
            const double d = std::sqrt(x) - 1.0;
            return 0.5 * d * d;
          },
          [](double x) {
            const double r = std::sqrt(x);
            return (r - 1.0) / (2.0 * r);
          },
          [](double x) { return 0.25 / (x * std::sqrt(x)); });
    case GeneratorKind::kN2N1:
      // Gap between the two square-root means N2 and N1.
      return Generator(
          "n2n1",
          [](double x) {
            const double r = std::sqrt(x);
            return ((r + 1.0) * std::sqrt(2.0 * (x + 1.0)) - 1.0 - x -
                    2.0 * r) /
                   4.0;
          },
          [](double x) {
            const double r = std::sqrt(x);
            const double t = std::sqrt(2.0 * (x + 1.0));
            return (2.0 * x + 1.0 + r - (r + 1.0) * t) / (4.0 * r * t);
          },
          [](double x) {
            const double x32 = x * std::sqrt(x);
            const double t3 = std::pow(2.0 * x + 2.0, 1.5);
            return (t3 - 2.0 * (x32 + 1.0)) / (8.0 * x32 * t3);
          });
    case GeneratorKind::kN2G:
      // Gap between the square-root mean N2 and the geometric mean.
      return Generator(
          "n2g",
          [](double x) {
            const double r = std::sqrt(x);
            return ((r + 1.0) * std::sqrt(2.0 * (x + 1.0)) - 4.0 * r) / 4.0;
          },
          [](double x) {
            const double r = std::sqrt(x);
            const double t = std::sqrt(2.0 * (x + 1.0));
            return (2.0 * x + 1.0 + r - 2.0 * t) / (4.0 * r * t);
          },
          [](double x) {
            const double x32 = x * std::sqrt(x);
            const double t3 = std::pow(2.0 * x + 2.0, 1.5);
            return (t3 - x32 - 1.0) / (4.0 * x32 * t3);
          });
    case GeneratorKind::kAN2:
      // Gap between the arithmetic mean and the square-root mean N2.
      return Generator(
          "an2",
          [](double x) {
            const double r = std::sqrt(x);
            return (2.0 * (x + 1.0) - (r + 1.0) * std::sqrt(2.0 * (x + 1.0))) /
                   4.0;
          },
          [](double x) {
            const double r = std::sqrt(x);
            const double rt = std::sqrt(2.0 * x * (x + 1.0));
            return -(2.0 * x + 1.0 + r - 2.0 * rt) / (4.0 * rt);
          },
          [](double x) {
            const double x32 = x * std::sqrt(x);
            return (1.0 + x32) /
                   (8.0 * x32 * (x + 1.0) * std::sqrt(2.0 * x + 2.0));
          });
    case GeneratorKind::kCustom: {
      if (!spec.value || !spec.deriv1 || !spec.deriv2) {
        throw std::invalid_argument(
            "custom generator: value, deriv1 and deriv2 are all required");
      }
      return Generator(spec.name.empty() ? "custom" : spec.name, spec.value,
                       spec.deriv1, spec.deriv2);
    }
  }
  throw std::invalid_argument("make_generator: unknown generator kind");
}

inline Generator make_power_generator(double s) {
  return make_generator({.kind = GeneratorKind::kPower, .param = s});
}

inline Generator make_cressie_read_generator(double s) {
  return make_generator({.kind = GeneratorKind::kCressieRead, .param = s});
}

namespace detail {

inline std::optional<double> parse_param(const std::string& text) {
  if (text.empty()) return std::nullopt;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size() || !std::isfinite(v)) {
    return std::nullopt;
  }
  return v;
}

}  // namespace detail

/// Parses a registry name: "fs:<s>", "phi:<s>", or one of the five mean-gap
/// generators "ah", "ag", "n2n1", "n2g", "an2".
inline Generator make_named_generator(const std::string& name) {
  const auto colon = name.find(':');
  if (colon != std::string::npos) {
    const std::string family = name.substr(0, colon);
    const auto param = detail::parse_param(name.substr(colon + 1));
    if (param) {
      if (family == "fs") return make_power_generator(*param);
      if (family == "phi") return make_cressie_read_generator(*param);
    }
  } else {
    if (name == "ah") return make_generator({.kind = GeneratorKind::kAH});
    if (name == "ag") return make_generator({.kind = GeneratorKind::kAG});
    if (name == "n2n1") return make_generator({.kind = GeneratorKind::kN2N1});
    if (name == "n2g") return make_generator({.kind = GeneratorKind::kN2G});
    if (name == "an2") return make_generator({.kind = GeneratorKind::kAN2});
  }
  throw std::invalid_argument(
      "unknown generator '" + name +
      "'; expected fs:<s>, phi:<s>, ah, ag, n2n1, n2g, or an2");
}

/// The fixed cross-family collection exercised by the verification suites:
/// power family at s in {-1, -1/2, 0, 1/2, 1}, Cressie-Read at
/// s in {-2, -1, 0, 1/2, 1, 2, 3}, plus the five mean-gap generators.
inline std::vector<Generator> standard_registry() {
  std::vector<Generator> out;
  for (double s : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
    out.push_back(make_power_generator(s));
  }
  for (double s : {-2.0, -1.0, 0.0, 0.5, 1.0, 2.0, 3.0}) {
    out.push_back(make_cressie_read_generator(s));
  }
  for (auto kind : {GeneratorKind::kAH, GeneratorKind::kAG,
                    GeneratorKind::kN2N1, GeneratorKind::kN2G,
                    GeneratorKind::kAN2}) {
    out.push_back(make_generator({.kind = kind}));
  }
  return out;
}

/// Worst-case mismatch between closed-form derivatives and central finite
/// differences over a set of evaluation points.
struct DerivativeCheckReport {
  double max_d1_error = 0.0;  // mixed abs/rel residual for f'
  double max_d2_error = 0.0;  // mixed abs/rel residual for f''
  double worst_d1_at = 0.0;
  double worst_d2_at = 0.0;
  bool passed(double tol = 1e-6) const {
    return max_d1_error <= tol && max_d2_error <= tol;
  }
};

/// Cross-checks d1 against a central difference of the value and d2 against
/// a central difference of d1 (step h = x * 1e-6, so ~1e-8 truncation plus
/// rounding noise is expected; residuals are measured relative to
/// max(1, |derivative|)).
inline DerivativeCheckReport derivative_selfcheck(
    const Generator& g, const std::vector<double>& points) {
  DerivativeCheckReport report;
  for (double x : points) {
    const double h = x * 1e-6;
    const double fd1 = (g.value(x + h) - g.value(x - h)) / (2.0 * h);
    const double fd2 = (g.d1(x + h) - g.d1(x - h)) / (2.0 * h);
    const double e1 =
        std::abs(fd1 - g.d1(x)) / std::max(1.0, std::abs(g.d1(x)));
    const double e2 =
        std::abs(fd2 - g.d2(x)) / std::max(1.0, std::abs(g.d2(x)));
    if (e1 > report.max_d1_error) {
      report.max_d1_error = e1;
      report.worst_d1_at = x;
    }
    if (e2 > report.max_d2_error) {
      report.max_d2_error = e2;
      report.worst_d2_at = x;
    }
  }
  return report;
}

/// Verifies f'' >= 0 (within rounding) on the given points.
inline bool convexity_check(const Generator& g, const std::vector<double>& points,
                            double tol = 1e-12) {
  for (double x : points) {
    if (g.d2(x) < -tol) return false;
  }
  return true;
}

}  // namespace divbound
