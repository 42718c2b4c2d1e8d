#pragma once

#include <cmath>
#include <cstdint>
#include <iterator>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "divbound/csiszar.hpp"
#include "divbound/detail/numeric.hpp"
#include "divbound/generators.hpp"
#include "divbound/jensen.hpp"
#include "divbound/means.hpp"
#include "divbound/prob.hpp"

namespace divbound {

/// One violated link: which inequality, in which trial, with both sides.
struct LinkFailure {
  std::string link;
  std::uint64_t seed = 0;
  double lhs = 0.0;
  double rhs = 0.0;
};

/// Outcome of a verification suite. min_slack records, per link, the
/// tightest margin seen across all trials (for a <= b links the margin is
/// b - a; for equality links it is tolerance minus |a - b|), so near-tight
/// inequalities can be inspected even when everything passes.
struct SuiteReport {
  std::string suite;
  long trials = 0;
  std::vector<LinkFailure> failures;
  std::vector<std::pair<std::string, double>> min_slack;
  std::vector<std::pair<std::string, double>> observed;
  bool passed() const noexcept { return failures.empty(); }
};

namespace detail {

/// Accumulates link outcomes across trials, preserving first-seen link order.
class SuiteRecorder {
 public:
  explicit SuiteRecorder(std::string suite) : suite_(std::move(suite)) {}

  /// Requires lhs <= rhs + atol.
  void check_le(std::uint64_t seed, const std::string& link, double lhs,
                double rhs, double atol) {
    record(seed, link, lhs, rhs, rhs - lhs, -atol);
  }

  /// Requires |lhs - rhs| <= tol.
  void check_close(std::uint64_t seed, const std::string& link, double lhs,
                   double rhs, double tol) {
    record(seed, link, lhs, rhs, tol - std::abs(lhs - rhs), 0.0);
  }

  void observe(const std::string& key, double value) {
    observed_.emplace_back(key, value);
  }

  SuiteReport finish(long trials) {
    SuiteReport report;
    report.suite = suite_;
    report.trials = trials;
    report.failures = std::move(failures_);
    report.min_slack = std::move(slacks_);
    report.observed = std::move(observed_);
    return report;
  }

 private:
  void record(std::uint64_t seed, const std::string& link, double lhs,
              double rhs, double slack, double floor) {
    auto [it, inserted] = index_.try_emplace(link, slacks_.size());
    if (inserted) {
      slacks_.emplace_back(link, slack);
    } else {
      auto& entry = slacks_[it->second];
      if (slack < entry.second) entry.second = slack;
    }
    if (slack < floor) failures_.push_back({link, seed, lhs, rhs});
  }

  std::string suite_;
  std::map<std::string, std::size_t> index_;
  std::vector<std::pair<std::string, double>> slacks_;
  std::vector<LinkFailure> failures_;
  std::vector<std::pair<std::string, double>> observed_;
};

/// Per-trial randomness: support size uniform in [n_min, n_max], plus a
/// deterministic 1-in-20 cadence of stress pairs whose likelihood ratios
/// spread up to three decades.
struct TrialPair {
  std::uint64_t seed;
  Distribution p;
  Distribution q;
};

inline TrialPair draw_trial_pair(std::uint64_t master, long trial,
                                 std::size_t n_min, std::size_t n_max) {
  const std::uint64_t seed =
      derive_seed(master, static_cast<std::uint64_t>(trial));
  SplitMix64 size_rng(mix64(seed));
  const std::size_t n =
      n_min + static_cast<std::size_t>(size_rng.next_below(n_max - n_min + 1));
  const bool stress = trial % 20 == 19;
  auto [p, q] = sample_pair(n, seed, stress);
  return TrialPair{seed, std::move(p), std::move(q)};
}

inline void validate_suite_args(long trials, std::size_t n_min,
                                std::size_t n_max) {
  if (trials < 1) {
    throw std::invalid_argument("verification suite: trials must be >= 1");
  }
  if (n_min < 2 || n_max < n_min) {
    throw std::invalid_argument(
        "verification suite: need 2 <= n_min <= n_max");
  }
}

}  // namespace detail

/// Absolute tolerance for the randomized chain links. The measures involved
/// are bounded by small constants, so an absolute comparison is meaningful.
inline constexpr double kSuiteLinkTol = 1e-12;

/// Randomized check of the five-mean divergence chain
///   (1/8) M_AH <= M_N2N1 <= (1/3) M_N2G <= (1/4) M_AG <= M_AN2
/// and of its rewrite with Delta = 2 M_AH and h = M_AG substituted:
///   (1/16) Delta <= M_N2N1 <= (1/3) M_N2G <= (1/4) h <= M_AN2.
/// With corrupt_control set, the leading constant 1/8 is replaced by 1/2 --
/// a deliberately false claim used to prove the harness detects violations.
inline SuiteReport mean_chain_suite(long trials, std::size_t n_min,
                                    std::size_t n_max, std::uint64_t seed,
                                    bool corrupt_control = false) {
  detail::validate_suite_args(trials, n_min, n_max);
  detail::SuiteRecorder rec("mean-chain");
  const double c_ah = corrupt_control ? 0.5 : 0.125;
  const std::string ah_link =
      corrupt_control ? "corrupted:mAH/2<=mN2N1" : "mAH/8<=mN2N1";
  for (long t = 0; t < trials; ++t) {
    auto trial = detail::draw_trial_pair(seed, t, n_min, n_max);
    const auto& p = trial.p;
    const auto& q = trial.q;
    const double m_ah = mean_divergence(MeanDivergenceKind::kAH, p, q);
    const double m_n2n1 = mean_divergence(MeanDivergenceKind::kN2N1, p, q);
    const double m_n2g = mean_divergence(MeanDivergenceKind::kN2G, p, q);
    const double m_ag = mean_divergence(MeanDivergenceKind::kAG, p, q);
    const double m_an2 = mean_divergence(MeanDivergenceKind::kAN2, p, q);
    const double delta = named_divergence(NamedDivergence::kTriangular, p, q);
    const double h = named_divergence(NamedDivergence::kHellinger, p, q);

    rec.check_le(trial.seed, ah_link, c_ah * m_ah, m_n2n1, kSuiteLinkTol);
    rec.check_le(trial.seed, "mN2N1<=mN2G/3", m_n2n1, m_n2g / 3.0,
                 kSuiteLinkTol);
    rec.check_le(trial.seed, "mN2G/3<=mAG/4", m_n2g / 3.0, 0.25 * m_ag,
                 kSuiteLinkTol);
    rec.check_le(trial.seed, "mAG/4<=mAN2", 0.25 * m_ag, m_an2, kSuiteLinkTol);
    // Rewritten form on the classical measures.
    rec.check_le(trial.seed, "delta/16<=mN2N1", delta / 16.0, m_n2n1,
                 kSuiteLinkTol);
    rec.check_le(trial.seed, "mN2G/3<=h/4", m_n2g / 3.0, 0.25 * h,
                 kSuiteLinkTol);
    rec.check_le(trial.seed, "h/4<=mAN2", 0.25 * h, m_an2, kSuiteLinkTol);
  }
  return rec.finish(trials);
}

/// Randomized check of the grand chain linking the classical divergences to
/// the mean gaps,
///   Delta/16 <= I/4 <= M_N2N1 <= M_N2G/3 <= h/4 <= M_AN2
///            <= J/32 <= T/4 <= J/16,
/// and of the classical six-term chain Delta/4 <= I <= h <= 4 M_AN2 <= J/8
/// <= T. The link I/4 <= M_N2N1 is stated in the source material without
/// proof, so it carries the distinct label "claim:" in reports.
/// With corrupt_control set, Delta/4 <= I becomes Delta/2 <= I, which is
/// false for every distinct pair (I stays strictly below Delta/2).
inline SuiteReport grand_chain_suite(long trials, std::size_t n_min,
                                     std::size_t n_max, std::uint64_t seed,
                                     bool corrupt_control = false) {
  detail::validate_suite_args(trials, n_min, n_max);
  detail::SuiteRecorder rec("grand-chain");
  const double c_delta = corrupt_control ? 0.5 : 0.25;
  const std::string delta_link =
      corrupt_control ? "corrupted:delta/2<=I" : "delta/4<=I";
  for (long t = 0; t < trials; ++t) {
    auto trial = detail::draw_trial_pair(seed, t, n_min, n_max);
    const auto& p = trial.p;
    const auto& q = trial.q;
    const double m_n2n1 = mean_divergence(MeanDivergenceKind::kN2N1, p, q);
    const double m_n2g = mean_divergence(MeanDivergenceKind::kN2G, p, q);
    const double m_an2 = mean_divergence(MeanDivergenceKind::kAN2, p, q);
    const double delta = named_divergence(NamedDivergence::kTriangular, p, q);
    const double h = named_divergence(NamedDivergence::kHellinger, p, q);
    const double i_div =
        named_divergence(NamedDivergence::kJensenShannon, p, q);
    const double j_div = named_divergence(NamedDivergence::kJeffreys, p, q);
    const double t_div =
        named_divergence(NamedDivergence::kArithmeticGeometric, p, q);

    rec.check_le(trial.seed, "delta/16<=I/4", delta / 16.0, 0.25 * i_div,
                 kSuiteLinkTol);
    rec.check_le(trial.seed, "claim:I/4<=mN2N1", 0.25 * i_div, m_n2n1,
                 kSuiteLinkTol);
    rec.check_le(trial.seed, "mN2N1<=mN2G/3", m_n2n1, m_n2g / 3.0,
                 kSuiteLinkTol);
    rec.check_le(trial.seed, "mN2G/3<=h/4", m_n2g / 3.0, 0.25 * h,
                 kSuiteLinkTol);
    rec.check_le(trial.seed, "h/4<=mAN2", 0.25 * h, m_an2, kSuiteLinkTol);
    rec.check_le(trial.seed, "mAN2<=J/32", m_an2, j_div / 32.0, kSuiteLinkTol);
    rec.check_le(trial.seed, "J/32<=T/4", j_div / 32.0, 0.25 * t_div,
                 kSuiteLinkTol);
    rec.check_le(trial.seed, "T/4<=J/16", 0.25 * t_div, j_div / 16.0,
                 kSuiteLinkTol);
    // Classical six-term chain.
    rec.check_le(trial.seed, delta_link, c_delta * delta, i_div,
                 kSuiteLinkTol);
    rec.check_le(trial.seed, "I<=h", i_div, h, kSuiteLinkTol);
    rec.check_le(trial.seed, "h<=4*mAN2", h, 4.0 * m_an2, kSuiteLinkTol);
    rec.check_le(trial.seed, "4*mAN2<=J/8", 4.0 * m_an2, j_div / 8.0,
                 kSuiteLinkTol);
    rec.check_le(trial.seed, "J/8<=T", j_div / 8.0, t_div, kSuiteLinkTol);
  }
  return rec.finish(trials);
}

/// Checks the curvature-ratio suprema of the four adjacent mean-gap
/// generator pairs over [1e-3, 1e3]: the expected values are 8, 1/3, 3/4
/// and 4, each attained at x = 1, with the ratio rising on (0, 1) and
/// falling on (1, inf). Supremum tolerance 1e-6, location tolerance 1e-4.
/// With corrupt_control set, the first expected supremum is replaced by 7.
inline SuiteReport ratio_supremum_suite(bool corrupt_control = false) {
  struct PairCase {
    const char* first;
    const char* second;
    double expected_sup;
  };
  const PairCase cases[] = {
      {"ah", "n2n1", corrupt_control ? 7.0 : 8.0},
      {"n2n1", "n2g", 1.0 / 3.0},
      {"n2g", "ag", 0.75},
      {"ag", "an2", 4.0},
  };
  constexpr double kLo = 1e-3;
  constexpr double kHi = 1e3;
  constexpr int kGridPoints = 513;  // odd => x = 1 sits exactly on the grid
  detail::SuiteRecorder rec("ratio-sup");
  std::uint64_t case_index = 0;
  for (const auto& pc : cases) {
    const Generator g1 = make_named_generator(pc.first);
    const Generator g2 = make_named_generator(pc.second);
    const std::string tag = std::string(pc.first) + "/" + pc.second;
    const std::string sup_link =
        (corrupt_control && case_index == 0 ? "corrupted:sup[" : "sup[") +
        tag + "]";
    const RatioExtrema ext =
        second_ratio_extrema(g1, g2, kLo, kHi, kGridPoints);
    rec.check_close(case_index, sup_link, ext.maximum, pc.expected_sup, 1e-6);
    rec.check_close(case_index, "arg[" + tag + "]", ext.arg_max, 1.0, 1e-4);
    rec.observe("sup[" + tag + "]", ext.maximum);
    rec.observe("arg[" + tag + "]", ext.arg_max);

    // Shape check: the ratio must rise toward x = 1 and fall beyond it.
    // Grid steps sample the sign of the ratio's derivative; tiny rounding
    // wiggle is absorbed by an absolute tolerance.
    const auto grid = detail::log_grid(kLo, kHi, kGridPoints);
    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      values[i] = g1.d2(grid[i]) / g2.d2(grid[i]);
    }
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
      if (grid[i + 1] <= 1.0) {
        rec.check_le(case_index, "rising[" + tag + "]", values[i],
                     values[i + 1], 1e-9);
      }
      if (grid[i] >= 1.0) {
        rec.check_le(case_index, "falling[" + tag + "]", values[i + 1],
                     values[i], 1e-9);
      }
    }
    ++case_index;
  }
  return rec.finish(static_cast<long>(std::size(cases)));
}

/// Randomized check of the exact identities tying the mean gaps to the
/// classical measures:
///   M_AG = 2 M_N1G = 2 M_AN1 = h,    M_AH = Delta/2     (1e-14),
///   J = 4 (I + T)                                        (1e-12),
///   N1(a, b) = (A(a, b) + G(a, b))/2                     per coordinate,
/// plus the aggregated mean chain sum H <= sum G <= sum N1 <= sum N2 <= 1
/// and the exponential bound A/G <= exp((eta2-eta1)^2/(4 eta1 eta2)) on a
/// random weighted point set. With corrupt_control set, M_AG = 2 M_N1G is
/// replaced by M_AG = 3 M_N1G.
inline SuiteReport identity_suite(long trials, std::uint64_t seed,
                                  bool corrupt_control = false) {
  detail::validate_suite_args(trials, 2, 20);
  detail::SuiteRecorder rec("identities");
  const double c_n1g = corrupt_control ? 3.0 : 2.0;
  const std::string n1g_link =
      corrupt_control ? "corrupted:mAG=3*mN1G" : "mAG=2*mN1G";
  constexpr double kExactTol = 1e-14;
  constexpr double kLogTol = 1e-12;
  for (long t = 0; t < trials; ++t) {
    auto trial = detail::draw_trial_pair(seed, t, 2, 20);
    const auto& p = trial.p;
    const auto& q = trial.q;
    const double m_ag = mean_divergence(MeanDivergenceKind::kAG, p, q);
    const double m_ah = mean_divergence(MeanDivergenceKind::kAH, p, q);
    const double m_n1g = mean_divergence(MeanDivergenceKind::kN1G, p, q);
    const double m_an1 = mean_divergence(MeanDivergenceKind::kAN1, p, q);
    const double delta = named_divergence(NamedDivergence::kTriangular, p, q);
    const double h = named_divergence(NamedDivergence::kHellinger, p, q);
    const double i_div =
        named_divergence(NamedDivergence::kJensenShannon, p, q);
    const double j_div = named_divergence(NamedDivergence::kJeffreys, p, q);
    const double t_div =
        named_divergence(NamedDivergence::kArithmeticGeometric, p, q);

    rec.check_close(trial.seed, n1g_link, m_ag, c_n1g * m_n1g, kExactTol);
    rec.check_close(trial.seed, "mAG=2*mAN1", m_ag, 2.0 * m_an1, kExactTol);
    rec.check_close(trial.seed, "mAG=h", m_ag, h, kExactTol);
    rec.check_close(trial.seed, "mAH=delta/2", m_ah, 0.5 * delta, kExactTol);
    rec.check_close(trial.seed, "J=4*(I+T)", j_div, 4.0 * (i_div + t_div),
                    kLogTol);

    // Per-coordinate N1 = (A + G)/2 on the sampled support.
    double worst_n1 = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double n1 = binary_mean(MeanKind::kN1, p[i], q[i]);
      const double ag2 = 0.5 * (binary_mean(MeanKind::kArithmetic, p[i], q[i]) +
                                binary_mean(MeanKind::kGeometric, p[i], q[i]));
      worst_n1 = std::max(worst_n1, std::abs(n1 - ag2));
    }
    rec.check_close(trial.seed, "N1=(A+G)/2", worst_n1, 0.0, kExactTol);

    // Aggregated five-mean chain: sums of per-coordinate means are ordered
    // and capped by sum A = 1.
    detail::CompensatedSum sh, sg, sn1, sn2;
    for (std::size_t i = 0; i < p.size(); ++i) {
      sh.add(binary_mean(MeanKind::kHarmonic, p[i], q[i]));
      sg.add(binary_mean(MeanKind::kGeometric, p[i], q[i]));
      sn1.add(binary_mean(MeanKind::kN1, p[i], q[i]));
      sn2.add(binary_mean(MeanKind::kN2, p[i], q[i]));
    }
    rec.check_le(trial.seed, "sumH<=sumG", sh.value(), sg.value(),
                 kSuiteLinkTol);
    rec.check_le(trial.seed, "sumG<=sumN1", sg.value(), sn1.value(),
                 kSuiteLinkTol);
    rec.check_le(trial.seed, "sumN1<=sumN2", sn1.value(), sn2.value(),
                 kSuiteLinkTol);
    rec.check_le(trial.seed, "sumN2<=1", sn2.value(), 1.0, kSuiteLinkTol);

    // Exponential arithmetic/geometric bound on a fresh weighted point set:
    // 1 <= A/G <= exp((eta2 - eta1)^2 / (4 eta1 eta2)).
    detail::SplitMix64 rng(detail::mix64(trial.seed) ^ 0x5bf03635d1c2b9ffULL);
    const std::size_t m = 2 + rng.next_below(19);
    Distribution lambda = sample_distribution(m, rng);
    std::vector<double> xs(m);
    for (double& x : xs) {
      x = std::exp(rng.next_in(std::log(0.05), std::log(20.0)));
    }
    detail::CompensatedSum amean, logg;
    double eta1 = xs[0], eta2 = xs[0];
    for (std::size_t i = 0; i < m; ++i) {
      amean.add(lambda[i] * xs[i]);
      logg.add(lambda[i] * std::log(xs[i]));
      eta1 = std::min(eta1, xs[i]);
      eta2 = std::max(eta2, xs[i]);
    }
    const double ratio = amean.value() / std::exp(logg.value());
    const double cap =
        std::exp((eta2 - eta1) * (eta2 - eta1) / (4.0 * eta1 * eta2));
    rec.check_le(trial.seed, "1<=A/G", 1.0, ratio, kChainAtol);
    rec.check_le(trial.seed, "A/G<=exp(spread)", ratio, cap,
                 kChainAtol + kChainRtol * cap);
  }
  return rec.finish(trials);
}

}  // namespace divbound
