#pragma once

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "divbound/csiszar.hpp"
#include "divbound/generators.hpp"
#include "divbound/means.hpp"
#include "divbound/prob.hpp"
#include "divbound/verify.hpp"

namespace divbound {

/// What a CLI command reports: an echo of the command, its inputs, a
/// name -> value map of results, and boolean verdict flags. Renderable as an
/// aligned table or as one JSON object; numeric output always carries 12
/// significant digits.
struct OutputRecord {
  std::string command;
  std::vector<std::pair<std::string, std::string>> inputs;
  std::vector<std::pair<std::string, double>> results;
  std::vector<std::pair<std::string, bool>> flags;
};

/// A rendered record plus the process exit code: 0 success, 1 input error
/// (raised as exceptions by the handlers), 2 verification failure.
struct CommandOutcome {
  OutputRecord record;
  int exit_code = 0;
};

/// 12 significant digits; short spellings ("8", "2.25") stay short.
inline std::string format_significant(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

namespace detail {

inline void append_json_string(std::string& out, const std::string& s) {
  out += '"';
  for (unsigned char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += static_cast<char>(c);
        }
    }
  }
  out += '"';
}

}  // namespace detail

/// Renders the record as one JSON object. The serialization is fully
/// deterministic (insertion order, fixed number formatting), so parsing the
/// output and re-rendering reproduces identical bytes.
inline std::string render_json(const OutputRecord& rec) {
  std::string out = "{\"command\":";
  detail::append_json_string(out, rec.command);
  out += ",\"inputs\":{";
  for (std::size_t i = 0; i < rec.inputs.size(); ++i) {
    if (i) out += ',';
    detail::append_json_string(out, rec.inputs[i].first);
    out += ':';
    detail::append_json_string(out, rec.inputs[i].second);
  }
  out += "},\"results\":{";
  for (std::size_t i = 0; i < rec.results.size(); ++i) {
    if (i) out += ',';
    detail::append_json_string(out, rec.results[i].first);
    out += ':';
    out += format_significant(rec.results[i].second);
  }
  out += "},\"flags\":{";
  for (std::size_t i = 0; i < rec.flags.size(); ++i) {
    if (i) out += ',';
    detail::append_json_string(out, rec.flags[i].first);
    out += rec.flags[i].second ? ":true" : ":false";
  }
  out += "}}";
  return out;
}

/// Inverse of render_json, for round-trip checks and downstream tooling.
inline OutputRecord parse_record_json(const std::string& text) {
  const auto j = nlohmann::ordered_json::parse(text);
  OutputRecord rec;
  rec.command = j.at("command").get<std::string>();
  for (const auto& [key, value] : j.at("inputs").items()) {
    rec.inputs.emplace_back(key, value.get<std::string>());
  }
  for (const auto& [key, value] : j.at("results").items()) {
    rec.results.emplace_back(key, value.get<double>());
  }
  for (const auto& [key, value] : j.at("flags").items()) {
    rec.flags.emplace_back(key, value.get<bool>());
  }
  return rec;
}

/// Renders the record as an aligned two-column table.
inline std::string render_table(const OutputRecord& rec) {
  std::size_t width = 8;
  for (const auto& [k, v] : rec.inputs) width = std::max(width, k.size());
  for (const auto& [k, v] : rec.results) width = std::max(width, k.size());
  for (const auto& [k, v] : rec.flags) width = std::max(width, k.size());
  auto row = [&](const std::string& key, const std::string& value) {
    std::string line = key;
    line.append(width + 2 - key.size(), ' ');
    line += value;
    line += '\n';
    return line;
  };
  std::string out = row("command", rec.command);
  for (const auto& [k, v] : rec.inputs) out += row(k, v);
  for (const auto& [k, v] : rec.results) out += row(k, format_significant(v));
  for (const auto& [k, v] : rec.flags) out += row(k, v ? "true" : "false");
  out.pop_back();  // callers append the final newline
  return out;
}

inline std::string render_record(const OutputRecord& rec,
                                 const std::string& format) {
  if (format == "json") return render_json(rec);
  if (format == "table") return render_table(rec);
  throw std::invalid_argument("unknown format '" + format +
                              "'; expected table or json");
}

/// Reads a distribution from a file: either a JSON array of numbers or plain
/// text with one weight per line (blank lines ignored).
inline Distribution load_distribution(const std::string& path,
                                      bool normalize) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open distribution file '" + path + "'");
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  const auto start = text.find_first_not_of(" \t\r\n");
  if (start == std::string::npos) {
    throw std::runtime_error("distribution file '" + path + "' is empty");
  }
  std::vector<double> weights;
  if (text[start] == '[') {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw std::runtime_error("distribution file '" + path +
                               "': invalid JSON: " + e.what());
    }
    if (!j.is_array()) {
      throw std::runtime_error("distribution file '" + path +
                               "': expected a JSON array of numbers");
    }
    for (const auto& v : j) {
      if (!v.is_number()) {
        throw std::runtime_error("distribution file '" + path +
                                 "': array entries must be numbers");
      }
      weights.push_back(v.get<double>());
    }
  } else {
    std::istringstream lines(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(lines, line)) {
      ++lineno;
      const auto b = line.find_first_not_of(" \t\r");
      if (b == std::string::npos) continue;
      const auto e = line.find_last_not_of(" \t\r");
      const std::string token = line.substr(b, e - b + 1);
      char* end = nullptr;
      const double v = std::strtod(token.c_str(), &end);
      if (end != token.c_str() + token.size()) {
        throw std::runtime_error("distribution file '" + path + "' line " +
                                 std::to_string(lineno) +
                                 ": not a number: '" + token + "'");
      }
      weights.push_back(v);
    }
  }
  try {
    return Distribution::from_weights(std::move(weights), normalize);
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error("distribution file '" + path + "': " + e.what());
  }
}

inline const char* measure_name_summary() {
  return "kl, klrev, j, i, t, delta, hellinger, phi:<s>, w:<s>, v:<s>, "
         "m-ag, m-ah, m-an2, m-n2g, m-n2n1";
}

/// Evaluates a measure by registry name.
inline double evaluate_measure(const std::string& name, const Distribution& p,
                               const Distribution& q) {
  static const std::map<std::string, NamedDivergence> named = {
      {"kl", NamedDivergence::kKL},
      {"klrev", NamedDivergence::kKLReverse},
      {"j", NamedDivergence::kJeffreys},
      {"i", NamedDivergence::kJensenShannon},
      {"t", NamedDivergence::kArithmeticGeometric},
      {"delta", NamedDivergence::kTriangular},
      {"hellinger", NamedDivergence::kHellinger},
  };
  if (auto it = named.find(name); it != named.end()) {
    return named_divergence(it->second, p, q);
  }
  static const std::map<std::string, MeanDivergenceKind> mean_gaps = {
      {"m-ag", MeanDivergenceKind::kAG},   {"m-ah", MeanDivergenceKind::kAH},
      {"m-an2", MeanDivergenceKind::kAN2}, {"m-n2g", MeanDivergenceKind::kN2G},
      {"m-n2n1", MeanDivergenceKind::kN2N1},
  };
  if (auto it = mean_gaps.find(name); it != mean_gaps.end()) {
    return mean_divergence(it->second, p, q);
  }
  if (const auto colon = name.find(':'); colon != std::string::npos) {
    const std::string family = name.substr(0, colon);
    if (const auto s = detail::parse_param(name.substr(colon + 1))) {
      if (family == "phi") return power_divergence(*s, p, q);
      if (family == "w") return jensen_power_divergence(*s, p, q);
      if (family == "v") return jeffreys_power_divergence(*s, p, q);
    }
  }
  throw std::invalid_argument("unknown measure '" + name + "'; available: " +
                              measure_name_summary());
}

/// `compute`: one value per requested measure.
inline CommandOutcome cmd_compute(const std::string& p_file,
                                  const std::string& q_file,
                                  const std::vector<std::string>& measures,
                                  bool normalize) {
  if (measures.empty()) {
    throw std::invalid_argument("compute: at least one --measure is required");
  }
  const Distribution p = load_distribution(p_file, normalize);
  const Distribution q = load_distribution(q_file, normalize);
  OutputRecord rec;
  rec.command = "compute";
  rec.inputs = {{"p", p_file}, {"q", q_file}};
  for (const auto& name : measures) {
    rec.results.emplace_back(name, evaluate_measure(name, p, q));
  }
  return {std::move(rec), 0};
}

/// `bounds`: the divergence c for a registry generator with its gradient
/// bound e, endpoint bound a, chord bound b, the ratio extremes, and both
/// chain verdicts.
inline CommandOutcome cmd_bounds(const std::string& p_file,
                                 const std::string& q_file,
                                 const std::string& generator_name,
                                 bool normalize) {
  const Generator g = make_named_generator(generator_name);
  const Distribution p = load_distribution(p_file, normalize);
  const Distribution q = load_distribution(q_file, normalize);
  const DivergenceBounds db = divergence_bounds(g, p, q);
  OutputRecord rec;
  rec.command = "bounds";
  rec.inputs = {{"p", p_file}, {"q", q_file}, {"generator", generator_name}};
  rec.results = {{"c", db.value},          {"e", db.gradient_bound},
                 {"a", db.endpoint_bound}, {"b", db.chord_bound},
                 {"r", db.ratio_min},      {"R", db.ratio_max}};
  rec.flags = {{"chain_c_e_a", db.gradient_chain_ok},
               {"chain_c_b_a", db.chord_chain_ok}};
  return {std::move(rec), 0};
}

/// `verify`: runs one suite (or all four) and reports trial count, failure
/// count, observed values, and the minimum slack per link. Exit code 2 when
/// any link failed.
inline CommandOutcome cmd_verify(const std::string& suite, long trials,
                                 std::uint64_t seed, std::size_t n_min,
                                 std::size_t n_max) {
  std::vector<SuiteReport> reports;
  if (suite == "mean-chain") {
    reports.push_back(mean_chain_suite(trials, n_min, n_max, seed));
  } else if (suite == "grand-chain") {
    reports.push_back(grand_chain_suite(trials, n_min, n_max, seed));
  } else if (suite == "ratio-sup") {
    reports.push_back(ratio_supremum_suite());
  } else if (suite == "identities") {
    reports.push_back(identity_suite(trials, seed));
  } else if (suite == "all") {
    reports.push_back(mean_chain_suite(trials, n_min, n_max, seed));
    reports.push_back(grand_chain_suite(trials, n_min, n_max, seed));
    reports.push_back(ratio_supremum_suite());
    reports.push_back(identity_suite(trials, seed));
  } else {
    throw std::invalid_argument(
        "unknown suite '" + suite +
        "'; available: mean-chain, grand-chain, ratio-sup, identities, all");
  }
  OutputRecord rec;
  rec.command = "verify";
  rec.inputs = {{"suite", suite}};
  if (suite != "ratio-sup") {
    // ratio-sup is deterministic and ignores the sampling knobs.
    rec.inputs.emplace_back("trials", std::to_string(trials));
    rec.inputs.emplace_back("seed", std::to_string(seed));
    rec.inputs.emplace_back("n-min", std::to_string(n_min));
    rec.inputs.emplace_back("n-max", std::to_string(n_max));
  }
  const bool multi = reports.size() > 1;
  bool pass = true;
  double total_failures = 0.0;
  for (const auto& r : reports) {
    pass = pass && r.passed();
    total_failures += static_cast<double>(r.failures.size());
    const std::string prefix = multi ? r.suite + ":" : "";
    rec.results.emplace_back(prefix + "trials",
                             static_cast<double>(r.trials));
    rec.results.emplace_back(prefix + "failures",
                             static_cast<double>(r.failures.size()));
    for (const auto& [k, v] : r.observed) {
      rec.results.emplace_back(prefix + k, v);
    }
    for (const auto& [k, v] : r.min_slack) {
      rec.results.emplace_back(prefix + "min_slack[" + k + "]", v);
    }
  }
  if (multi) rec.results.emplace_back("failures", total_failures);
  rec.flags.emplace_back("pass", pass);
  return {std::move(rec), pass ? 0 : 2};
}

/// `means`: the five binary means and the power mean at the six canonical
/// orders, with an overall ordering verdict.
inline CommandOutcome cmd_means(double a, double b) {
  const MeanChainReport chain = mean_chain(a, b);
  const std::vector<std::pair<std::string, double>> powers = {
      {"D(-inf)", power_mean(MeanOrder::neg_inf(), a, b)},
      {"D(-1)", power_mean(-1.0, a, b)},
      {"D(0)", power_mean(0.0, a, b)},
      {"D(0.5)", power_mean(0.5, a, b)},
      {"D(1)", power_mean(1.0, a, b)},
      {"D(inf)", power_mean(MeanOrder::pos_inf(), a, b)},
  };
  bool ordered = chain.ordered;
  for (std::size_t i = 0; i + 1 < powers.size(); ++i) {
    ordered = ordered && detail::leq_tol(powers[i].second,
                                         powers[i + 1].second, 0.0, 1e-12);
  }
  OutputRecord rec;
  rec.command = "means";
  rec.inputs = {{"a", format_significant(a)}, {"b", format_significant(b)}};
  rec.results = {{"H", chain.harmonic},
                 {"G", chain.geometric},
                 {"N1", chain.n1},
                 {"N2", chain.n2},
                 {"A", chain.arithmetic}};
  rec.results.insert(rec.results.end(), powers.begin(), powers.end());
  rec.flags = {{"ordered", ordered}};
  return {std::move(rec), 0};
}

}  // namespace divbound
