// Command-line front end: compute divergence measures between distributions
// read from files, evaluate divergence bounds, check binary means, and run
// the randomized verification suites.
//
// Exit codes: 0 success, 1 input/argument error, 2 verification failure.

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "divbound/divbound.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Divergence measures, bound functionals, and inequality-chain "
               "verification for finite probability distributions"};
  app.require_subcommand(1);

  std::string format = "table";
  std::string p_file, q_file, generator_name, suite_name;
  std::vector<std::string> measures;
  bool normalize = false;
  long trials = 10000;
  std::uint64_t seed = 42;
  std::size_t n_min = 2;
  std::size_t n_max = 20;
  double mean_a = 0.0;
  double mean_b = 0.0;

  auto add_format = [&](CLI::App* cmd) {
    cmd->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"table", "json"}))
        ->capture_default_str();
  };

  CLI::App* compute = app.add_subcommand(
      "compute", "Evaluate divergence measures between two distributions");
  compute->add_option("--p", p_file, "File with distribution P")->required();
  compute->add_option("--q", q_file, "File with distribution Q")->required();
  compute
      ->add_option("--measure", measures,
                   std::string("Measure names (comma separated): ") +
                       divbound::measure_name_summary())
      ->required()
      ->delimiter(',');
  compute->add_flag("--normalize", normalize,
                    "Rescale input weights to sum to 1");
  add_format(compute);

  CLI::App* bounds = app.add_subcommand(
      "bounds", "Divergence value with gradient/chord/endpoint bounds");
  bounds->add_option("--p", p_file, "File with distribution P")->required();
  bounds->add_option("--q", q_file, "File with distribution Q")->required();
  bounds
      ->add_option("--generator", generator_name,
                   "Generator name: fs:<s>, phi:<s>, ah, ag, n2n1, n2g, an2")
      ->required();
  bounds->add_flag("--normalize", normalize,
                   "Rescale input weights to sum to 1");
  add_format(bounds);

  CLI::App* verify =
      app.add_subcommand("verify", "Run a randomized verification suite");
  verify
      ->add_option("--suite", suite_name,
                   "Suite: mean-chain, grand-chain, ratio-sup, identities, all")
      ->required();
  verify->add_option("--trials", trials, "Number of randomized trials")
      ->capture_default_str();
  verify->add_option("--seed", seed, "Master seed")->capture_default_str();
  verify->add_option("--n-min", n_min, "Smallest support size")
      ->capture_default_str();
  verify->add_option("--n-max", n_max, "Largest support size")
      ->capture_default_str();
  add_format(verify);

  CLI::App* means = app.add_subcommand(
      "means", "Binary means and power means of two positive numbers");
  means->add_option("a", mean_a, "First value")->required();
  means->add_option("b", mean_b, "Second value")->required();
  add_format(means);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    divbound::CommandOutcome outcome;
    if (compute->parsed()) {
      outcome = divbound::cmd_compute(p_file, q_file, measures, normalize);
    } else if (bounds->parsed()) {
      outcome = divbound::cmd_bounds(p_file, q_file, generator_name, normalize);
    } else if (verify->parsed()) {
      outcome = divbound::cmd_verify(suite_name, trials, seed, n_min, n_max);
    } else {
      outcome = divbound::cmd_means(mean_a, mean_b);
    }
    std::cout << divbound::render_record(outcome.record, format) << "\n";
    return outcome.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
