// frlab: experiments on factorial residues modulo a prime.
//
//   frlab density --p-min 10000 --p-max 20000
//   frlab represent --p 211 --lambda 5 --format csv --out rep.csv
//
// Exit codes: 0 all assertions held, 1 violations recorded, 2 invalid input.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "frlab/experiment.hpp"
#include "frlab/parallel.hpp"

namespace {

struct Options {
  frlab::ExperimentConfig config;
  std::optional<std::uint64_t> p, p_min, p_max, j, k, M, lambda, bound, trials;
  std::string format = "json";
  std::string out = "-";
};

void add_common(CLI::App& cmd, Options& o) {
  auto& c = o.config;
  cmd.add_option("--p", o.p, "Prime modulus");
  cmd.add_option("--p-min", o.p_min, "Smallest modulus of a prime range");
  cmd.add_option("--p-max", o.p_max, "Largest modulus of a prime range");
  cmd.add_option("--L", c.L, "Window offset(s)")->delimiter(',');
  cmd.add_option("--N", c.N, "Window length(s)")->delimiter(',');
  cmd.add_option("--j", o.j, "Degree in x");
  cmd.add_option("--k", o.k, "Degree in y");
  cmd.add_option("--M", o.M, "Override the X_j cutoff");
  cmd.add_option("--epsilon", c.epsilon, "Exponent margin used for the X_j cutoff");
  cmd.add_option("--lambda", o.lambda, "Target residue");
  cmd.add_flag("--all-lambda", c.all_lambda, "Every nonzero target residue");
  cmd.add_option("--bound", o.bound, "Factorial argument bound B");
  cmd.add_option("--trials", o.trials, "Number of random trials");
  cmd.add_option("--seed", c.seed, "RNG seed");
  cmd.add_option("--workers", c.workers, "Worker threads (does not affect output)");
  cmd.add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  cmd.add_option("--out", o.out, "Output path, '-' for stdout");
  cmd.add_flag("--timing", c.record_timing, "Record wall-clock timing in the report");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Factorial residues modulo p: experiment runner"};
  app.require_subcommand(1);

  Options opts;
  opts.config.workers = frlab::default_workers();
  std::string chosen;
  for (auto name : frlab::experiment_names()) {
    auto* cmd = app.add_subcommand(std::string(name), "Run the " + std::string(name) + " experiment");
    add_common(*cmd, opts);
    cmd->callback([&chosen, name] { chosen = std::string(name); });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  auto& c = opts.config;
  c.experiment = *frlab::parse_experiment(chosen);
  c.p = opts.p;
  c.p_min = opts.p_min;
  c.p_max = opts.p_max;
  c.j = opts.j;
  c.k = opts.k;
  c.M = opts.M;
  c.lambda = opts.lambda;
  c.bound = opts.bound;
  c.trials = opts.trials;
  const auto format = opts.format == "csv" ? frlab::ReportFormat::Csv : frlab::ReportFormat::Json;

  try {
    const auto report = frlab::run_experiment(c);
    frlab::emit_report(report, format, opts.out);
    return report.exit_code();
  } catch (const frlab::ConfigError& e) {
    std::cerr << "frlab: " << e.what() << "\n";
    return 2;
  }
}
