#include <iostream>

#include <CLI11.hpp>

#include "lifegoal/commands.hpp"

int main(int argc, char** argv) {
  using namespace lifegoal;
  CLI::App app{"Goal-reaching probabilities for deferred term life and pure endowment purchases"};
  app.require_subcommand(1);

  ValueArgs value;
  auto* v = app.add_subcommand("value", "Evaluate the value curve and strategy on a wealth grid");
  v->add_option("config", value.config, "Scenario JSON file")->required();
  v->add_option("--grid", value.grid, "Wealth grid a:b:steps; a and b may name levels such as ideal")
      ->required();
  v->add_option("--out,-o", value.out, "CSV output path ('-' for stdout)");

  VerifyArgs verify;
  auto* c = app.add_subcommand("verify", "Run residual, continuity and root checks");
  c->add_option("config", verify.config, "Scenario JSON file")->required();
  c->add_option("--report,-o", verify.report, "JSON report path ('-' for stdout)");

  SimulateArgs sim;
  auto* s = app.add_subcommand("simulate", "Monte Carlo estimate compared with the closed form");
  s->add_option("config", sim.config, "Scenario JSON file")->required();
  s->add_option("--wealth,-w", sim.wealth, "Initial wealth, a number or a level name");
  s->add_option("--paths", sim.paths, "Number of paths")->check(CLI::PositiveNumber);
  s->add_option("--seed", sim.seed, "64-bit seed");
  s->add_option("--dt", sim.dt, "Time step for the stochastic models");
  s->add_option("--strategy", sim.strategy, "paper_optimal | buy_all_at_quasi_ideal | wait_to_ideal | buy_gap_now");
  s->add_option("--threads", sim.threads, "Worker threads (0: all cores)");
  s->add_option("--out,-o", sim.out, "JSON output path ('-' for stdout)");
  s->add_option("--trace", sim.trace, "Write events of the first N paths");
  s->add_option("--trace-out", sim.trace_out, "CSV path for --trace");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? exit_ok : exit_usage;
  }

  if (*v) return cmd_value(value, std::cerr);
  if (*c) return cmd_verify(verify, std::cerr);
  return cmd_simulate(sim, std::cerr);
}
