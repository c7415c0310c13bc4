#pragma once

// The `value`, `verify` and `simulate` commands. Each returns a process exit
// code: 0 ok, 1 failed check or comparison, 2 usage or schema error,
// 3 infeasible scenario.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "lifegoal/io.hpp"

namespace lifegoal {

enum ExitCode : int { exit_ok = 0, exit_check_failed = 1, exit_usage = 2, exit_infeasible = 3 };

struct ValueArgs {
  std::string config;
  std::string grid;
  std::string out = "-";  // "-": stdout, no sidecar
};

struct VerifyArgs {
  std::string config;
  std::string report = "-";
};

struct SimulateArgs {
  std::string config;
  std::string wealth = "0";
  std::uint64_t paths = 10000;
  std::uint64_t seed = 0;
  double dt = 1e-3;
  std::string strategy = "paper_optimal";
  unsigned threads = 0;
  std::string out = "-";
  std::uint64_t trace = 0;
  std::string trace_out;
};

int cmd_value(const ValueArgs& args, std::ostream& err);
int cmd_verify(const VerifyArgs& args, std::ostream& err);
int cmd_simulate(const SimulateArgs& args, std::ostream& err);

struct Check {
  std::string name;
  double tolerance = 0.0;
  double observed = 0.0;
  std::string status;  // "pass", "fail" or "not-applicable"
  std::string detail;
};

std::vector<Check> verify_checks(const Scenario& scn);
nlohmann::json to_json(const Check& c);

}  // namespace lifegoal
