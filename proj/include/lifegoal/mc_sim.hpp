#pragma once

// Monte Carlo estimates of goal-reaching probabilities under explicit
// purchase strategies. Deterministic-wealth models use closed-form event
// times and one exponential draw per path; the stochastic models use
// Euler-Maruyama with the death time drawn exactly.
//
// Every path draws from its own stream keyed by (seed, path index), and
// results are aggregated as integer counts, so estimates do not depend on the
// number of worker threads.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lifegoal/det_common.hpp"
#include "lifegoal/stoch_control.hpp"

namespace lifegoal {

enum class Strategy { paper_optimal, buy_all_at_quasi_ideal, wait_to_ideal, buy_gap_now };

const char* to_string(Strategy s);
Strategy parse_strategy(const std::string& name);

struct SimConfig {
  std::uint64_t n_paths = 10000;
  std::uint64_t seed = 0;
  double dt = 1e-3;  // stochastic models only
  Strategy strategy = Strategy::paper_optimal;
  double w = 0.0;
  unsigned threads = 0;  // 0: hardware concurrency

  void validate(bool stochastic) const;
};

struct MCEstimate {
  double p_hat = 0.0;
  double stderr_ = 0.0;
  std::uint64_t n_paths = 0;
  std::uint64_t seed = 0;
  std::uint64_t successes = 0;
  // Success and failure counts keyed by outcome ("covered_death", "ruin", ...).
  std::map<std::string, std::uint64_t> outcomes;
};

struct TraceEvent {
  std::uint64_t path_id = 0;
  double time = 0.0;
  std::string kind;
  double wealth = 0.0;
};

// Counter-based stream: splitmix64 over a per-path key.
class PathRng {
 public:
  using result_type = std::uint64_t;
  PathRng(std::uint64_t seed, std::uint64_t path);
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()();
  double uniform();  // [0, 1)

 private:
  std::uint64_t state_;
};

MCEstimate simulate_det_single(const DetScenario& scn, const SimConfig& cfg);
MCEstimate simulate_det_continuous(const DetScenario& scn, const SimConfig& cfg);
MCEstimate simulate_stoch(const StochSolution& sol, const SimConfig& cfg);

// Events of the first `paths` paths, on the same streams as the estimators.
std::vector<TraceEvent> trace_det(const DetScenario& scn, const SimConfig& cfg, std::uint64_t paths);
std::vector<TraceEvent> trace_stoch(const StochSolution& sol, const SimConfig& cfg,
                                    std::uint64_t paths);

struct ComparisonRecord {
  std::string mode;
  std::string strategy;
  std::string branch;
  double w = 0.0;
  MCEstimate mc;
  double closed_form = 0.0;
  double z_score = 0.0;  // (p_hat - closed_form) / stderr; 0 when both agree with stderr 0
  bool exact_branch = false;
  bool within_tolerance = false;
  std::string status;  // "pass", "fail" (exact branches) or "flagged"
};

ComparisonRecord compare_report(const MCEstimate& mc, double closed_form, bool exact_branch,
                                const std::string& strategy);

// Simulate, evaluate the closed form at cfg.w and classify the branch.
ComparisonRecord compare_det(const DetScenario& scn, const SimConfig& cfg);
ComparisonRecord compare_stoch(const StochSolution& sol, const SimConfig& cfg);

}  // namespace lifegoal
