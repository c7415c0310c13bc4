#pragma once

// Scenario files, wealth grids and JSON encodings used by the command-line
// tool.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "lifegoal/det_common.hpp"
#include "lifegoal/mc_sim.hpp"
#include "lifegoal/numerics.hpp"
#include "lifegoal/stoch_control.hpp"

namespace lifegoal {

// Malformed scenario file or command-line value.
class SchemaError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Scenario {
  std::string mode;  // det-single | det-cont | endow-single | endow-cont | stoch1 | stoch2
  std::optional<DetScenario> det;
  std::optional<StochScenario> stoch;

  bool stochastic() const { return stoch.has_value(); }
};

Scenario parse_scenario(const nlohmann::json& doc);
Scenario load_scenario(const std::string& path);

// Named wealth levels of a solved scenario ("ideal", "quasi", ...).
struct Landmarks {
  std::vector<std::pair<std::string, double>> points;
  std::optional<double> find(const std::string& name) const;
};

Landmarks landmarks(const DetCurve& curve);
Landmarks landmarks(const StochSolution& sol);

// A number or a landmark name ("w*" is an alias of "ideal").
double resolve_wealth(const std::string& token, const Landmarks& marks);

struct WealthGrid {
  double a = 0.0;
  double b = 0.0;
  int steps = 0;
  std::vector<double> points() const;
};

// "a:b:steps"; endpoints may be landmark names. steps >= 2 and a < b.
WealthGrid parse_grid(const std::string& spec, const Landmarks& marks);

std::string format_double(double x);  // %.17g

nlohmann::json to_json(const ResidualReport& rep);
nlohmann::json to_json(const MCEstimate& est);
nlohmann::json to_json(const ComparisonRecord& rec);
nlohmann::json to_json(const DetThresholds& t);
nlohmann::json to_json(const StochSolution& sol);

}  // namespace lifegoal
