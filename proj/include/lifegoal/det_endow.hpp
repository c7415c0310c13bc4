#pragma once

// Deferred pure endowment bought with a single premium R or a continuous
// premium rate M. Same kernel as the term-life model with the survival
// weights swapped.

#include "lifegoal/det_common.hpp"

namespace lifegoal {

DetThresholds thresholds_single_endow(const DetScenario& scn);
double value_single_endow(const DetScenario& scn, double w);
PurchaseAction action_single_endow(const DetScenario& scn, double w);

DetThresholds thresholds_continuous_endow(const DetScenario& scn);
FreeBoundary solve_w0_endow(const DetScenario& scn);
double value_continuous_endow(const DetScenario& scn, double w);
PurchaseAction action_continuous_endow(const DetScenario& scn, double w);

}  // namespace lifegoal
