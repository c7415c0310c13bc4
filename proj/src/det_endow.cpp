#include "lifegoal/det_endow.hpp"

#include <string>

#include "lifegoal/errors.hpp"

namespace lifegoal {

namespace {

void expect(const DetScenario& scn, PremiumMode mode) {
  if (scn.product != Product::pure_endowment)
    throw InvalidParameter("expected a pure endowment scenario");
  if (scn.mode != mode)
    throw InvalidParameter(std::string("expected a ") + to_string(mode) + "-premium scenario");
}

}  // namespace

DetThresholds thresholds_single_endow(const DetScenario& scn) {
  expect(scn, PremiumMode::single);
  return det_thresholds(scn);
}

double value_single_endow(const DetScenario& scn, double w) {
  expect(scn, PremiumMode::single);
  return det_value(scn, w);
}

PurchaseAction action_single_endow(const DetScenario& scn, double w) {
  expect(scn, PremiumMode::single);
  return det_action(scn, w);
}

DetThresholds thresholds_continuous_endow(const DetScenario& scn) {
  expect(scn, PremiumMode::continuous);
  return det_thresholds(scn);
}

FreeBoundary solve_w0_endow(const DetScenario& scn) {
  expect(scn, PremiumMode::continuous);
  const double r = scn.fp.r;
  const double quasi = scn.premium * scn.f / (r + scn.premium);
  return solve_free_boundary(r, scn.fp.lambda, scn.premium, quasi);
}

double value_continuous_endow(const DetScenario& scn, double w) {
  expect(scn, PremiumMode::continuous);
  return det_value(scn, w);
}

PurchaseAction action_continuous_endow(const DetScenario& scn, double w) {
  expect(scn, PremiumMode::continuous);
  return det_action(scn, w);
}

}  // namespace lifegoal
