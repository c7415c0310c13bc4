#include "lifegoal/det_life.hpp"

#include <cmath>

#include "lifegoal/errors.hpp"

namespace lifegoal {

namespace {

void expect(const DetScenario& scn, PremiumMode mode) {
  if (scn.product != Product::term_life) throw InvalidParameter("expected a term life scenario");
  if (scn.mode != mode)
    throw InvalidParameter(std::string("expected a ") + to_string(mode) + "-premium scenario");
}

}  // namespace

DetThresholds thresholds_single(const DetScenario& scn) {
  expect(scn, PremiumMode::single);
  return det_thresholds(scn);
}

double value_single(const DetScenario& scn, double w) {
  expect(scn, PremiumMode::single);
  return det_value(scn, w);
}

PurchaseAction action_single(const DetScenario& scn, double w) {
  expect(scn, PremiumMode::single);
  return det_action(scn, w);
}

DetThresholds thresholds_continuous(const DetScenario& scn) {
  expect(scn, PremiumMode::continuous);
  return det_thresholds(scn);
}

FreeBoundary solve_w0_life(const DetScenario& scn) {
  expect(scn, PremiumMode::continuous);
  const double r = scn.fp.r;
  const double quasi = scn.premium * scn.f / (r + scn.premium);
  return solve_free_boundary(r, scn.fp.lambda, scn.premium, quasi);
}

double value_continuous(const DetScenario& scn, double w) {
  expect(scn, PremiumMode::continuous);
  return det_value(scn, w);
}

PurchaseAction action_continuous(const DetScenario& scn, double w) {
  expect(scn, PremiumMode::continuous);
  return det_action(scn, w);
}

double side_inequality_single(const DetScenario& scn, double w) {
  if (scn.mode != PremiumMode::single) throw InvalidParameter("expected a single-premium scenario");
  const DetThresholds t = det_thresholds(scn);
  if (!(w > 0.0 && w < t.ideal)) throw InvalidParameter("side inequality needs 0 < w < w*");
  const BranchWeights bw = branch_weights(scn);
  const double b = scn.fp.lambda / scn.fp.r;
  const double K = scn.premium;
  const double gap2 = scn.gap() * scn.gap();
  if (w < t.quasi)
    return b / K * std::pow(w / t.quasi, b - 1.0) * bw.in_window * (w - t.quasi) / gap2;
  const double u = (w - t.quasi) / scn.gap();
  const double weight = w < t.mid ? bw.power_weight : 1.0 + bw.power_weight;
  return b * std::pow(u, b - 1.0) * weight * (w - t.ideal) / gap2;
}

}  // namespace lifegoal
