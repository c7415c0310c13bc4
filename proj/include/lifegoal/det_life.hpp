#pragma once

// Deferred term life insurance bought with a single premium K or a
// continuous premium rate H.

#include "lifegoal/det_common.hpp"

namespace lifegoal {

// K* = K(f-D), w0 = (e^{-rm}+K)(f-D), w* = (K+1)(f-D)
DetThresholds thresholds_single(const DetScenario& scn);
double value_single(const DetScenario& scn, double w);
PurchaseAction action_single(const DetScenario& scn, double w);

// H* = Hf/(r+H), w1 = e^{-rm}(w*-H*)+H*, w* = (r+H+rH)f/((r+H)(r+1))
DetThresholds thresholds_continuous(const DetScenario& scn);
FreeBoundary solve_w0_life(const DetScenario& scn);
double value_continuous(const DetScenario& scn, double w);
PurchaseAction action_continuous(const DetScenario& scn, double w);

// phi_D - K phi_w below K*, phi_D - (K+1) phi_w on [K*, w*), from the
// closed-form partial derivatives. Negative on both ranges. Accepts either
// product.
double side_inequality_single(const DetScenario& scn, double w);

}  // namespace lifegoal
