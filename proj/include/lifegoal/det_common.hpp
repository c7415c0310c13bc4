#pragma once

// Types and the piecewise kernel shared by the deferred term life and the
// deferred pure endowment models. The two products differ only in which
// survival weight multiplies which branch.

#include <optional>
#include <string>
#include <vector>

#include "lifegoal/actuarial.hpp"
#include "lifegoal/numerics.hpp"

namespace lifegoal {

enum class Product { term_life, pure_endowment };
enum class PremiumMode { single, continuous };

const char* to_string(Product p);
const char* to_string(PremiumMode m);

struct DetScenario {
  Product product = Product::term_life;
  PremiumMode mode = PremiumMode::single;
  ForceParams fp;
  CoverageWindow cw;
  double f = 0.0;  // goal
  double D = 0.0;  // pre-existing benefit; single premium only
  double premium = 0.0;  // K / R per unit face, or H / M per unit face per year
  PremiumBasis basis = PremiumBasis::deferral_annuity;

  // Premium computed from the actuarial module unless an override is given.
  static DetScenario make(Product product, PremiumMode mode, const ForceParams& fp,
                          const CoverageWindow& cw, double f, double D = 0.0,
                          std::optional<double> premium_override = std::nullopt);

  // Parameter domain only; feasibility is checked when thresholds are built.
  void validate() const;

  // Goal gap the value function is normalised against: f - D (single) or f.
  double gap() const { return f - D; }
};

// single:     quasi = K*,  mid = w0, ideal = w*
// continuous: quasi = H*,  mid = w1, ideal = w*, free_boundary = w0 (lambda > r)
struct DetThresholds {
  PremiumMode mode = PremiumMode::single;
  double quasi = 0.0;
  double mid = 0.0;
  double ideal = 0.0;
  std::optional<double> free_boundary;
};

// Weights attached to the "insured event" and to its complement, both
// measured over the deferral horizon; in_window + power_weight = e^{-lambda m}.
struct BranchWeights {
  double in_window = 0.0;
  double power_weight = 0.0;
};

BranchWeights branch_weights(const DetScenario& scn);

enum class PurchaseKind { none, buy_all_goal_gap, buy_goal_minus_wealth, buy_goal_minus_quasi_ideal };

const char* to_string(PurchaseKind k);

struct PurchaseAction {
  double buy_amount = 0.0;
  PurchaseKind kind = PurchaseKind::none;
};

struct FreeBoundary {
  std::optional<double> root;  // nullopt: no root (lambda <= r)
  double residual = 0.0;       // |LHS - RHS| at the root
  int iterations = 0;
};

// Zero in (0, quasi) of 1 - (1 - w/quasi)^{lambda/(r+rate)} = (w/quasi)^{lambda/r}.
// Throws BracketError when lambda >= r + rate (no crossing exists).
FreeBoundary solve_free_boundary(double r, double lambda, double rate, double quasi);

// Value curve on [0, ideal) with the ODE each piece solves; the value is 1
// from the ideal value on.
struct DetCurve {
  DetThresholds thresholds;
  BranchWeights weights;
  PiecewiseValue pv;
  std::vector<std::optional<LinearOde>> odes;
};

// Throws InfeasibleScenario when the premium restriction or the threshold
// ordering fails, or when the free boundary does not exist.
DetThresholds det_thresholds(const DetScenario& scn);
DetCurve det_curve(const DetScenario& scn);

double det_value(const DetScenario& scn, double w);
PurchaseAction det_action(const DetScenario& scn, double w);

ResidualReport det_residuals(const DetScenario& scn, double tolerance, GridSpec grid = {});

}  // namespace lifegoal
