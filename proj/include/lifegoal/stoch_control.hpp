#pragma once

// Goal-reaching with income, consumption, a risky asset and term life cover
// bought at a continuous premium rate H (no deferral).
//
//   dW = [A W + (mu - r) pi - H D 1{t <= n} - d] dt + (sigma pi + l) dB
// Model I : income and consumption proportional to wealth, A = r + a - c, d = 0.
// Model II: income and consumption at constant rates, A = r, d = c - a.

#include <optional>
#include <string>
#include <vector>

#include "lifegoal/numerics.hpp"

namespace lifegoal {

enum class StochModel { I, II };

struct StochScenario {
  double r = 0.0;
  double lambda = 0.0;
  double mu = 0.0;
  double sigma = 0.0;
  double a = 0.0;  // income coefficient
  double l = 0.0;  // income volatility coefficient
  double c = 0.0;  // consumption coefficient
  double H = 0.0;  // premium rate per unit face
  double f = 0.0;
  std::optional<double> n;  // nullopt: whole life
  StochModel model = StochModel::I;

  void validate() const;
  double cover() const;  // 1 - e^{-lambda n}
  double tail() const;   // e^{-lambda n}
};

enum class StochFamily {
  model1,
  model2_balanced,        // a == c
  model2_surplus,         // a > c
  model2_deficit,         // a < c, general five-branch form
  model2_buy_everywhere,  // a < c, l == 0, C1 + a <= c <= C0, H <= H~
};

const char* to_string(StochModel m);
const char* to_string(StochFamily f);

// Roots of m k^2 - (A - lambda + m) k - lambda = 0, negative root first.
struct KRoots {
  double neg = 0.0;
  double pos = 0.0;
};

KRoots k_roots(double A, double lambda, double half_sharpe);
// m k^2 - (A - lambda + m) k - lambda
double k_poly(double A, double lambda, double half_sharpe, double k);

struct Exponents {
  double half_sharpe = 0.0;  // m = ((mu - r)/sigma)^2 / 2
  double A = 0.0;
  double A1 = 0.0;  // A + H
  double x1 = 0.0;  // roots with A
  double x2 = 0.0;
  double k3 = 0.0;  // roots with A1
  double k4 = 0.0;
  double p = 0.0;  // x1/(x1 - 1), in (0, 1)
  double q = 0.0;  // k4/(k4 - 1), > 1
};

Exponents exponents(const StochScenario& scn);

struct Breakpoints {
  double lower = 0.0;
  double buy = 0.0;
  double mid_low = 0.0;
  double mid_high = 0.0;
  double quasi = 0.0;
  double ideal = 0.0;
};

struct Coefficients {
  double D1 = 0.0;
  double D2 = 0.0;
  double D3 = 0.0;
};

enum class CriticalStatus { found, capped, empty };
const char* to_string(CriticalStatus s);

struct Criticals {
  double C0 = 0.0;
  double C1 = 0.0;
  CriticalStatus status = CriticalStatus::empty;
  std::optional<double> H_tilde;
  double residual = 0.0;  // |C1(H~) - (C0(H~) - a)|
};

// Largest H in (0, h_max] with C1(H) <= C0(H) - a (Model II).
Criticals criticals(const StochScenario& scn, double h_max = 10.0);

StochFamily select_family(const StochScenario& scn);

// Ideal value w^i from the formula alone, no ordering check.
double ideal_value(const StochScenario& scn);

// Throws InfeasibleScenario naming the violated pair.
Breakpoints breakpoints(const StochScenario& scn);

struct StochSolution {
  StochScenario scn;
  StochFamily family = StochFamily::model1;
  Exponents ex;
  Breakpoints bp;
  Coefficients co;
  std::optional<Criticals> crit;
  PiecewiseValue pv;  // on [0, ideal)
  std::vector<std::optional<HjbBranch>> hjb;
};

Coefficients coefficients(const StochScenario& scn, const Exponents& ex, const Breakpoints& bp);
StochSolution solve_stoch(const StochScenario& scn);

struct StochValue {
  double value = 0.0;
  bool clamped = false;  // w was above the ideal value
};

StochValue value_stoch(const StochSolution& sol, double w);

struct StochAction {
  double purchase = 0.0;  // D*
  double invest = 0.0;    // pi*
};

StochAction action_stoch(const StochSolution& sol, double w);

// |pi*(w) - FOC maximiser| / max(1, |FOC maximiser|)
double foc_check(const StochSolution& sol, double w);

// lambda (1 - e^{-lambda n}) - H (f - w) Phi_w(w); changes sign at the buy level.
double buy_level_indicator(const StochSolution& sol, double w);

ResidualReport stoch_residuals(const StochSolution& sol, double tolerance, GridSpec grid = {});

}  // namespace lifegoal
