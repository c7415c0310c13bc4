#pragma once

// Test-only oracles: quadrature, finite differences and random scenario
// generators. Nothing here is used by the library.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <random>

#include "lifegoal/det_common.hpp"
#include "lifegoal/errors.hpp"
#include "lifegoal/stoch_control.hpp"

namespace testing_support {

namespace detail {

inline double simpson_step(const std::function<double(double)>& f, double a, double b, double fa,
                           double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Adaptive Simpson with absolute tolerance `tol`.
inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-13) {
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::simpson_step(f, a, b, fa, fm, fb, whole, tol, 50);
}

inline double central_diff(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

inline double central_diff2(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
}

// Random deterministic scenario of the given kind satisfying every
// feasibility restriction. Draws until one is accepted.
inline lifegoal::DetScenario random_det(std::mt19937_64& rng, lifegoal::Product product,
                                        lifegoal::PremiumMode mode) {
  using namespace lifegoal;
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (;;) {
    const double r = 0.01 + 0.07 * U(rng);
    const double lambda = 0.005 + 0.12 * U(rng);
    const double theta = 0.3 * U(rng);
    const double m = U(rng) < 0.15 ? 0.0 : 20.0 * U(rng);
    std::optional<double> n = 1.0 + 30.0 * U(rng);
    if (product == Product::term_life && U(rng) < 0.15) n.reset();
    const double f = 50.0 + 200.0 * U(rng);
    const double D = mode == PremiumMode::single ? 0.8 * f * U(rng) : 0.0;
    std::optional<double> premium;
    // The literal endowment rate is rarely feasible; draw one that is.
    if (product == Product::pure_endowment && mode == PremiumMode::continuous) {
      premium = 0.001 + 0.2 * U(rng);
    }
    try {
      DetScenario s = DetScenario::make(product, mode, {r, lambda, theta}, {m, n}, f, D, premium);
      det_thresholds(s);
      return s;
    } catch (const std::exception&) {
      continue;
    }
  }
}

inline lifegoal::StochScenario random_stoch(std::mt19937_64& rng, lifegoal::StochModel model) {
  using namespace lifegoal;
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (;;) {
    StochScenario s;
    s.model = model;
    s.r = 0.01 + 0.07 * U(rng);
    s.lambda = 0.01 + 0.1 * U(rng);
    s.mu = s.r + 0.01 + 0.1 * U(rng);
    s.sigma = 0.1 + 0.3 * U(rng);
    s.l = U(rng) < 0.2 ? 0.0 : 2.0 * U(rng);
    s.H = 0.005 + 0.1 * U(rng);
    s.f = 50.0 + 150.0 * U(rng);
    if (U(rng) < 0.1) s.n.reset(); else s.n = 1.0 + 40.0 * U(rng);
    if (model == StochModel::I) {
      s.a = 0.05 * U(rng);
      s.c = 0.05 * U(rng);
    } else {
      s.a = 5.0 * U(rng);
      s.c = U(rng) < 0.2 ? s.a : 5.0 * U(rng);
    }
    try {
      solve_stoch(s);
      return s;
    } catch (const std::exception&) {
      continue;
    }
  }
}

// Model II scenario in the buy-everywhere family: l = 0, C1 + a <= c <= C0
// and H <= H~. With at_C0 the consumption sits exactly on C0.
// Buy-everywhere draws. The family conditions alone allow w9 >= ideal once
// c - a reaches r f / (1 + r + H), so c stays below that as well.
inline lifegoal::StochScenario random_buy_everywhere(std::mt19937_64& rng) {
  using namespace lifegoal;
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (;;) {
    StochScenario s;
    s.model = StochModel::II;
    s.r = 0.02 + 0.05 * U(rng);
    s.lambda = 0.01 + 0.1 * U(rng);
    s.mu = s.r + 0.02 + 0.1 * U(rng);
    s.sigma = 0.1 + 0.3 * U(rng);
    s.l = 0.0;
    s.H = 0.002 + 0.05 * U(rng);
    s.f = 50.0 + 150.0 * U(rng);
    s.n = 5.0 + 30.0 * U(rng);
    s.a = U(rng);
    const Criticals cr = criticals(s);
    const double top = std::min(cr.C0 - s.a, s.r * s.f / (1.0 + s.r + s.H));
    if (!cr.H_tilde || s.H > *cr.H_tilde || !(cr.C1 < top)) continue;
    s.c = s.a + cr.C1 + (top - cr.C1) * U(rng);
    if (s.c <= s.a) continue;
    try {
      if (select_family(s) == StochFamily::model2_buy_everywhere) return s;
    } catch (const std::exception&) {
    }
  }
}

}  // namespace testing_support
