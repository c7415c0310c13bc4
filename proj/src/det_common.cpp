#include "lifegoal/det_common.hpp"

#include <cmath>
#include <string>

#include "lifegoal/errors.hpp"

namespace lifegoal {

const char* to_string(Product p) {
  return p == Product::term_life ? "term_life" : "pure_endowment";
}

const char* to_string(PremiumMode m) { return m == PremiumMode::single ? "single" : "continuous"; }

const char* to_string(PurchaseKind k) {
  switch (k) {
    case PurchaseKind::none: return "none";
    case PurchaseKind::buy_all_goal_gap: return "buy_all_goal_gap";
    case PurchaseKind::buy_goal_minus_wealth: return "buy_goal_minus_wealth";
    case PurchaseKind::buy_goal_minus_quasi_ideal: return "buy_goal_minus_quasi_ideal";
  }
  return "unknown";
}

DetScenario DetScenario::make(Product product, PremiumMode mode, const ForceParams& fp,
                              const CoverageWindow& cw, double f, double D,
                              std::optional<double> premium_override) {
  DetScenario s;
  s.product = product;
  s.mode = mode;
  s.fp = fp;
  s.cw = cw;
  s.f = f;
  s.D = D;
  s.validate();

  if (premium_override) {
    if (mode == PremiumMode::continuous) {
      s.premium = PremiumRate::user_supplied(*premium_override).rate;
    } else {
      if (!(*premium_override > 0.0) || !std::isfinite(*premium_override))
        throw InvalidParameter("premium must be > 0");
      s.premium = *premium_override;
    }
    s.basis = PremiumBasis::user_supplied;
    return s;
  }

  if (product == Product::term_life) {
    if (mode == PremiumMode::single) {
      s.premium = premium_single_term(fp, cw).per_unit;
    } else {
      const PremiumRate pr = premium_rate_term(fp, cw);
      s.premium = pr.rate;
      s.basis = pr.basis;
    }
  } else {
    if (mode == PremiumMode::single) {
      s.premium = premium_single_pure_endow(fp, cw).per_unit;
    } else {
      s.premium = premium_rate_pure_endow(fp, cw).rate;
    }
  }
  return s;
}

void DetScenario::validate() const {
  fp.validate();
  cw.validate();
  if (!(f > 0.0) || !std::isfinite(f)) throw InvalidParameter("goal f must be > 0");
  if (!(D >= 0.0) || !(D < f)) throw InvalidParameter("pre-existing benefit must satisfy 0 <= D < f");
  if (mode == PremiumMode::continuous && D != 0.0)
    throw InvalidParameter("pre-existing benefit D applies to single-premium scenarios only");
  if (product == Product::pure_endowment && cw.infinite())
    throw InvalidParameter("pure endowment needs a finite term n");
}

BranchWeights branch_weights(const DetScenario& scn) {
  const double lam = scn.fp.lambda;
  const double at_start = std::exp(-lam * scn.cw.m);
  const double at_end = scn.cw.discount_to_end(lam);
  if (scn.product == Product::term_life) return {at_start - at_end, at_end};
  return {at_end, at_start - at_end};
}

FreeBoundary solve_free_boundary(double r, double lambda, double rate, double quasi) {
  if (lambda <= r) return {};
  if (lambda >= r + rate)
    throw BracketError("free boundary: no crossing in (0, quasi-ideal) when lambda >= r + premium rate");
  const double a = lambda / (r + rate);
  const double b = lambda / r;
  auto g = [&](double w) {
    return 1.0 - std::pow((quasi - w) / quasi, a) - std::pow(w / quasi, b);
  };
  const BisectResult br = bisect(g, 1e-12 * quasi, (1.0 - 1e-12) * quasi, 1e-12, 200);
  return {br.root, std::abs(br.residual), br.iterations};
}

DetThresholds det_thresholds(const DetScenario& scn) {
  scn.validate();
  const double r = scn.fp.r;
  const double grow = std::exp(-r * scn.cw.m);
  const double P = scn.premium;
  DetThresholds t;
  t.mode = scn.mode;
  if (scn.mode == PremiumMode::single) {
    if (!(P < grow))
      throw InfeasibleScenario("single premium " + std::to_string(P) +
                               " is not below e^{-rm} = " + std::to_string(grow));
    t.quasi = P * scn.gap();
    t.ideal = (P + 1.0) * scn.gap();
  } else {
    if (!continuous_premium_feasible(r, scn.cw.m, P))
      throw InfeasibleScenario("premium rate violates (P + rP)/(r + P + rP) < e^{-rm}");
    t.quasi = P * scn.f / (r + P);
    t.ideal = (r + P + r * P) * scn.f / ((r + P) * (r + 1.0));
  }
  t.mid = std::min(t.quasi + grow * (t.ideal - t.quasi), t.ideal);
  if (!(0.0 < t.quasi && t.quasi < t.mid && t.mid <= t.ideal))
    throw InfeasibleScenario("threshold ordering 0 < quasi < mid <= ideal fails");

  if (scn.mode == PremiumMode::continuous) {
    try {
      const FreeBoundary fb = solve_free_boundary(r, scn.fp.lambda, P, t.quasi);
      t.free_boundary = fb.root;
    } catch (const BracketError& e) {
      throw InfeasibleScenario(e.what());
    }
  }
  return t;
}

DetCurve det_curve(const DetScenario& scn) {
  DetCurve c;
  c.thresholds = det_thresholds(scn);
  c.weights = branch_weights(scn);
  const DetThresholds& t = c.thresholds;
  const double r = scn.fp.r;
  const double lam = scn.fp.lambda;
  const double b = lam / r;
  const double in = c.weights.in_window;
  const double pw = c.weights.power_weight;
  const double span = t.ideal - t.quasi;

  std::vector<Segment> segs;
  auto& odes = c.odes;
  double start = 0.0;
  if (t.free_boundary) {
    const double w0 = *t.free_boundary;
    segs.push_back(Segment::reflected_power(0.0, w0, in, -in, t.quasi, t.quasi,
                                            lam / (r + scn.premium), "buy_zone"));
    odes.push_back(LinearOde{r + scn.premium, t.quasi, -lam * in});
    start = w0;
  }
  segs.push_back(Segment::power(start, t.quasi, 0.0, in, 0.0, t.quasi, b, "below_quasi"));
  odes.push_back(LinearOde{r, 0.0, 0.0});
  segs.push_back(Segment::power(t.quasi, t.mid, in, pw, t.quasi, span, b, "quasi_to_mid"));
  odes.push_back(LinearOde{r, t.quasi, -lam * in});
  if (t.mid < t.ideal) {
    segs.push_back(Segment::power(t.mid, t.ideal, -pw, 1.0 + pw, t.quasi, span, b, "mid_to_ideal"));
    odes.push_back(LinearOde{r, t.quasi, lam * pw});
  }
  c.pv = PiecewiseValue(std::move(segs), 1.0);
  return c;
}

double det_value(const DetScenario& scn, double w) {
  if (!(w >= 0.0)) throw InvalidParameter("wealth must be >= 0");
  return det_curve(scn).pv.value(w);
}

PurchaseAction det_action(const DetScenario& scn, double w) {
  if (!(w >= 0.0)) throw InvalidParameter("wealth must be >= 0");
  const DetThresholds t = det_thresholds(scn);
  if (scn.mode == PremiumMode::single) {
    if (w >= t.ideal) return {scn.gap(), PurchaseKind::buy_all_goal_gap};
    return {};
  }
  if (w >= t.ideal) return {scn.f - t.quasi, PurchaseKind::buy_goal_minus_quasi_ideal};
  if (t.free_boundary && w < *t.free_boundary)
    return {scn.f - w, PurchaseKind::buy_goal_minus_wealth};
  return {};
}

ResidualReport det_residuals(const DetScenario& scn, double tolerance, GridSpec grid) {
  const DetCurve c = det_curve(scn);
  return residual_det(c.pv, scn.fp.lambda, c.odes, tolerance, grid);
}

}  // namespace lifegoal
