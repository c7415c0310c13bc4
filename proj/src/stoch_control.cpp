#include "lifegoal/stoch_control.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lifegoal/errors.hpp"

namespace lifegoal {

const char* to_string(StochModel m) { return m == StochModel::I ? "I" : "II"; }

const char* to_string(StochFamily f) {
  switch (f) {
    case StochFamily::model1: return "model1";
    case StochFamily::model2_balanced: return "model2_balanced";
    case StochFamily::model2_surplus: return "model2_surplus";
    case StochFamily::model2_deficit: return "model2_deficit";
    case StochFamily::model2_buy_everywhere: return "model2_buy_everywhere";
  }
  return "unknown";
}

const char* to_string(CriticalStatus s) {
  switch (s) {
    case CriticalStatus::found: return "found";
    case CriticalStatus::capped: return "capped";
    case CriticalStatus::empty: return "empty";
  }
  return "unknown";
}

void StochScenario::validate() const {
  auto finite = [](double x) { return std::isfinite(x); };
  if (!(r > 0.0) || !finite(r)) throw InvalidParameter("r must be > 0");
  if (!(lambda > 0.0) || !finite(lambda)) throw InvalidParameter("lambda must be > 0");
  if (!(sigma > 0.0) || !finite(sigma)) throw InvalidParameter("sigma must be > 0");
  if (!(mu > r) || !finite(mu)) throw InvalidParameter("mu must exceed r");
  if (!(l >= 0.0) || !finite(l)) throw InvalidParameter("l must be >= 0");
  if (!finite(a) || !finite(c)) throw InvalidParameter("a and c must be finite");
  if (!(H > 0.0) || !finite(H)) throw InvalidParameter("H must be > 0");
  if (!(f > 0.0) || !finite(f)) throw InvalidParameter("f must be > 0");
  if (n && (!(*n > 0.0) || !finite(*n))) throw InvalidParameter("n must be > 0");
  if (model == StochModel::I && !(c < r + a)) throw InvalidParameter("Model I needs c < r + a");
}

double StochScenario::cover() const { return n ? -std::expm1(-lambda * *n) : 1.0; }
double StochScenario::tail() const { return n ? std::exp(-lambda * *n) : 0.0; }

KRoots k_roots(double A, double lambda, double half_sharpe) {
  const double b = A - lambda + half_sharpe;
  const double s = std::sqrt(b * b + 4.0 * lambda * half_sharpe);
  // Product of the roots is -lambda/m; take the non-cancelling one first.
  KRoots k;
  if (b >= 0.0) {
    k.pos = (b + s) / (2.0 * half_sharpe);
    k.neg = -lambda / (half_sharpe * k.pos);
  } else {
    k.neg = (b - s) / (2.0 * half_sharpe);
    k.pos = -lambda / (half_sharpe * k.neg);
  }
  return k;
}

double k_poly(double A, double lambda, double half_sharpe, double k) {
  return half_sharpe * k * k - (A - lambda + half_sharpe) * k - lambda;
}

namespace {

double drift_rate(const StochScenario& s) { return s.model == StochModel::I ? s.r + (s.a - s.c) : s.r; }
double level_shift(const StochScenario& s) { return s.model == StochModel::I ? 0.0 : s.c - s.a; }

double q_for(double A1, double lambda, double half_sharpe) {
  const double k = k_roots(A1, lambda, half_sharpe).pos;
  return k / (k - 1.0);
}

}  // namespace

Exponents exponents(const StochScenario& scn) {
  scn.validate();
  Exponents e;
  const double sharpe = (scn.mu - scn.r) / scn.sigma;
  e.half_sharpe = 0.5 * sharpe * sharpe;
  e.A = drift_rate(scn);
  e.A1 = e.A + scn.H;
  const KRoots base = k_roots(e.A, scn.lambda, e.half_sharpe);
  const KRoots shifted = k_roots(e.A1, scn.lambda, e.half_sharpe);
  e.x1 = base.neg;
  e.x2 = base.pos;
  e.k3 = shifted.neg;
  e.k4 = shifted.pos;
  e.p = e.x1 / (e.x1 - 1.0);
  e.q = e.k4 / (e.k4 - 1.0);
  return e;
}

Criticals criticals(const StochScenario& scn, double h_max) {
  scn.validate();
  const double r = scn.r;
  const double f = scn.f;
  const double hs = 0.5 * std::pow((scn.mu - scn.r) / scn.sigma, 2);
  auto c0_net = [&](double H) { return (r + H + r * H) * r * f / ((r + H) * (r + 1.0) + r * H); };
  auto c1 = [&](double H) { return H * f * ((r + H) * q_for(r + H, scn.lambda, hs) / scn.lambda - 1.0); };
  auto g = [&](double H) { return c1(H) - c0_net(H); };

  Criticals out;
  out.C0 = c0_net(scn.H) + scn.a;
  out.C1 = c1(scn.H);

  if (g(h_max) <= 0.0) {
    out.status = CriticalStatus::capped;
    out.H_tilde = h_max;
    out.residual = std::abs(g(h_max));
    return out;
  }
  // Scan down from h_max on a log grid for the last point where g <= 0.
  constexpr int kGrid = 4000;
  const double h_min = 1e-8;
  const double step = std::log(h_max / h_min) / kGrid;
  double hi = h_max;
  for (int i = kGrid - 1; i >= 0; --i) {
    const double lo = h_min * std::exp(step * i);
    if (g(lo) <= 0.0) {
      const BisectResult br = bisect(g, lo, hi, 1e-15 * hi, 200);
      out.status = CriticalStatus::found;
      out.H_tilde = br.root;
      out.residual = std::abs(br.residual);
      return out;
    }
    hi = lo;
  }
  out.status = CriticalStatus::empty;
  return out;
}

StochFamily select_family(const StochScenario& scn) {
  scn.validate();
  if (scn.model == StochModel::I) return StochFamily::model1;
  if (scn.a == scn.c) return StochFamily::model2_balanced;
  if (scn.a > scn.c) return StochFamily::model2_surplus;
  const Criticals cr = criticals(scn);
  if (scn.c > cr.C0)
    throw InfeasibleScenario("consumption c exceeds the critical value C0 = " + std::to_string(cr.C0));
  if (scn.l == 0.0 && cr.C1 + scn.a <= scn.c && cr.H_tilde && scn.H <= *cr.H_tilde)
    return StochFamily::model2_buy_everywhere;
  return StochFamily::model2_deficit;
}

double ideal_value(const StochScenario& scn) {
  const Exponents e = exponents(scn);
  return ((e.A1 + e.A * scn.H) * scn.f - level_shift(scn) * scn.H) / (e.A1 * (e.A + 1.0));
}

namespace {

Breakpoints raw_breakpoints(const StochScenario& scn, const Exponents& e, StochFamily fam) {
  const double d = level_shift(scn);
  const double B = (scn.mu - scn.r) * scn.l / scn.sigma;
  Breakpoints bp;
  bp.quasi = (scn.H * scn.f + d) / e.A1;
  bp.ideal = ideal_value(scn);
  if (fam == StochFamily::model2_buy_everywhere) {
    bp.lower = 0.0;
    bp.buy = 0.0;
    bp.mid_low = bp.quasi;
    bp.mid_high = bp.quasi;
    return bp;
  }
  bp.lower = (B + d) / e.A;
  bp.mid_low = bp.quasi + B / e.A1;
  bp.mid_high = bp.quasi + B / e.A;
  bp.buy = ((1.0 - e.p) * bp.mid_low - (1.0 - e.q) * bp.lower) / (e.q - e.p);
  return bp;
}

void check_ordering(const Breakpoints& bp, StochFamily fam) {
  auto need = [](bool ok, const char* what) {
    if (!ok) throw InfeasibleScenario(std::string("breakpoint ordering fails: ") + what);
  };
  if (fam == StochFamily::model2_buy_everywhere) {
    need(0.0 < bp.quasi, "0 < w9");
    need(bp.quasi < bp.ideal, "w9 < ideal");
    return;
  }
  need(bp.lower < bp.buy, "lower < buy");
  need(bp.buy < bp.mid_low, "buy < mid_low");
  need(bp.mid_low <= bp.mid_high, "mid_low <= mid_high");
  need(bp.mid_high < bp.ideal, "mid_high < ideal");
  need(0.0 < bp.ideal, "0 < ideal");
}

}  // namespace

Breakpoints breakpoints(const StochScenario& scn) {
  const StochFamily fam = select_family(scn);
  const Breakpoints bp = raw_breakpoints(scn, exponents(scn), fam);
  check_ordering(bp, fam);
  return bp;
}

Coefficients coefficients(const StochScenario& scn, const Exponents& e, const Breakpoints& bp) {
  const double cover = scn.cover();
  const double p = e.p;
  const double q = e.q;
  Coefficients co;
  if (bp.buy == bp.lower || bp.buy == bp.mid_low)
    throw InfeasibleScenario("buy level coincides with a neighbouring breakpoint");
  co.D3 = scn.tail() * std::pow(bp.ideal - bp.mid_high, -p);
  co.D1 = cover * q * (1.0 - p) / (q - p) * std::pow(bp.buy - bp.lower, -p);
  co.D2 = cover * p * (1.0 - q) / (q - p) * std::pow(std::abs(bp.buy - bp.mid_low), -q);
  return co;
}

StochSolution solve_stoch(const StochScenario& scn) {
  StochSolution sol;
  sol.scn = scn;
  sol.family = select_family(scn);
  sol.ex = exponents(scn);
  sol.bp = raw_breakpoints(scn, sol.ex, sol.family);
  check_ordering(sol.bp, sol.family);
  if (scn.model == StochModel::II) sol.crit = criticals(scn);

  const Exponents& e = sol.ex;
  const Breakpoints& bp = sol.bp;
  const double cover = scn.cover();
  const double tail = scn.tail();

  std::vector<Segment> segs;
  auto add = [&](Segment s, std::optional<HjbBranch> eq) {
    s.lo = std::max(s.lo, 0.0);
    if (!(s.lo < s.hi)) return;
    segs.push_back(std::move(s));
    sol.hjb.push_back(eq);
  };

  if (sol.family == StochFamily::model2_buy_everywhere) {
    const double w9 = bp.quasi;
    sol.co.D2 = -cover * std::pow(w9, -e.q);
    sol.co.D3 = tail * std::pow(bp.ideal - w9, -e.p);
    add(Segment::reflected_power(0.0, w9, cover, -cover, w9, w9, e.q, "buy_zone"),
        HjbBranch{cover, e.A1, w9});
    add(Segment::power(w9, bp.ideal, cover, tail, w9, bp.ideal - w9, e.p, "quasi_to_ideal"),
        HjbBranch{cover, e.A, w9});
  } else {
    sol.co = coefficients(scn, e, bp);
    const double pq = e.q - e.p;
    if (bp.lower > 0.0)
      add(Segment::constant(0.0, bp.lower, 0.0, "below_lower"), HjbBranch{0.0, e.A, bp.lower});
    add(Segment::power(bp.lower, bp.buy, 0.0, cover * e.q * (1.0 - e.p) / pq, bp.lower,
                       bp.buy - bp.lower, e.p, "lower_to_buy"),
        HjbBranch{0.0, e.A, bp.lower});
    add(Segment::reflected_power(bp.buy, bp.mid_low, cover, -cover * e.p * (e.q - 1.0) / pq,
                                 bp.mid_low, bp.mid_low - bp.buy, e.q, "buy_to_mid_low"),
        HjbBranch{cover, e.A1, bp.mid_low});
    if (bp.mid_low < bp.mid_high)
      add(Segment::constant(bp.mid_low, bp.mid_high, cover, "plateau"),
          HjbBranch{cover, e.A, bp.mid_high});
    add(Segment::power(bp.mid_high, bp.ideal, cover, tail, bp.mid_high, bp.ideal - bp.mid_high, e.p,
                       "mid_high_to_ideal"),
        HjbBranch{cover, e.A, bp.mid_high});
  }
  sol.pv = PiecewiseValue(std::move(segs), 1.0);
  return sol;
}

StochValue value_stoch(const StochSolution& sol, double w) {
  if (!(w >= 0.0)) throw InvalidParameter("wealth must be >= 0");
  if (w > sol.bp.ideal) return {1.0, true};
  return {sol.pv.value(w), false};
}

StochAction action_stoch(const StochSolution& sol, double w) {
  const Breakpoints& bp = sol.bp;
  const StochScenario& s = sol.scn;
  w = std::clamp(w, 0.0, bp.ideal);
  StochAction act;

  if (w >= bp.buy) {
    act.purchase = s.f;
    if (w < bp.mid_low) act.purchase -= w;
    if (w >= bp.mid_high) act.purchase -= bp.quasi;
  }
  if (w >= bp.ideal) return act;

  const double ex = s.mu - s.r;
  const double s2 = s.sigma * s.sigma;
  const double p = sol.ex.p;
  const double q = sol.ex.q;
  double pi = 0.0;
  if (sol.family == StochFamily::model2_buy_everywhere) {
    pi = w < bp.quasi ? ex * (w - bp.quasi) / (s2 * (1.0 - q)) : ex * (w - bp.quasi) / (s2 * (1.0 - p));
  } else if (w < bp.lower) {
    pi = 0.0;
  } else if (w < bp.buy) {
    pi = (ex * (w - bp.lower) + s.sigma * s.l * (p - 1.0)) / (s2 * (1.0 - p));
  } else if (w < bp.mid_low) {
    pi = (ex * (w - bp.mid_low) + s.sigma * s.l * (q - 1.0)) / (s2 * (1.0 - q));
  } else if (w < bp.mid_high) {
    pi = 0.0;
  } else {
    pi = (ex * (w - bp.mid_high) + s.sigma * s.l * (p - 1.0)) / (s2 * (1.0 - p));
  }
  act.invest = std::max(pi, 0.0);
  return act;
}

double foc_check(const StochSolution& sol, double w) {
  const StochScenario& s = sol.scn;
  const double foc = foc_investment(s.mu - s.r, s.sigma, s.l, sol.pv.d1(w), sol.pv.d2(w));
  return std::abs(action_stoch(sol, w).invest - foc) / std::max(1.0, std::abs(foc));
}

double buy_level_indicator(const StochSolution& sol, double w) {
  const StochScenario& s = sol.scn;
  return s.lambda * s.cover() - s.H * (s.f - w) * sol.pv.d1(w);
}

ResidualReport stoch_residuals(const StochSolution& sol, double tolerance, GridSpec grid) {
  return residual_hjb(sol.pv, sol.scn.lambda, sol.ex.half_sharpe, sol.hjb, tolerance, grid);
}

}  // namespace lifegoal
