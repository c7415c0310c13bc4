#include "lifegoal/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "lifegoal/det_life.hpp"
#include "lifegoal/errors.hpp"

namespace lifegoal {

using nlohmann::json;

namespace {

int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const SchemaError& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const InvalidParameter& e) {
    err << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const InfeasibleScenario& e) {
    err << "infeasible scenario: " << e.what() << "\n";
    return exit_infeasible;
  } catch (const DegenerateAnnuity& e) {
    err << "infeasible scenario: " << e.what() << "\n";
    return exit_infeasible;
  } catch (const BracketError& e) {
    err << "infeasible scenario: " << e.what() << "\n";
    return exit_infeasible;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_check_failed;
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw SchemaError("cannot write '" + path + "'");
  out << text;
}

std::string display_branch(const std::string& id) { return id == "above" ? "at_or_above_ideal" : id; }

Check tol_check(std::string name, double observed, double tol, std::string detail = {}) {
  const bool ok = std::isfinite(observed) && observed < tol;
  return {std::move(name), tol, observed, ok ? "pass" : "fail", std::move(detail)};
}

Check bool_check(std::string name, bool ok, double observed, std::string detail = {}) {
  return {std::move(name), 0.0, observed, ok ? "pass" : "fail", std::move(detail)};
}

Check not_applicable(std::string name, std::string detail) {
  return {std::move(name), 0.0, 0.0, "not-applicable", std::move(detail)};
}

// Value of the segment left of `w` evaluated at w (left limit).
double left_limit(const PiecewiseValue& pv, double w) {
  const Segment* best = nullptr;
  for (const auto& s : pv.segments())
    if (s.hi == w) best = &s;
  return best ? best->value(w) : pv.value(w);
}

std::vector<Check> det_checks(const DetScenario& scn) {
  std::vector<Check> out;
  const DetCurve c = det_curve(scn);
  const DetThresholds& t = c.thresholds;
  const double lam = scn.fp.lambda;

  out.push_back(tol_check("ode_residual", residual_det(c.pv, lam, c.odes, 1e-8).max_residual, 1e-8));
  out.push_back(tol_check("continuity", continuity_check(c.pv), 1e-12));
  out.push_back(tol_check("boundary_zero", std::abs(c.pv.value(0.0)), 1e-12, "value(0) = 0"));
  out.push_back(tol_check("boundary_quasi", std::abs(c.pv.value(t.quasi) - c.weights.in_window), 1e-12,
                          "value(quasi) equals the in-window weight"));
  out.push_back(tol_check("boundary_ideal", std::abs(left_limit(c.pv, t.ideal) - 1.0), 1e-12,
                          "left limit at the ideal value is 1"));

  if (scn.mode == PremiumMode::continuous && t.free_boundary) {
    const FreeBoundary fb = solve_free_boundary(scn.fp.r, lam, scn.premium, t.quasi);
    out.push_back(tol_check("free_boundary_residual", fb.residual, 1e-12));
    out.push_back(bool_check("free_boundary_interior", *fb.root > 0.0 && *fb.root < t.quasi, *fb.root));
  } else {
    const char* why = scn.mode == PremiumMode::single ? "single premium" : "lambda <= r: no root";
    out.push_back(not_applicable("free_boundary_residual", why));
    out.push_back(not_applicable("free_boundary_interior", why));
  }

  constexpr int kGrid = 2001;
  double worst_drop = 0.0;
  double prev = c.pv.value(0.0);
  for (int i = 1; i < kGrid; ++i) {
    const double v = c.pv.value(t.ideal * i / (kGrid - 1));
    worst_drop = std::max(worst_drop, prev - v);
    prev = v;
  }
  out.push_back(tol_check("monotone", worst_drop, 1e-12, "largest decrease on a 2001-point grid"));

  if (scn.mode == PremiumMode::single) {
    double worst = -std::numeric_limits<double>::infinity();
    for (int i = 1; i < kGrid - 1; ++i) {
      const double w = t.ideal * i / (kGrid - 1);
      if (w == t.quasi) continue;
      worst = std::max(worst, side_inequality_single(scn, w));
    }
    // With whole-life cover the middle branch is flat and the inequality is an equality there.
    const bool ok = c.weights.power_weight > 0.0 ? worst < 0.0 : worst <= 0.0;
    out.push_back(bool_check("side_inequality", ok, worst, "max over the grid must be negative"));
  } else {
    out.push_back(not_applicable("side_inequality", "continuous premium"));
  }
  return out;
}

std::vector<Check> stoch_checks(const StochSolution& sol) {
  std::vector<Check> out;
  const StochScenario& s = sol.scn;
  const Breakpoints& bp = sol.bp;
  const Exponents& e = sol.ex;
  const double cover = s.cover();
  const bool everywhere = sol.family == StochFamily::model2_buy_everywhere;

  out.push_back(tol_check("hjb_residual", stoch_residuals(sol, 1e-8).max_residual, 1e-8));
  out.push_back(tol_check("continuity", continuity_check(sol.pv), 1e-12));
  if (everywhere) {
    out.push_back(tol_check("boundary_zero", std::abs(sol.pv.value(0.0)), 1e-12));
    out.push_back(tol_check("boundary_w9_left", std::abs(left_limit(sol.pv, bp.quasi) - cover), 1e-12,
                            "left limit at w9 equals 1 - e^{-lambda n}"));
  } else {
    if (bp.lower >= 0.0)
      out.push_back(tol_check("boundary_lower", std::abs(sol.pv.value(bp.lower)), 1e-12));
    else
      out.push_back(not_applicable("boundary_lower", "lower breakpoint is negative"));
    out.push_back(tol_check("boundary_mid_low", std::abs(sol.pv.value(bp.mid_low) - cover), 1e-12));
    out.push_back(tol_check("boundary_mid_high", std::abs(sol.pv.value(bp.mid_high) - cover), 1e-12));
  }
  out.push_back(tol_check("boundary_ideal", std::abs(left_limit(sol.pv, bp.ideal) - 1.0), 1e-12));

  out.push_back(bool_check("p_in_unit_interval", e.p > 0.0 && e.p < 1.0, e.p));
  out.push_back(bool_check("q_above_one", e.q > 1.0, e.q));
  auto rel_poly = [&](double A, double k) {
    const double lam = s.lambda;
    const double m = e.half_sharpe;
    const double scale = std::max({1.0, m * k * k, std::abs((A - lam + m) * k), lam});
    return std::abs(k_poly(A, lam, m, k)) / scale;
  };
  const double poly = std::max({rel_poly(e.A, e.x1), rel_poly(e.A, e.x2), rel_poly(e.A1, e.k3),
                                rel_poly(e.A1, e.k4)});
  out.push_back(tol_check("root_polynomials", poly, 1e-12));

  if (!everywhere) {
    out.push_back(bool_check("coefficient_signs", sol.co.D2 < 0.0 && 0.0 < sol.co.D1, sol.co.D2,
                             "D2 < 0 < D1"));
  } else {
    out.push_back(bool_check("coefficient_signs", sol.co.D2 < 0.0, sol.co.D2, "D2 < 0"));
  }
  out.push_back(bool_check("coefficient_D3", sol.co.D3 >= 0.0, sol.co.D3));

  double foc = 0.0;
  for (const auto& seg : sol.pv.segments()) {
    if (seg.flat()) continue;
    for (int i = 1; i <= 10; ++i) foc = std::max(foc, foc_check(sol, seg.lo + (seg.hi - seg.lo) * i / 11.0));
  }
  out.push_back(tol_check("foc_investment", foc, 1e-10, "10 interior points per curved branch"));

  if (!everywhere && bp.buy > 0.0) {
    const double delta = 1e-6 * (bp.mid_low - bp.lower);
    const double below = buy_level_indicator(sol, bp.buy - delta);
    const double above = buy_level_indicator(sol, bp.buy + delta);
    out.push_back(bool_check("buy_level_sign_change", below < 0.0 && above >= 0.0, below,
                             "indicator negative just below the buy level, >= 0 just above"));
  } else {
    out.push_back(not_applicable("buy_level_sign_change", "no interior buy level"));
  }

  if (sol.crit && sol.crit->status == CriticalStatus::found)
    out.push_back(tol_check("h_tilde_residual", sol.crit->residual, 1e-10));
  else
    out.push_back(not_applicable("h_tilde_residual", sol.crit ? "no interior H~" : "Model I"));
  return out;
}

}  // namespace

std::vector<Check> verify_checks(const Scenario& scn) {
  if (scn.stochastic()) return stoch_checks(solve_stoch(*scn.stoch));
  return det_checks(*scn.det);
}

json to_json(const Check& c) {
  return {{"name", c.name},
          {"tolerance", c.tolerance},
          {"observed", c.observed},
          {"pass", c.status != "fail"},
          {"status", c.status},
          {"detail", c.detail}};
}

int cmd_value(const ValueArgs& args, std::ostream& err) {
  return guarded(err, [&] {
    const Scenario scn = load_scenario(args.config);
    std::ostringstream csv;
    csv << "wealth,value,branch_id,purchase,invest\n";
    json meta = {{"command", "value"}, {"mode", scn.mode}, {"grid_spec", args.grid}};
    WealthGrid grid;

    auto row = [&](double w, double v, const std::string& id, double buy, double pi) {
      csv << format_double(w) << ',' << format_double(v) << ',' << display_branch(id) << ','
          << format_double(buy) << ',' << format_double(pi) << '\n';
    };

    if (scn.stochastic()) {
      const StochSolution sol = solve_stoch(*scn.stoch);
      const Landmarks lm = landmarks(sol);
      grid = parse_grid(args.grid, lm);
      for (double w : grid.points()) {
        const StochAction act = action_stoch(sol, w);
        row(w, value_stoch(sol, w).value, sol.pv.branch_id(w), act.purchase, act.invest);
      }
      meta["solution"] = to_json(sol);
    } else {
      const DetScenario& d = *scn.det;
      const DetCurve curve = det_curve(d);
      grid = parse_grid(args.grid, landmarks(curve));
      for (double w : grid.points()) {
        const PurchaseAction act = det_action(d, w);
        row(w, curve.pv.value(w), curve.pv.branch_id(w), act.buy_amount, 0.0);
      }
      meta["thresholds"] = to_json(curve.thresholds);
      meta["premium"] = d.premium;
      meta["premium_basis"] = to_string(d.basis);
    }
    meta["grid"] = {{"a", grid.a}, {"b", grid.b}, {"steps", grid.steps}};
    meta["rows"] = grid.steps;

    write_text(args.out, csv.str());
    if (args.out != "-") write_text(args.out + ".meta.json", meta.dump(2) + "\n");
    return static_cast<int>(exit_ok);
  });
}

int cmd_verify(const VerifyArgs& args, std::ostream& err) {
  return guarded(err, [&] {
    const Scenario scn = load_scenario(args.config);
    const std::vector<Check> checks = verify_checks(scn);
    json list = json::array();
    bool all = true;
    for (const auto& c : checks) {
      list.push_back(to_json(c));
      all = all && c.status != "fail";
    }
    json report = {{"mode", scn.mode}, {"checks", list}, {"pass", all}};
    write_text(args.report, report.dump(2) + "\n");
    for (const auto& c : checks)
      if (c.status == "fail") err << "check failed: " << c.name << " observed " << format_double(c.observed) << "\n";
    return static_cast<int>(all ? exit_ok : exit_check_failed);
  });
}

int cmd_simulate(const SimulateArgs& args, std::ostream& err) {
  return guarded(err, [&] {
    const Scenario scn = load_scenario(args.config);
    SimConfig cfg;
    cfg.n_paths = args.paths;
    cfg.seed = args.seed;
    cfg.dt = args.dt;
    cfg.strategy = parse_strategy(args.strategy);
    cfg.threads = args.threads;

    ComparisonRecord rec;
    std::vector<TraceEvent> trace;
    if (scn.stochastic()) {
      const StochSolution sol = solve_stoch(*scn.stoch);
      cfg.w = resolve_wealth(args.wealth, landmarks(sol));
      rec = compare_stoch(sol, cfg);
      if (args.trace) trace = trace_stoch(sol, cfg, args.trace);
    } else {
      const DetCurve curve = det_curve(*scn.det);
      cfg.w = resolve_wealth(args.wealth, landmarks(curve));
      rec = compare_det(*scn.det, cfg);
      if (args.trace) trace = trace_det(*scn.det, cfg, args.trace);
    }

    json doc = to_json(rec);
    doc["dt"] = scn.stochastic() ? json(cfg.dt) : json(nullptr);
    write_text(args.out, doc.dump(2) + "\n");

    if (args.trace) {
      if (args.trace_out.empty()) throw SchemaError("--trace needs --trace-out");
      std::ostringstream csv;
      csv << "path_id,event_time,event_kind,wealth\n";
      for (const auto& ev : trace)
        csv << ev.path_id << ',' << format_double(ev.time) << ',' << ev.kind << ','
            << format_double(ev.wealth) << '\n';
      write_text(args.trace_out, csv.str());
    }
    if (rec.status == "fail") {
      err << "exact-branch comparison failed: z = " << format_double(rec.z_score) << "\n";
      return static_cast<int>(exit_check_failed);
    }
    return static_cast<int>(exit_ok);
  });
}

}  // namespace lifegoal
