#include "lifegoal/mc_sim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <thread>

#include "lifegoal/errors.hpp"

namespace lifegoal {

const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::paper_optimal: return "paper_optimal";
    case Strategy::buy_all_at_quasi_ideal: return "buy_all_at_quasi_ideal";
    case Strategy::wait_to_ideal: return "wait_to_ideal";
    case Strategy::buy_gap_now: return "buy_gap_now";
  }
  return "unknown";
}

Strategy parse_strategy(const std::string& name) {
  for (Strategy s : {Strategy::paper_optimal, Strategy::buy_all_at_quasi_ideal,
                     Strategy::wait_to_ideal, Strategy::buy_gap_now})
    if (name == to_string(s)) return s;
  throw InvalidParameter("unknown strategy '" + name + "'");
}

void SimConfig::validate(bool stochastic) const {
  if (n_paths < 1) throw InvalidParameter("n_paths must be >= 1");
  if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidParameter("initial wealth must be >= 0");
  if (stochastic && !(dt > 0.0 && dt <= 1e-2)) throw InvalidParameter("dt must be in (0, 1e-2]");
}

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

PathRng::PathRng(std::uint64_t seed, std::uint64_t path) {
  std::uint64_t k = seed;
  std::uint64_t a = splitmix64(k);
  std::uint64_t p = path ^ a;
  state_ = splitmix64(p) ^ seed;
}

PathRng::result_type PathRng::operator()() { return splitmix64(state_); }

double PathRng::uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

namespace {

enum Outcome : int { ideal_reached, covered_death, wealth_at_death, ruin, uncovered_death, kOutcomes };

constexpr std::array<const char*, kOutcomes> kOutcomeNames = {
    "ideal_reached", "covered_death", "wealth_at_death", "ruin", "uncovered_death"};

bool is_success(Outcome o) { return o == ideal_reached || o == covered_death || o == wealth_at_death; }

bool reaches(double x, double target) {
  return x >= target - 1e-12 * std::max(1.0, std::abs(target));
}

using Sink = std::vector<TraceEvent>*;

void emit(Sink sink, std::uint64_t id, double t, const char* kind, double w) {
  if (sink) sink->push_back({id, t, kind, w});
}

double exp_draw(PathRng& rng, double lambda) { return -std::log1p(-rng.uniform()) / lambda; }

// Runs `path(i, rng, sink)` for every path and aggregates outcome counts.
template <class PathFn>
MCEstimate run_paths(const SimConfig& cfg, PathFn path) {
  unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, cfg.n_paths));
  std::vector<std::array<std::uint64_t, kOutcomes>> counts(threads);
  for (auto& c : counts) c.fill(0);

  auto work = [&](unsigned t) {
    const std::uint64_t lo = cfg.n_paths * t / threads;
    const std::uint64_t hi = cfg.n_paths * (t + 1) / threads;
    for (std::uint64_t i = lo; i < hi; ++i) {
      PathRng rng(cfg.seed, i);
      ++counts[t][path(i, rng, nullptr)];
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& th : pool) th.join();
  }

  MCEstimate est;
  est.n_paths = cfg.n_paths;
  est.seed = cfg.seed;
  for (int o = 0; o < kOutcomes; ++o) {
    std::uint64_t total = 0;
    for (const auto& c : counts) total += c[o];
    est.outcomes[kOutcomeNames[o]] = total;
    if (is_success(static_cast<Outcome>(o))) est.successes += total;
  }
  est.p_hat = static_cast<double>(est.successes) / static_cast<double>(cfg.n_paths);
  est.stderr_ = std::sqrt(est.p_hat * (1.0 - est.p_hat) / static_cast<double>(cfg.n_paths));
  return est;
}

template <class PathFn>
std::vector<TraceEvent> run_traces(const SimConfig& cfg, std::uint64_t paths, PathFn path) {
  std::vector<TraceEvent> events;
  for (std::uint64_t i = 0; i < std::min(paths, cfg.n_paths); ++i) {
    PathRng rng(cfg.seed, i);
    path(i, rng, &events);
  }
  return events;
}

// Whether newly bought cover pays for an event `u` years after purchase.
struct Window {
  Product product;
  double m;
  std::optional<double> n;

  bool covers(double u) const {
    if (product == Product::pure_endowment) return u >= m + *n;
    return u >= m && (!n || u < m + *n);
  }
};

Window window_of(const DetScenario& scn) { return {scn.product, scn.cw.m, scn.cw.n}; }

// ---- single premium ------------------------------------------------------

struct SinglePlan {
  std::optional<double> buy_time;
  double face = 0.0;
  double wealth_after = 0.0;
};

SinglePlan plan_single(const DetScenario& scn, const DetThresholds& t, const SimConfig& cfg) {
  const double r = scn.fp.r;
  const double K = scn.premium;
  const double w = cfg.w;
  SinglePlan plan;
  auto buy_at = [&](double level, double after) {
    if (w >= level) {
      plan.buy_time = 0.0;
      plan.face = scn.gap();
      plan.wealth_after = w - K * scn.gap();
    } else if (w > 0.0) {
      plan.buy_time = std::log(level / w) / r;
      plan.face = scn.gap();
      plan.wealth_after = after;
    }
  };
  switch (cfg.strategy) {
    case Strategy::paper_optimal:
    case Strategy::wait_to_ideal:
      buy_at(t.ideal, t.ideal - t.quasi);
      break;
    case Strategy::buy_all_at_quasi_ideal:
      buy_at(t.quasi, 0.0);
      break;
    case Strategy::buy_gap_now:
      plan.buy_time = 0.0;
      plan.face = std::min(scn.gap(), w / K);
      plan.wealth_after = w - K * plan.face;
      break;
  }
  return plan;
}

Outcome single_path(const DetScenario& scn, const SinglePlan& plan, const Window& win, double w,
                    double T, std::uint64_t id, Sink sink) {
  const double r = scn.fp.r;
  const double need = scn.f - scn.D;
  emit(sink, id, 0.0, "start", w);
  if (!plan.buy_time || T < *plan.buy_time) {
    const double wealth = w * std::exp(r * T);
    emit(sink, id, T, "death", wealth);
    return reaches(wealth, need) ? wealth_at_death : uncovered_death;
  }
  const double s = *plan.buy_time;
  emit(sink, id, s, "purchase", plan.wealth_after);
  const double wealth = plan.wealth_after * std::exp(r * (T - s));
  emit(sink, id, T, "death", wealth);
  if (plan.face > 0.0 && win.covers(T - s) && reaches(wealth + plan.face, need)) return covered_death;
  return reaches(wealth, need) ? wealth_at_death : uncovered_death;
}

// ---- continuous premium ----------------------------------------------------

Outcome continuous_path(const DetScenario& scn, const DetThresholds& th, const Window& win,
                        const SimConfig& cfg, double T, std::uint64_t id, Sink sink) {
  const double r = scn.fp.r;
  const double P = scn.premium;
  const double q = th.quasi;
  const double ideal = th.ideal;
  const double f = scn.f;
  double t = 0.0;
  double W = cfg.w;
  emit(sink, id, 0.0, "start", W);
  if (reaches(W, ideal)) {
    emit(sink, id, 0.0, "ideal", W);
    return ideal_reached;
  }

  auto death_without_cover = [&](double wealth) {
    emit(sink, id, T, "death", wealth);
    return reaches(wealth, f) ? wealth_at_death : uncovered_death;
  };

  // Grow at r without cover until `level`; false if death comes first.
  auto grow_to = [&](double level, Outcome& out) {
    if (W <= 0.0) {
      out = death_without_cover(0.0);
      return false;
    }
    const double tau = std::log(level / W) / r;
    if (T < t + tau) {
      out = death_without_cover(W * std::exp(r * (T - t)));
      return false;
    }
    t += tau;
    W = level;
    return true;
  };

  // Hold cover with wealth following W(u) = q + (W0 - q) e^{rate u}, u from
  // the purchase instant s; cover amount `cover(W)`.
  auto hold = [&](double rate, auto cover) {
    const double s = t;
    const double W0 = W;
    emit(sink, id, s, "purchase", W0);
    double end = std::numeric_limits<double>::infinity();
    Outcome at_end = ruin;
    if (W0 < q) {
      end = s + std::log(q / (q - W0)) / rate;
      at_end = ruin;
    } else if (W0 > q) {
      end = s + std::log((ideal - q) / (W0 - q)) / rate;
      at_end = ideal_reached;
    }
    if (T < end) {
      const double wealth = q + (W0 - q) * std::exp(rate * (T - s));
      emit(sink, id, T, "death", wealth);
      if (win.covers(T - s) && reaches(wealth + cover(wealth), f)) return covered_death;
      return reaches(wealth, f) ? wealth_at_death : uncovered_death;
    }
    emit(sink, id, end, at_end == ruin ? "ruin" : "ideal", at_end == ruin ? 0.0 : ideal);
    return at_end;
  };
  auto adjusting = [&]() { return hold(r + P, [&](double wealth) { return f - wealth; }); };
  auto fixed = [&]() { return hold(r, [&](double) { return f - q; }); };

  Outcome out = uncovered_death;
  switch (cfg.strategy) {
    case Strategy::paper_optimal:
      if (th.free_boundary && W < *th.free_boundary) return adjusting();
      [[fallthrough]];
    case Strategy::wait_to_ideal:
      if (!grow_to(ideal, out)) return out;
      emit(sink, id, t, "ideal", W);
      return ideal_reached;
    case Strategy::buy_all_at_quasi_ideal:
      if (W < q && !grow_to(q, out)) return out;
      return fixed();
    case Strategy::buy_gap_now:
      return adjusting();
  }
  return out;
}

// ---- stochastic ------------------------------------------------------------

Outcome stoch_path(const StochSolution& sol, const SimConfig& cfg, PathRng& rng, std::uint64_t id,
                   Sink sink) {
  const StochScenario& s = sol.scn;
  const double T = exp_draw(rng, s.lambda);
  const double ideal = sol.bp.ideal;
  const double A = sol.ex.A;
  const double d = s.model == StochModel::I ? 0.0 : s.c - s.a;
  const double ex = s.mu - s.r;
  const double horizon = s.n ? *s.n : std::numeric_limits<double>::infinity();
  std::normal_distribution<double> normal(0.0, 1.0);

  double t = 0.0;
  double W = cfg.w;
  emit(sink, id, 0.0, "start", W);
  for (;;) {
    if (W <= 0.0) {
      emit(sink, id, t, "ruin", W);
      return ruin;
    }
    if (W >= ideal) {
      emit(sink, id, t, "ideal", W);
      return ideal_reached;
    }
    const double h = std::min(cfg.dt, T - t);
    const StochAction act = action_stoch(sol, W);
    const double premium = t <= horizon ? s.H * act.purchase : 0.0;
    const double drift = A * W + ex * act.invest - premium - d;
    W += drift * h + (s.sigma * act.invest + s.l) * std::sqrt(h) * normal(rng);
    t += h;
    if (t >= T) {
      emit(sink, id, T, "death", W);
      const double cover = T <= horizon ? action_stoch(sol, std::max(W, 0.0)).purchase : 0.0;
      if (cover > 0.0 && W > 0.0 && reaches(W + cover, s.f)) return covered_death;
      return reaches(W, s.f) ? wealth_at_death : (W <= 0.0 ? ruin : uncovered_death);
    }
  }
}

}  // namespace

MCEstimate simulate_det_single(const DetScenario& scn, const SimConfig& cfg) {
  if (scn.mode != PremiumMode::single) throw InvalidParameter("expected a single-premium scenario");
  cfg.validate(false);
  const DetThresholds th = det_thresholds(scn);
  const SinglePlan plan = plan_single(scn, th, cfg);
  const Window win = window_of(scn);
  const double lam = scn.fp.lambda;
  return run_paths(cfg, [&](std::uint64_t i, PathRng& rng, Sink sink) {
    return single_path(scn, plan, win, cfg.w, exp_draw(rng, lam), i, sink);
  });
}

MCEstimate simulate_det_continuous(const DetScenario& scn, const SimConfig& cfg) {
  if (scn.mode != PremiumMode::continuous)
    throw InvalidParameter("expected a continuous-premium scenario");
  cfg.validate(false);
  const DetThresholds th = det_thresholds(scn);
  const Window win = window_of(scn);
  const double lam = scn.fp.lambda;
  return run_paths(cfg, [&](std::uint64_t i, PathRng& rng, Sink sink) {
    return continuous_path(scn, th, win, cfg, exp_draw(rng, lam), i, sink);
  });
}

MCEstimate simulate_stoch(const StochSolution& sol, const SimConfig& cfg) {
  cfg.validate(true);
  if (cfg.strategy != Strategy::paper_optimal)
    throw InvalidParameter("stochastic simulation supports the paper_optimal strategy only");
  return run_paths(cfg, [&](std::uint64_t i, PathRng& rng, Sink sink) {
    return stoch_path(sol, cfg, rng, i, sink);
  });
}

std::vector<TraceEvent> trace_det(const DetScenario& scn, const SimConfig& cfg, std::uint64_t paths) {
  cfg.validate(false);
  const DetThresholds th = det_thresholds(scn);
  const Window win = window_of(scn);
  const double lam = scn.fp.lambda;
  if (scn.mode == PremiumMode::single) {
    const SinglePlan plan = plan_single(scn, th, cfg);
    return run_traces(cfg, paths, [&](std::uint64_t i, PathRng& rng, Sink sink) {
      return single_path(scn, plan, win, cfg.w, exp_draw(rng, lam), i, sink);
    });
  }
  return run_traces(cfg, paths, [&](std::uint64_t i, PathRng& rng, Sink sink) {
    return continuous_path(scn, th, win, cfg, exp_draw(rng, lam), i, sink);
  });
}

std::vector<TraceEvent> trace_stoch(const StochSolution& sol, const SimConfig& cfg,
                                    std::uint64_t paths) {
  cfg.validate(true);
  return run_traces(cfg, paths, [&](std::uint64_t i, PathRng& rng, Sink sink) {
    return stoch_path(sol, cfg, rng, i, sink);
  });
}

ComparisonRecord compare_report(const MCEstimate& mc, double closed_form, bool exact_branch,
                                const std::string& strategy) {
  ComparisonRecord rec;
  rec.mc = mc;
  rec.strategy = strategy;
  rec.closed_form = closed_form;
  rec.exact_branch = exact_branch;
  const double diff = mc.p_hat - closed_form;
  if (mc.stderr_ > 0.0) {
    rec.z_score = diff / mc.stderr_;
    rec.within_tolerance = std::abs(rec.z_score) <= 3.5;
  } else {
    rec.within_tolerance = std::abs(diff) <= 1e-12;
    rec.z_score = rec.within_tolerance ? 0.0 : std::numeric_limits<double>::quiet_NaN();
  }
  if (exact_branch)
    rec.status = rec.within_tolerance ? "pass" : "fail";
  else
    rec.status = "flagged";
  return rec;
}

ComparisonRecord compare_det(const DetScenario& scn, const SimConfig& cfg) {
  const DetCurve curve = det_curve(scn);
  const DetThresholds& th = curve.thresholds;
  const double w = cfg.w;
  const double closed = curve.pv.value(w);
  const bool single = scn.mode == PremiumMode::single;

  bool exact = w >= th.ideal || (w == 0.0 && closed == 0.0);
  if (cfg.strategy == Strategy::buy_all_at_quasi_ideal && w < th.quasi) {
    if (single || !th.free_boundary || w >= *th.free_boundary) exact = true;
  }

  const MCEstimate mc = single ? simulate_det_single(scn, cfg) : simulate_det_continuous(scn, cfg);
  ComparisonRecord rec = compare_report(mc, closed, exact, to_string(cfg.strategy));
  rec.mode = std::string(to_string(scn.product)) + "/" + to_string(scn.mode);
  rec.branch = curve.pv.branch_id(w);
  rec.w = w;
  return rec;
}

ComparisonRecord compare_stoch(const StochSolution& sol, const SimConfig& cfg) {
  const double w = cfg.w;
  const double closed = value_stoch(sol, w).value;
  const bool exact = w >= sol.bp.ideal || (w == 0.0 && closed == 0.0);
  const MCEstimate mc = simulate_stoch(sol, cfg);
  ComparisonRecord rec = compare_report(mc, closed, exact, to_string(cfg.strategy));
  rec.mode = std::string("stochastic/") + to_string(sol.family);
  rec.branch = sol.pv.branch_id(w);
  rec.w = w;
  return rec;
}

}  // namespace lifegoal
