#include "lifegoal/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "lifegoal/errors.hpp"

namespace lifegoal {

using nlohmann::json;

namespace {

const std::set<std::string> kDetKeys = {"mode", "r", "lambda", "theta", "m", "n", "f", "premium_override"};
const std::set<std::string> kStochKeys = {"mode", "r", "lambda", "mu", "sigma", "a",
                                          "l",    "c", "H",      "f",  "n"};

double number(const json& doc, const std::string& key, std::optional<double> fallback = std::nullopt) {
  if (!doc.contains(key)) {
    if (fallback) return *fallback;
    throw SchemaError("missing required key '" + key + "'");
  }
  const json& v = doc.at(key);
  if (!v.is_number()) throw SchemaError("key '" + key + "' must be a number");
  return v.get<double>();
}

// Coverage length: a positive number or the string "inf".
std::optional<double> term_length(const json& doc) {
  if (!doc.contains("n")) throw SchemaError("missing required key 'n'");
  const json& v = doc.at("n");
  if (v.is_string()) {
    if (v.get<std::string>() == "inf") return std::nullopt;
    throw SchemaError("key 'n' must be a number or \"inf\"");
  }
  if (!v.is_number()) throw SchemaError("key 'n' must be a number or \"inf\"");
  return v.get<double>();
}

void reject_unknown(const json& doc, std::set<std::string> allowed) {
  for (auto it = doc.begin(); it != doc.end(); ++it)
    if (!allowed.count(it.key())) throw SchemaError("unknown key '" + it.key() + "'");
}

}  // namespace

Scenario parse_scenario(const json& doc) {
  if (!doc.is_object()) throw SchemaError("scenario must be a JSON object");
  if (!doc.contains("mode") || !doc.at("mode").is_string())
    throw SchemaError("missing required string key 'mode'");
  Scenario out;
  out.mode = doc.at("mode").get<std::string>();
  const std::string& mode = out.mode;

  if (mode == "stoch1" || mode == "stoch2") {
    reject_unknown(doc, kStochKeys);
    StochScenario s;
    s.r = number(doc, "r");
    s.lambda = number(doc, "lambda");
    s.mu = number(doc, "mu");
    s.sigma = number(doc, "sigma");
    s.a = number(doc, "a", 0.0);
    s.l = number(doc, "l", 0.0);
    s.c = number(doc, "c", 0.0);
    s.H = number(doc, "H");
    s.f = number(doc, "f");
    s.n = term_length(doc);
    s.model = mode == "stoch1" ? StochModel::I : StochModel::II;
    s.validate();
    out.stoch = s;
    return out;
  }

  Product product;
  PremiumMode pm;
  if (mode == "det-single") {
    product = Product::term_life;
    pm = PremiumMode::single;
  } else if (mode == "det-cont") {
    product = Product::term_life;
    pm = PremiumMode::continuous;
  } else if (mode == "endow-single") {
    product = Product::pure_endowment;
    pm = PremiumMode::single;
  } else if (mode == "endow-cont") {
    product = Product::pure_endowment;
    pm = PremiumMode::continuous;
  } else {
    throw SchemaError("unknown mode '" + mode + "'");
  }
  std::set<std::string> allowed = kDetKeys;
  if (pm == PremiumMode::single) allowed.insert("D");
  reject_unknown(doc, allowed);

  ForceParams fp{number(doc, "r"), number(doc, "lambda"), number(doc, "theta", 0.0)};
  CoverageWindow cw{number(doc, "m", 0.0), term_length(doc)};
  std::optional<double> override_rate;
  if (doc.contains("premium_override")) override_rate = number(doc, "premium_override");
  out.det = DetScenario::make(product, pm, fp, cw, number(doc, "f"), number(doc, "D", 0.0),
                              override_rate);
  return out;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open scenario file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("scenario is not valid JSON: ") + e.what());
  }
  return parse_scenario(doc);
}

std::optional<double> Landmarks::find(const std::string& name) const {
  const std::string key = name == "w*" ? "ideal" : name;
  for (const auto& [k, v] : points)
    if (k == key) return v;
  return std::nullopt;
}

Landmarks landmarks(const DetCurve& curve) {
  const DetThresholds& t = curve.thresholds;
  Landmarks lm;
  lm.points = {{"quasi", t.quasi}, {"mid", t.mid}, {"ideal", t.ideal}};
  if (t.free_boundary) lm.points.emplace_back("w0", *t.free_boundary);
  return lm;
}

Landmarks landmarks(const StochSolution& sol) {
  const Breakpoints& bp = sol.bp;
  Landmarks lm;
  lm.points = {{"lower", bp.lower},       {"buy", bp.buy},     {"mid_low", bp.mid_low},
               {"mid_high", bp.mid_high}, {"quasi", bp.quasi}, {"ideal", bp.ideal}};
  return lm;
}

double resolve_wealth(const std::string& token, const Landmarks& marks) {
  if (auto v = marks.find(token)) return *v;
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(token, &used);
  } catch (const std::exception&) {
    throw SchemaError("'" + token + "' is neither a number nor a known wealth level");
  }
  if (used != token.size() || !std::isfinite(x))
    throw SchemaError("'" + token + "' is neither a number nor a known wealth level");
  return x;
}

std::vector<double> WealthGrid::points() const {
  std::vector<double> out(static_cast<std::size_t>(steps));
  for (int i = 0; i < steps; ++i) out[i] = a + (b - a) * static_cast<double>(i) / (steps - 1);
  out.back() = b;
  return out;
}

WealthGrid parse_grid(const std::string& spec, const Landmarks& marks) {
  const auto c1 = spec.find(':');
  const auto c2 = c1 == std::string::npos ? std::string::npos : spec.find(':', c1 + 1);
  if (c2 == std::string::npos || spec.find(':', c2 + 1) != std::string::npos)
    throw SchemaError("grid must look like a:b:steps");
  WealthGrid g;
  g.a = resolve_wealth(spec.substr(0, c1), marks);
  g.b = resolve_wealth(spec.substr(c1 + 1, c2 - c1 - 1), marks);
  const std::string steps = spec.substr(c2 + 1);
  std::size_t used = 0;
  try {
    g.steps = std::stoi(steps, &used);
  } catch (const std::exception&) {
    throw SchemaError("grid steps must be an integer");
  }
  if (used != steps.size()) throw SchemaError("grid steps must be an integer");
  if (g.steps < 2) throw SchemaError("grid needs at least 2 steps");
  if (!(g.a < g.b)) throw SchemaError("grid needs a < b");
  if (g.a < 0.0) throw SchemaError("grid wealth must be >= 0");
  return g;
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json to_json(const ResidualReport& rep) {
  json segs = json::array();
  for (const auto& s : rep.segments) {
    segs.push_back({{"branch_id", s.branch_id},
                    {"lo", s.lo},
                    {"hi", s.hi},
                    {"max_residual", s.max_residual},
                    {"points", s.points},
                    {"skipped", s.skipped},
                    {"note", s.note}});
  }
  return {{"segments", segs},
          {"grid_size", rep.grid_size},
          {"offset_fraction", rep.offset_fraction},
          {"tolerance", rep.tolerance},
          {"max_residual", rep.max_residual},
          {"pass", rep.pass}};
}

json to_json(const MCEstimate& est) {
  json outcomes = json::object();
  for (const auto& [k, v] : est.outcomes) outcomes[k] = v;
  return {{"p_hat", est.p_hat},
          {"stderr", est.stderr_},
          {"n_paths", est.n_paths},
          {"seed", est.seed},
          {"successes", est.successes},
          {"outcomes", outcomes}};
}

json to_json(const ComparisonRecord& rec) {
  json z = std::isfinite(rec.z_score) ? json(rec.z_score) : json(nullptr);
  return {{"mode", rec.mode},
          {"strategy", rec.strategy},
          {"branch", rec.branch},
          {"wealth", rec.w},
          {"estimate", to_json(rec.mc)},
          {"closed_form", rec.closed_form},
          {"z_score", z},
          {"exact_branch", rec.exact_branch},
          {"within_tolerance", rec.within_tolerance},
          {"status", rec.status}};
}

json to_json(const DetThresholds& t) {
  json j = {{"mode", to_string(t.mode)}, {"quasi", t.quasi}, {"mid", t.mid}, {"ideal", t.ideal}};
  j["free_boundary"] = t.free_boundary ? json(*t.free_boundary) : json(nullptr);
  return j;
}

json to_json(const StochSolution& sol) {
  const Exponents& e = sol.ex;
  const Breakpoints& bp = sol.bp;
  json j = {{"family", to_string(sol.family)},
            {"exponents",
             {{"half_sharpe", e.half_sharpe},
              {"A", e.A},
              {"A1", e.A1},
              {"x1", e.x1},
              {"x2", e.x2},
              {"k3", e.k3},
              {"k4", e.k4},
              {"p", e.p},
              {"q", e.q}}},
            {"breakpoints",
             {{"lower", bp.lower},
              {"buy", bp.buy},
              {"mid_low", bp.mid_low},
              {"mid_high", bp.mid_high},
              {"quasi", bp.quasi},
              {"ideal", bp.ideal}}},
            {"coefficients", {{"D1", sol.co.D1}, {"D2", sol.co.D2}, {"D3", sol.co.D3}}}};
  if (sol.crit) {
    json h = sol.crit->H_tilde ? json(*sol.crit->H_tilde) : json(nullptr);
    j["criticals"] = {{"C0", sol.crit->C0},
                      {"C1", sol.crit->C1},
                      {"H_tilde", h},
                      {"status", to_string(sol.crit->status)},
                      {"residual", sol.crit->residual}};
  }
  return j;
}

}  // namespace lifegoal
