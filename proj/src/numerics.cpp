#include "lifegoal/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "lifegoal/errors.hpp"

namespace lifegoal {

BisectResult bisect(const std::function<double(double)>& g, double lo, double hi, double tol,
                    int max_iter) {
  if (!(lo < hi)) throw BracketError("bisect: need lo < hi");
  double glo = g(lo);
  double ghi = g(hi);
  if (glo == 0.0) return {lo, 0.0, 0};
  if (ghi == 0.0) return {hi, 0.0, 0};
  if (!(std::signbit(glo) != std::signbit(ghi)) || std::isnan(glo) || std::isnan(ghi))
    throw BracketError("bisect: no sign change on the bracket");

  int it = 0;
  while (hi - lo > tol) {
    if (it == max_iter) throw ConvergenceError("bisect: iteration cap reached");
    ++it;
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;  // bracket is down to adjacent doubles
    const double gm = g(mid);
    if (gm == 0.0) return {mid, 0.0, it};
    if (std::signbit(gm) == std::signbit(glo)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
      ghi = gm;
    }
  }
  const double root = std::abs(glo) <= std::abs(ghi) ? lo : hi;
  return {root, std::abs(glo) <= std::abs(ghi) ? glo : ghi, it};
}

Segment Segment::constant(double lo, double hi, double level, std::string id) {
  Segment s;
  s.lo = lo;
  s.hi = hi;
  s.level = level;
  s.branch_id = std::move(id);
  return s;
}

Segment Segment::power(double lo, double hi, double level, double scale, double base, double span,
                       double exponent, std::string id) {
  if (!(span > 0.0)) throw InvalidParameter("segment span must be > 0");
  return {lo, hi, level, scale, base, span, exponent, false, std::move(id)};
}

Segment Segment::reflected_power(double lo, double hi, double level, double scale, double base,
                                 double span, double exponent, std::string id) {
  if (!(span > 0.0)) throw InvalidParameter("segment span must be > 0");
  return {lo, hi, level, scale, base, span, exponent, true, std::move(id)};
}

namespace {

double local_u(const Segment& s, double w) {
  const double u = s.reflected ? (s.base - w) / s.span : (w - s.base) / s.span;
  return std::max(u, 0.0);
}

}  // namespace

double Segment::value(double w) const {
  if (flat()) return level;
  return level + scale * std::pow(local_u(*this, w), exponent);
}

double Segment::d1(double w) const {
  if (flat()) return 0.0;
  const double sign = reflected ? -1.0 : 1.0;
  return sign * scale * exponent * std::pow(local_u(*this, w), exponent - 1.0) / span;
}

double Segment::d2(double w) const {
  if (flat()) return 0.0;
  return scale * exponent * (exponent - 1.0) * std::pow(local_u(*this, w), exponent - 2.0) /
         (span * span);
}

PiecewiseValue::PiecewiseValue(std::vector<Segment> segments, double above)
    : segments_(std::move(segments)), above_(above) {
  if (segments_.empty()) throw InvalidParameter("piecewise value needs at least one segment");
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    if (!(segments_[i].lo < segments_[i].hi))
      throw InvalidParameter("breakpoints must be strictly increasing");
    if (i > 0 && segments_[i].lo != segments_[i - 1].hi)
      throw InvalidParameter("segments must be contiguous");
  }
}

std::vector<double> PiecewiseValue::breakpoints() const {
  std::vector<double> out;
  out.reserve(segments_.size() + 1);
  for (const auto& s : segments_) out.push_back(s.lo);
  out.push_back(segments_.back().hi);
  return out;
}

double PiecewiseValue::lower() const { return segments_.front().lo; }
double PiecewiseValue::upper() const { return segments_.back().hi; }

std::optional<std::size_t> PiecewiseValue::locate(double w) const {
  if (w >= upper()) return std::nullopt;
  auto it = std::upper_bound(segments_.begin(), segments_.end(), w,
                             [](double x, const Segment& s) { return x < s.lo; });
  if (it == segments_.begin()) return 0;  // below the domain: extend the first piece
  return static_cast<std::size_t>(std::distance(segments_.begin(), it) - 1);
}

double PiecewiseValue::value(double w) const {
  auto i = locate(w);
  return i ? segments_[*i].value(w) : above_;
}

double PiecewiseValue::d1(double w) const {
  auto i = locate(w);
  return i ? segments_[*i].d1(w) : 0.0;
}

double PiecewiseValue::d2(double w) const {
  auto i = locate(w);
  return i ? segments_[*i].d2(w) : 0.0;
}

std::string PiecewiseValue::branch_id(double w) const {
  auto i = locate(w);
  return i ? segments_[*i].branch_id : std::string("above");
}

namespace {

template <class Eq, class Fn>
ResidualReport run_grid(const PiecewiseValue& pv, const std::vector<std::optional<Eq>>& eqs,
                        double tolerance, GridSpec grid, Fn residual_at) {
  if (eqs.size() != pv.segments().size())
    throw InvalidParameter("one equation slot per segment is required");
  if (grid.points < 2) throw InvalidParameter("residual grid needs at least 2 points");

  ResidualReport rep;
  rep.grid_size = grid.points;
  rep.offset_fraction = grid.offset_fraction;
  rep.tolerance = tolerance;
  for (std::size_t i = 0; i < pv.segments().size(); ++i) {
    const Segment& s = pv.segments()[i];
    SegmentResidual sr;
    sr.branch_id = s.branch_id;
    sr.lo = s.lo;
    sr.hi = s.hi;
    if (!eqs[i]) {
      sr.skipped = true;
      sr.note = "no equation attached";
      rep.segments.push_back(sr);
      continue;
    }
    const double width = s.hi - s.lo;
    const double a = s.lo + grid.offset_fraction * width;
    const double b = s.hi - grid.offset_fraction * width;
    for (std::size_t k = 0; k < grid.points; ++k) {
      const double w = a + (b - a) * static_cast<double>(k) / static_cast<double>(grid.points - 1);
      const std::optional<double> res = residual_at(s, *eqs[i], w);
      if (!res) {
        sr.skipped = true;
        sr.note = "second derivative vanishes";
        break;
      }
      sr.max_residual = std::max(sr.max_residual, *res);
      ++sr.points;
    }
    rep.max_residual = std::max(rep.max_residual, sr.max_residual);
    rep.segments.push_back(sr);
  }
  rep.pass = rep.max_residual < tolerance && std::isfinite(rep.max_residual);
  return rep;
}

}  // namespace

ResidualReport residual_det(const PiecewiseValue& pv, double lambda,
                            const std::vector<std::optional<LinearOde>>& eqs, double tolerance,
                            GridSpec grid) {
  return run_grid(pv, eqs, tolerance, grid,
                  [lambda](const Segment& s, const LinearOde& e, double w) -> std::optional<double> {
                    const double phi = s.value(w);
                    const double r = e.rate * (w - e.base) * s.d1(w) - lambda * phi - e.source;
                    return std::abs(r) / std::max(1.0, lambda * std::abs(phi));
                  });
}

ResidualReport residual_hjb(const PiecewiseValue& pv, double lambda, double half_sharpe,
                            const std::vector<std::optional<HjbBranch>>& eqs, double tolerance,
                            GridSpec grid) {
  return run_grid(
      pv, eqs, tolerance, grid,
      [lambda, half_sharpe](const Segment& s, const HjbBranch& e,
                            double w) -> std::optional<double> {
        if (s.flat()) return 0.0;
        const double phi = s.value(w);
        const double p1 = s.d1(w);
        const double p2 = s.d2(w);
        if (p2 == 0.0) return std::nullopt;
        const double r =
            lambda * (phi - e.level) - e.rate * (w - e.base) * p1 + half_sharpe * p1 * p1 / p2;
        return std::abs(r) / std::max(1.0, lambda * std::abs(phi));
      });
}

double foc_investment(double excess_drift, double sigma, double l, double phi_w, double phi_ww) {
  if (phi_ww == 0.0) return 0.0;
  const double pi = -(excess_drift * phi_w + sigma * l * phi_ww) / (sigma * sigma * phi_ww);
  return std::max(pi, 0.0);
}

double continuity_check(const PiecewiseValue& pv) {
  double gap = 0.0;
  const auto& segs = pv.segments();
  for (std::size_t i = 1; i < segs.size(); ++i) {
    const double w = segs[i].lo;
    gap = std::max(gap, std::abs(segs[i - 1].value(w) - segs[i].value(w)));
  }
  return gap;
}

}  // namespace lifegoal
