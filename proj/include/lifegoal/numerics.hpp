#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace lifegoal {

struct BisectResult {
  double root = 0.0;
  double residual = 0.0;  // g(root)
  int iterations = 0;
};

// Plain bisection. Requires g(lo) * g(hi) < 0 (an exact zero at an endpoint
// is returned as is). Throws BracketError without a sign change and
// ConvergenceError if |hi - lo| > tol after max_iter halvings.
BisectResult bisect(const std::function<double(double)>& g, double lo, double hi, double tol,
                    int max_iter);

// One analytic piece of a value curve on [lo, hi):
//   value(w) = level + scale * u^exponent,
//   u = (w - base) / span          (reflected == false)
//   u = (base - w) / span          (reflected == true)
// scale == 0 gives a constant segment.
struct Segment {
  double lo = 0.0;
  double hi = 0.0;
  double level = 0.0;
  double scale = 0.0;
  double base = 0.0;
  double span = 1.0;
  double exponent = 1.0;
  bool reflected = false;
  std::string branch_id;

  static Segment constant(double lo, double hi, double level, std::string id);
  static Segment power(double lo, double hi, double level, double scale, double base, double span,
                       double exponent, std::string id);
  static Segment reflected_power(double lo, double hi, double level, double scale, double base,
                                 double span, double exponent, std::string id);

  bool flat() const { return scale == 0.0; }
  double value(double w) const;
  double d1(double w) const;
  double d2(double w) const;
};

// Ordered, contiguous segments. Segment i covers [lo_i, hi_i) and
// hi_i == lo_{i+1}; a point on a shared endpoint belongs to the right
// segment. Beyond the last segment the curve takes the value `above`.
class PiecewiseValue {
 public:
  PiecewiseValue() = default;
  PiecewiseValue(std::vector<Segment> segments, double above);

  const std::vector<Segment>& segments() const { return segments_; }
  std::vector<double> breakpoints() const;
  double lower() const;
  double upper() const;
  double above() const { return above_; }

  // Index of the segment holding w, or nullopt when w >= upper().
  std::optional<std::size_t> locate(double w) const;
  double value(double w) const;
  double d1(double w) const;
  double d2(double w) const;
  std::string branch_id(double w) const;

 private:
  std::vector<Segment> segments_;
  double above_ = 1.0;
};

// rate * (w - base) * phi_w - lambda * phi - source = 0
struct LinearOde {
  double rate = 0.0;
  double base = 0.0;
  double source = 0.0;
};

// lambda * (phi - level) - rate * (w - base) * phi_w + half_sharpe * phi_w^2 / phi_ww = 0
struct HjbBranch {
  double level = 0.0;
  double rate = 0.0;
  double base = 0.0;
};

struct SegmentResidual {
  std::string branch_id;
  double lo = 0.0;
  double hi = 0.0;
  double max_residual = 0.0;
  std::size_t points = 0;
  bool skipped = false;
  std::string note;
};

struct ResidualReport {
  std::vector<SegmentResidual> segments;
  std::size_t grid_size = 0;
  double offset_fraction = 0.0;
  double tolerance = 0.0;
  double max_residual = 0.0;
  bool pass = false;
};

struct GridSpec {
  std::size_t points = 1000;
  double offset_fraction = 1e-6;
};

// Residuals are |equation| / max(1, lambda * |phi|), sampled on `points`
// evenly spaced nodes per segment, kept offset_fraction * width away from
// both ends. Entries in `eqs` align with pv.segments(); nullopt marks a
// segment with no equation attached.
ResidualReport residual_det(const PiecewiseValue& pv, double lambda,
                            const std::vector<std::optional<LinearOde>>& eqs, double tolerance,
                            GridSpec grid = {});

// Flat segments report exactly 0. A curved segment with phi_ww == 0 at a
// node (exponent 1) is skipped and flagged.
ResidualReport residual_hjb(const PiecewiseValue& pv, double lambda, double half_sharpe,
                            const std::vector<std::optional<HjbBranch>>& eqs, double tolerance,
                            GridSpec grid = {});

// max(-[(mu - r) phi_w + sigma l phi_ww] / (sigma^2 phi_ww), 0); 0 where the
// curve is flat.
double foc_investment(double excess_drift, double sigma, double l, double phi_w, double phi_ww);

// Largest |left - right| over interior breakpoints.
double continuity_check(const PiecewiseValue& pv);

}  // namespace lifegoal
