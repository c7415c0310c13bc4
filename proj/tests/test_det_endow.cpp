#include <doctest.h>

#include <cmath>
#include <random>

#include "lifegoal/det_endow.hpp"
#include "lifegoal/det_life.hpp"
#include "lifegoal/errors.hpp"
#include "support.hpp"

using namespace lifegoal;

namespace {

DetScenario single(double r, double lambda, double theta, double m, double n, double f, double D,
                   std::optional<double> R = std::nullopt) {
  return DetScenario::make(Product::pure_endowment, PremiumMode::single, {r, lambda, theta}, {m, n}, f, D,
                           R);
}

DetScenario continuous(double r, double lambda, double m, double n, double f, double M) {
  return DetScenario::make(Product::pure_endowment, PremiumMode::continuous, {r, lambda, 0.0}, {m, n}, f,
                           0.0, M);
}

// Single-premium curve with explicit weights: `first` multiplies the branch
// below the premium level, `second` the power term above it.
double kernel_single(double first, double second, double premium, double r, double lambda, double m,
                     double gap, double w) {
  const double q = premium * gap;
  const double mid = (std::exp(-r * m) + premium) * gap;
  const double ideal = (premium + 1.0) * gap;
  const double b = lambda / r;
  if (w >= ideal) return 1.0;
  if (w < q) return std::pow(w / q, b) * first;
  const double P = std::pow((w - q) / gap, b);
  if (w < mid) return first + second * P;
  return (1.0 + second) * P - second;
}

}  // namespace

TEST_CASE("value_single_endow") {
  const DetScenario s = single(0.04, 0.02, 0.1, 5.0, 10.0, 100.0, 20.0);
  const DetThresholds t = thresholds_single_endow(s);
  CHECK(value_single_endow(s, 0.0) == 0.0);
  CHECK(std::abs(value_single_endow(s, t.quasi) - std::exp(-0.3)) < 1e-12);
  CHECK(value_single_endow(s, t.ideal) == 1.0);
  CHECK(det_residuals(s, 1e-10).pass);
  CHECK(std::abs(t.quasi - 1.1 * std::exp(-0.9) * 80.0) < 1e-12);
}

TEST_CASE("action_single_endow") {
  const DetScenario s = single(0.04, 0.02, 0.1, 5.0, 10.0, 100.0, 20.0);
  const double ws = thresholds_single_endow(s).ideal;
  CHECK(action_single_endow(s, 0.5 * ws).kind == PurchaseKind::none);
  CHECK(action_single_endow(s, ws).buy_amount == 80.0);
  CHECK(action_single_endow(s, 3.0 * ws).buy_amount == 80.0);
}

TEST_CASE("continuous endowment") {
  const DetScenario low = continuous(0.06, 0.03, 4.0, 15.0, 100.0, 0.02);
  const DetThresholds tl = thresholds_continuous_endow(low);
  CHECK(value_continuous_endow(low, 0.0) == 0.0);
  CHECK(std::abs(value_continuous_endow(low, tl.quasi) - std::exp(-0.57)) < 1e-12);
  CHECK(action_continuous_endow(low, 0.9 * tl.ideal).kind == PurchaseKind::none);
  CHECK(std::abs(action_continuous_endow(low, tl.ideal).buy_amount - 0.06 * 100.0 / 0.08) < 1e-12);
  CHECK(det_residuals(low, 1e-10).pass);

  const DetScenario high = continuous(0.05, 0.1, 1.0, 20.0, 100.0, 0.08);
  const DetThresholds th = thresholds_continuous_endow(high);
  const FreeBoundary fb = solve_w0_endow(high);
  REQUIRE(fb.root.has_value());
  CHECK(*th.free_boundary == *fb.root);
  CHECK(fb.residual < 1e-12);
  const PurchaseAction a = action_continuous_endow(high, 0.5 * *fb.root);
  CHECK(a.kind == PurchaseKind::buy_goal_minus_wealth);
  CHECK(a.buy_amount == doctest::Approx(100.0 - 0.5 * *fb.root));
  CHECK(det_residuals(high, 1e-10).pass);

  // Literal deferral-annuity rate with m = 0 has no annuity to spread over.
  CHECK_THROWS_AS(DetScenario::make(Product::pure_endowment, PremiumMode::continuous, {0.05, 0.05, 0.0},
                                    {0.0, 10.0}, 100.0),
                  DegenerateAnnuity);
  CHECK_THROWS_AS(DetScenario::make(Product::pure_endowment, PremiumMode::single, {0.05, 0.05, 0.0},
                                    {0.0, std::nullopt}, 100.0),
                  InvalidParameter);
}

TEST_CASE("duality with the term-life kernel") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const DetScenario e = testing_support::random_det(rng, Product::pure_endowment, PremiumMode::single);
    const double r = e.fp.r, lam = e.fp.lambda, m = e.cw.m;
    const double end = e.cw.discount_to_end(lam);
    const double window = std::exp(-lam * m) - end;
    const double w = thresholds_single_endow(e).ideal * U(rng);

    CHECK(std::abs(value_single_endow(e, w) - kernel_single(end, window, e.premium, r, lam, m, e.gap(), w)) <
          1e-14);

    // Same numbers through the term-life model: equal premium, weights swapped.
    const DetScenario l = DetScenario::make(Product::term_life, PremiumMode::single, e.fp, e.cw, e.f, e.D,
                                            e.premium);
    CHECK(std::abs(value_single(l, w) - kernel_single(window, end, e.premium, r, lam, m, e.gap(), w)) <
          1e-14);
  }
}

TEST_CASE("random scenarios: monotone, bounded, continuous") {
  std::mt19937_64 rng(22);
  for (PremiumMode mode : {PremiumMode::single, PremiumMode::continuous}) {
    for (int i = 0; i < 100; ++i) {
      const DetScenario s = testing_support::random_det(rng, Product::pure_endowment, mode);
      const DetCurve c = det_curve(s);
      CHECK(continuity_check(c.pv) < 1e-12);
      CHECK(residual_det(c.pv, s.fp.lambda, c.odes, 1e-10).pass);
      double prev = -1.0;
      for (int k = 0; k <= 400; ++k) {
        const double v = c.pv.value(c.thresholds.ideal * k / 400.0);
        CHECK(v >= prev - 1e-15);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0 + 1e-15);
        prev = v;
      }
    }
  }
}

TEST_CASE("m = 0 reduces to the two-branch forms") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const double r = 0.02 + 0.06 * U(rng);
    const double lambda = 0.01 + 0.08 * U(rng);
    const double n = 1.0 + 30.0 * U(rng);
    const DetScenario s = single(r, lambda, 0.2 * U(rng), 0.0, n, 100.0, 40.0 * U(rng));
    const double R = s.premium, gap = s.gap(), Rs = R * gap;
    const double en = std::exp(-lambda * n);
    const double w = (R + 1.0) * gap * U(rng);
    const double expect = w < Rs ? std::pow(w / Rs, lambda / r) * en
                                 : en + (1.0 - en) * std::pow((w - Rs) / gap, lambda / r);
    CHECK(std::abs(value_single_endow(s, w) - expect) < 1e-12);

    // Continuous, lambda <= r.
    const double lam2 = r * (0.2 + 0.8 * U(rng));
    const double M = 0.01 + 0.1 * U(rng);
    const DetScenario c = continuous(r, lam2, 0.0, n, 100.0, M);
    const double Ms = M * 100.0 / (r + M);
    const double ws = (r + M + r * M) * 100.0 / ((r + M) * (r + 1.0));
    const double en2 = std::exp(-lam2 * n);
    const double wc = ws * U(rng);
    const double expect_c = wc < Ms ? std::pow(wc / Ms, lam2 / r) * en2
                                    : en2 + (1.0 - en2) * std::pow((wc - Ms) / (ws - Ms), lam2 / r);
    CHECK(std::abs(value_continuous_endow(c, wc) - expect_c) < 1e-12);
  }
}
