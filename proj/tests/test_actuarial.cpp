#include <doctest.h>

#include <cmath>
#include <random>

#include "lifegoal/actuarial.hpp"
#include "lifegoal/errors.hpp"
#include "support.hpp"

using namespace lifegoal;
using testing_support::integrate;

namespace {

double quad_term(const ForceParams& fp, double m, double n) {
  return integrate([&](double t) { return fp.lambda * std::exp(-(fp.r + fp.lambda) * t); }, m, m + n);
}

}  // namespace

TEST_CASE("apv_deferred_term") {
  CHECK(apv_deferred_term({0.05, 0.05, 0.0}, CoverageWindow::whole_life(0.0)) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(apv_deferred_term({0.05, 0.05, 0.0}, CoverageWindow::term(1e4, 10.0)) < 1e-300);

  const ForceParams fp{0.04, 0.02, 0.0};
  CHECK(std::abs(apv_deferred_term(fp, CoverageWindow::term(5.0, 10.0)) - quad_term(fp, 5.0, 10.0)) < 1e-12);
}

TEST_CASE("apv_pure_endowment") {
  CHECK(apv_pure_endowment({0.05, 0.05, 0.0}, 0.0) == 1.0);
  CHECK(apv_pure_endowment({0.05, 0.05, 0.0}, 10.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));

  const ForceParams fp{0.03, 0.01, 0.0};
  const double m = 7.0;
  const double quad = integrate(
      [&](double t) { return fp.lambda * std::exp(-fp.r * m) * std::exp(-fp.lambda * t); }, m,
      m + 40.0 / fp.lambda);
  CHECK(std::abs(apv_pure_endowment(fp, m) - quad) < 1e-12);
}

TEST_CASE("annuity_endowment") {
  const ForceParams fp{0.05, 0.05, 0.0};
  CHECK(annuity_endowment(fp, INFINITY) == doctest::Approx(10.0).epsilon(1e-15));
  CHECK_THROWS_AS(annuity_endowment(fp, 0.0), DegenerateAnnuity);

  const ForceParams g{0.04, 0.02, 0.0};
  const double closed = (1.0 - std::exp(-0.3)) / 0.06;
  CHECK(std::abs(annuity_endowment(g, 5.0) - closed) < 1e-12);
  const double quad = integrate([&](double t) { return std::exp(-0.06 * t); }, 0.0, 5.0);
  CHECK(std::abs(annuity_endowment(g, 5.0) - quad) < 1e-12);
  // (1 - term APV over [0, m] - pure endowment APV) / r
  const double via_identity =
      (1.0 - apv_deferred_term(g, CoverageWindow::term(0.0, 5.0)) - apv_pure_endowment(g, 5.0)) / g.r;
  CHECK(std::abs(annuity_endowment(g, 5.0) - via_identity) < 1e-12);
}

TEST_CASE("premium_single_term") {
  const SinglePremium k = premium_single_term({0.05, 0.05, 0.0}, CoverageWindow::whole_life(0.0));
  CHECK(k.per_unit == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(k.feasible);

  const CoverageWindow cw = CoverageWindow::term(5.0, 10.0);
  const double base = premium_single_term({0.04, 0.02, 0.0}, cw).per_unit;
  CHECK(premium_single_term({0.04, 0.02, 0.2}, cw).per_unit / base == doctest::Approx(1.2).epsilon(1e-15));
  const ForceParams fp{0.04, 0.02, 0.1};
  CHECK(std::abs(premium_single_term(fp, cw).per_unit - 1.1 * quad_term(fp, 5.0, 10.0)) < 1e-12);

  // Heavy loading pushes K past e^{-rm}: reported, not thrown.
  const SinglePremium heavy = premium_single_term({0.01, 0.5, 2.0}, CoverageWindow::whole_life(0.0));
  CHECK_FALSE(heavy.feasible);
}

TEST_CASE("premium_rate_term") {
  const PremiumRate h = premium_rate_term({0.05, 0.05, 0.0}, CoverageWindow::whole_life(0.0));
  CHECK(h.rate == doctest::Approx(0.05).epsilon(1e-14));
  CHECK(h.basis == PremiumBasis::coverage_fallback);

  const CoverageWindow cw = CoverageWindow::term(5.0, 10.0);
  const PremiumRate base = premium_rate_term({0.04, 0.02, 0.0}, cw);
  CHECK(base.basis == PremiumBasis::deferral_annuity);
  CHECK(premium_rate_term({0.04, 0.02, 0.5}, cw).rate / base.rate == doctest::Approx(1.5).epsilon(1e-15));
  const ForceParams fp{0.04, 0.02, 0.0};
  CHECK(std::abs(base.rate - apv_deferred_term(fp, cw) / annuity_endowment(fp, 5.0)) < 1e-12);

  CHECK(PremiumRate::user_supplied(0.07).basis == PremiumBasis::user_supplied);
  CHECK_THROWS_AS(PremiumRate::user_supplied(-1.0), InvalidParameter);
}

TEST_CASE("premium_single_pure_endow") {
  CHECK(premium_single_pure_endow({0.05, 0.05, 0.0}, CoverageWindow::term(0.0, 1e-14)).per_unit ==
        doctest::Approx(1.0).epsilon(1e-12));
  CHECK(premium_single_pure_endow({0.05, 0.05, 0.0}, CoverageWindow::term(5.0, 5.0)).per_unit ==
        doctest::Approx(std::exp(-1.0)).epsilon(1e-15));

  const ForceParams fp{0.03, 0.02, 0.1};
  const double R = premium_single_pure_endow(fp, CoverageWindow::term(2.0, 8.0)).per_unit;
  CHECK(std::abs(R - 1.1 * std::exp(-0.5)) < 1e-15);
  CHECK(std::abs(R - 1.1 * apv_pure_endowment(fp, 10.0)) < 1e-15);

  CHECK_THROWS_AS(premium_single_pure_endow(fp, CoverageWindow::whole_life(2.0)), InvalidParameter);
}

TEST_CASE("premium_rate_pure_endow") {
  const ForceParams fp{0.05, 0.05, 0.0};
  const CoverageWindow cw = CoverageWindow::term(5.0, 5.0);
  const double quad = integrate([](double t) { return std::exp(-0.1 * t); }, 5.0, 10.0);
  const double closed = (std::exp(-0.5) - std::exp(-1.0)) / 0.1;
  CHECK(std::abs(deferred_temporary_annuity(fp, cw) - quad) < 1e-12);
  CHECK(std::abs(deferred_temporary_annuity(fp, cw) - closed) < 1e-12);

  const double base = premium_rate_pure_endow(fp, cw).rate;
  CHECK(premium_rate_pure_endow({0.05, 0.05, 0.3}, cw).rate / base == doctest::Approx(1.3).epsilon(1e-15));
  CHECK_THROWS_AS(premium_rate_pure_endow(fp, CoverageWindow::term(0.0, 5.0)), DegenerateAnnuity);
}

TEST_CASE("invalid parameters are rejected") {
  CHECK_THROWS_AS(apv_deferred_term({0.0, 0.05, 0.0}, CoverageWindow::term(0, 1)), InvalidParameter);
  CHECK_THROWS_AS(apv_deferred_term({0.05, -1.0, 0.0}, CoverageWindow::term(0, 1)), InvalidParameter);
  CHECK_THROWS_AS(apv_deferred_term({0.05, 0.05, -0.1}, CoverageWindow::term(0, 1)), InvalidParameter);
  CHECK_THROWS_AS(apv_deferred_term({0.05, 0.05, 0.0}, CoverageWindow::term(-1, 1)), InvalidParameter);
  CHECK_THROWS_AS(apv_deferred_term({0.05, 0.05, 0.0}, CoverageWindow::term(0, 0)), InvalidParameter);
}

TEST_CASE("properties on random parameters") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const ForceParams fp{0.005 + 0.1 * U(rng), 0.005 + 0.1 * U(rng), 0.5 * U(rng)};
    const ForceParams net{fp.r, fp.lambda, 0.0};
    const double m = 20.0 * U(rng);
    const double n = 0.5 + 30.0 * U(rng);
    const double dm = 0.1 + U(rng);

    const double base = apv_deferred_term(fp, CoverageWindow::term(m, n));
    CHECK(apv_deferred_term(fp, CoverageWindow::term(m + dm, n)) < base);
    CHECK(apv_deferred_term(fp, CoverageWindow::term(m, n + dm)) > base);

    const double split = apv_deferred_term(fp, CoverageWindow::term(m, n)) +
                         apv_deferred_term(fp, CoverageWindow::term(0.0, m > 0 ? m : 1e-300));
    CHECK(std::abs(split - apv_deferred_term(fp, CoverageWindow::term(0.0, m + n))) < 1e-12);

    const CoverageWindow cw = CoverageWindow::term(m > 0 ? m : 1.0, n);
    const double loaded = 1.0 + fp.theta;
    CHECK(premium_single_term(fp, cw).per_unit ==
          doctest::Approx(loaded * premium_single_term(net, cw).per_unit).epsilon(1e-14));
    CHECK(premium_rate_term(fp, cw).rate ==
          doctest::Approx(loaded * premium_rate_term(net, cw).rate).epsilon(1e-14));
    CHECK(premium_single_pure_endow(fp, cw).per_unit ==
          doctest::Approx(loaded * premium_single_pure_endow(net, cw).per_unit).epsilon(1e-14));
    CHECK(premium_rate_pure_endow(fp, cw).rate ==
          doctest::Approx(loaded * premium_rate_pure_endow(net, cw).rate).epsilon(1e-14));

    const double quad = quad_term(fp, cw.m, n);
    CHECK(std::abs(apv_deferred_term(fp, cw) - quad) <= 1e-10 * quad);
    const double ann = integrate([&](double t) { return std::exp(-(fp.r + fp.lambda) * t); }, 0.0, cw.m);
    CHECK(std::abs(annuity_endowment(fp, cw.m) - ann) <= 1e-10 * ann);
  }
}
