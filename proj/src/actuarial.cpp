#include "lifegoal/actuarial.hpp"

#include <cmath>
#include <string>

#include "lifegoal/errors.hpp"

namespace lifegoal {

void ForceParams::validate() const {
  if (!(r > 0.0) || !std::isfinite(r)) throw InvalidParameter("force of interest r must be > 0");
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw InvalidParameter("force of mortality lambda must be > 0");
  if (!(theta >= 0.0) || !std::isfinite(theta)) throw InvalidParameter("risk loading theta must be >= 0");
}

void CoverageWindow::validate() const {
  if (!(m >= 0.0) || !std::isfinite(m)) throw InvalidParameter("deferral m must be >= 0");
  if (n && (!(*n > 0.0) || !std::isfinite(*n)))
    throw InvalidParameter("coverage length n must be > 0 (omit it for whole life)");
}

double CoverageWindow::discount_to_end(double rate) const {
  if (infinite()) return 0.0;
  return std::exp(-rate * (m + *n));
}

double CoverageWindow::decay_over_term(double rate) const {
  if (infinite()) return 0.0;
  return std::exp(-rate * *n);
}

double apv_deferred_term(const ForceParams& fp, const CoverageWindow& cw) {
  fp.validate();
  cw.validate();
  const double k = fp.r + fp.lambda;
  return fp.lambda / k * (std::exp(-k * cw.m) - cw.discount_to_end(k));
}

double apv_pure_endowment(const ForceParams& fp, double m) {
  fp.validate();
  if (!(m >= 0.0)) throw InvalidParameter("deferral m must be >= 0");
  return std::exp(-(fp.r + fp.lambda) * m);
}

double annuity_endowment(const ForceParams& fp, double m) {
  fp.validate();
  if (!(m >= 0.0)) throw InvalidParameter("deferral m must be >= 0");
  if (m == 0.0) throw DegenerateAnnuity("annuity over a zero-length payment period");
  const double k = fp.r + fp.lambda;
  if (std::isinf(m)) return 1.0 / k;
  return -std::expm1(-k * m) / k;
}

const char* to_string(PremiumBasis basis) {
  switch (basis) {
    case PremiumBasis::deferral_annuity: return "deferral_annuity";
    case PremiumBasis::coverage_fallback: return "coverage_fallback";
    case PremiumBasis::user_supplied: return "user_supplied";
  }
  return "unknown";
}

PremiumRate PremiumRate::user_supplied(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate)) throw InvalidParameter("premium rate must be > 0");
  return {rate, PremiumBasis::user_supplied};
}

SinglePremium premium_single_term(const ForceParams& fp, const CoverageWindow& cw) {
  const double k = (1.0 + fp.theta) * apv_deferred_term(fp, cw);
  return {k, k < std::exp(-fp.r * cw.m)};
}

PremiumRate premium_rate_term(const ForceParams& fp, const CoverageWindow& cw) {
  const double loaded = 1.0 + fp.theta;
  if (cw.m > 0.0) {
    return {loaded * apv_deferred_term(fp, cw) / annuity_endowment(fp, cw.m),
            PremiumBasis::deferral_annuity};
  }
  // Zero deferral: pay over the coverage period instead.
  fp.validate();
  cw.validate();
  const double k = fp.r + fp.lambda;
  const double payment_years = cw.infinite() ? 1.0 / k : -std::expm1(-k * *cw.n) / k;
  return {loaded * apv_deferred_term(fp, cw) / payment_years, PremiumBasis::coverage_fallback};
}

SinglePremium premium_single_pure_endow(const ForceParams& fp, const CoverageWindow& cw) {
  fp.validate();
  cw.validate();
  if (cw.infinite()) throw InvalidParameter("pure endowment needs a finite term n");
  const double rp = (1.0 + fp.theta) * std::exp(-(cw.m + *cw.n) * (fp.r + fp.lambda));
  return {rp, rp < std::exp(-fp.r * cw.m)};
}

double deferred_temporary_annuity(const ForceParams& fp, const CoverageWindow& cw) {
  fp.validate();
  cw.validate();
  const double k = fp.r + fp.lambda;
  return (std::exp(-k * cw.m) - cw.discount_to_end(k)) / k;
}

PremiumRate premium_rate_pure_endow(const ForceParams& fp, const CoverageWindow& cw) {
  if (cw.infinite()) throw InvalidParameter("pure endowment needs a finite term n");
  const double numerator = deferred_temporary_annuity(fp, cw);
  return {(1.0 + fp.theta) * numerator / annuity_endowment(fp, cw.m),
          PremiumBasis::deferral_annuity};
}

bool continuous_premium_feasible(double r, double m, double rate) {
  const double loaded = rate + r * rate;
  return loaded / (r + loaded) < std::exp(-r * m);
}

}  // namespace lifegoal
