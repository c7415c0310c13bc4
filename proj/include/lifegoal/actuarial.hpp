#pragma once

// Actuarial present values and premiums under a constant force of interest
// r and a constant force of mortality lambda.

#include <optional>

namespace lifegoal {

struct ForceParams {
  double r = 0.0;       // force of interest, per year
  double lambda = 0.0;  // force of mortality, per year
  double theta = 0.0;   // proportional risk loading

  void validate() const;
};

// Coverage starts m years after purchase and lasts n years. A missing n
// stands for whole-life coverage.
struct CoverageWindow {
  double m = 0.0;
  std::optional<double> n;

  static CoverageWindow whole_life(double deferral) { return {deferral, std::nullopt}; }
  static CoverageWindow term(double deferral, double years) { return {deferral, years}; }

  bool infinite() const { return !n.has_value(); }
  void validate() const;

  // exp(-rate * (m + n)); exactly 0 for whole-life coverage.
  double discount_to_end(double rate) const;
  // exp(-rate * n); exactly 0 for whole-life coverage.
  double decay_over_term(double rate) const;
};

double apv_deferred_term(const ForceParams& fp, const CoverageWindow& cw);
double apv_pure_endowment(const ForceParams& fp, double m);
// Continuous life annuity over the first m years; throws DegenerateAnnuity for m == 0.
double annuity_endowment(const ForceParams& fp, double m);

struct SinglePremium {
  double per_unit = 0.0;
  // premium < e^{-rm}; the deterministic value functions need it.
  bool feasible = false;
};

enum class PremiumBasis {
  deferral_annuity,   // premiums paid over the m-year deferral period
  coverage_fallback,  // m == 0: premiums paid over the coverage period
  user_supplied,
};

const char* to_string(PremiumBasis basis);

struct PremiumRate {
  double rate = 0.0;
  PremiumBasis basis = PremiumBasis::deferral_annuity;

  static PremiumRate user_supplied(double rate);
};

SinglePremium premium_single_term(const ForceParams& fp, const CoverageWindow& cw);
PremiumRate premium_rate_term(const ForceParams& fp, const CoverageWindow& cw);

SinglePremium premium_single_pure_endow(const ForceParams& fp, const CoverageWindow& cw);

// Numerator read literally as the deferred temporary annuity
// int_m^{m+n} e^{-(r+lambda)t} dt. Use PremiumRate::user_supplied for any
// other convention.
PremiumRate premium_rate_pure_endow(const ForceParams& fp, const CoverageWindow& cw);
double deferred_temporary_annuity(const ForceParams& fp, const CoverageWindow& cw);

// (M + rM) / (r + M + rM) < e^{-rm}, the restriction shared by every
// continuous-premium scenario.
bool continuous_premium_feasible(double r, double m, double rate);

}  // namespace lifegoal
