#pragma once

#include "subrisk/subordinated.hpp"

#include <optional>

namespace subrisk {

// Surplus process u + c t - Y_t. A pure-drift unit subordinator recovers the
// classical model with claims process C.
struct RiskModel {
    double capital;       // initial capital u >= 0
    double premium_rate;  // c > 0
    SubordinatedCPP claims;

    RiskModel(double capital_, double premium_rate_, SubordinatedCPP claims_);

    // E[Y_1] = lambda E[X] E[Lambda_1], which is lambda E[X] = psi(lambda) E[Z]
    // under time normalization.
    double expected_claims_per_unit_time() const;
    bool net_profit_condition() const;
};

struct AdjustmentResult {
    double coefficient;   // the unique positive root of the adjustment function
    double bracket_lo;    // sign-change bracket found by geometric expansion
    double bracket_hi;
    double residual;      // adjustment function value at the root, |...| < 1e-10
    // Cramer-Lundberg prefactor (c - lambda E[X]) / (psi(lambda) M_Z'(R) - c);
    // absent when the MGF derivative is unavailable at the root.
    std::optional<double> asymptotic_prefactor;
};

// Pareto-type regularly varying tail x^{-index} * sv_constant.
struct RegularVariationSpec {
    double index;        // rho > 1
    double sv_constant;  // L > 0 (slowly varying part restricted to constants)

    RegularVariationSpec(double index_, double sv_constant_);
};

// The adjustment function of the surplus process,
//   Theta(r) = -psi(lambda [1 - M_X(r)]) - c r,
// which reduces to lambda (M_X(r) - 1) - c r for the pure-drift clock.
// Returns +inf outside the MGF/Laplace-exponent domain.
double adjustment_function(const RiskModel& m, double r);

// Solves Theta(r) = 0 for the unique positive root by geometric bracket
// expansion from bracket_start followed by a hybrid secant/bisection refine.
// Throws PreconditionError: net_profit_violated, heavy_tail, or no_root.
AdjustmentResult solve_adjustment(const RiskModel& m, double bracket_start = 1e-8);

// prefactor * exp(-R u); requires a prefactor in `a`.
double cl_asymptotic_ruin(const RiskModel& m, const AdjustmentResult& a, double u);

// Tail-equivalence approximation P[Z > x] ~ (lambda / psi(lambda)) P[X > x],
// valid for subexponential X under a light-tailed normalized clock.
// Subexponential membership cannot be verified for an arbitrary law; it is
// the built-in attribute of the claim law or declared by the caller.
double subexp_tail_equivalence(const SubordinatedCPP& p, double x,
                               bool declared_subexponential = false);

// The regular-variation spec implied by a compound Poisson subordinator with
// Pareto jumps: P[Lambda_1 > x] ~ rate * (scale/x)^shape. Empty otherwise.
std::optional<RegularVariationSpec> rv_spec_of_subordinator(const Subordinator& s);

// Inherited tail of Z under a regularly varying clock:
//   (1/psi(lambda)) (lambda E[X])^rho z^{-rho} L.
double rv_tail_of_z(const SubordinatedCPP& p, const RegularVariationSpec& spec, double z);

// Karamata asymptotic of the ruin probability:
//   (1/(c - lambda E[X])) (1/(rho-1)) (lambda E[X])^rho u^{1-rho} L.
double karamata_ruin_asymptotic(const RiskModel& m, const RegularVariationSpec& spec, double u);

}  // namespace subrisk
