#include "subrisk/ruin.hpp"

#include "subrisk/errors.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace subrisk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate_rv_preconditions(const SubordinatedCPP& p, const RegularVariationSpec& spec) {
    const auto derived = rv_spec_of_subordinator(p.subordinator());
    if (!derived) {
        throw PreconditionError(errkind::not_regularly_varying,
                                "subordinator tail is not regularly varying "
                                "(requires compound Poisson jumps with a Pareto law)");
    }
    if (std::fabs(derived->index - spec.index) > 1e-9 * std::max(1.0, spec.index) ||
        std::fabs(derived->sv_constant - spec.sv_constant) >
            1e-9 * std::max(1.0, spec.sv_constant)) {
        throw PreconditionError(errkind::not_regularly_varying,
                                "regular-variation spec does not match the subordinator tail");
    }
    if (!p.subordinator().is_time_normalized()) {
        throw PreconditionError(errkind::not_normalized,
                                "regular-variation asymptotics require a time-normalized clock");
    }
    // F_X(x) in o(x^{-rho} L(x)): X light-tailed, or Pareto with strictly
    // heavier index than the clock.
    const auto& law = p.base().claim_law;
    if (law.is_heavy_tailed()) {
        const auto* par = std::get_if<Pareto>(&law.params());
        if (!par || !(par->shape > spec.index)) {
            throw PreconditionError(errkind::claim_tail_too_heavy,
                                    "claim tail is not negligible against the clock tail");
        }
    }
}

}  // namespace

RiskModel::RiskModel(double capital_, double premium_rate_, SubordinatedCPP claims_)
    : capital(capital_), premium_rate(premium_rate_), claims(std::move(claims_)) {
    if (!(capital >= 0.0) || !std::isfinite(capital)) {
        throw std::invalid_argument("capital: must be finite and >= 0");
    }
    if (!(premium_rate > 0.0) || !std::isfinite(premium_rate)) {
        throw std::invalid_argument("premium rate: must be a positive finite real");
    }
}

double RiskModel::expected_claims_per_unit_time() const {
    // E[Y_1] = lambda E[X] E[Lambda_1]; the clock mean is 1 when normalized,
    // recovering the c > lambda E[X] form of the net profit condition.
    return claims.base().rate * claims.base().claim_law.mean() *
           claims.subordinator().mean_lambda1();
}

bool RiskModel::net_profit_condition() const {
    return premium_rate > expected_claims_per_unit_time();
}

RegularVariationSpec::RegularVariationSpec(double index_, double sv_constant_)
    : index(index_), sv_constant(sv_constant_) {
    if (!(index > 1.0) || !std::isfinite(index)) {
        throw std::invalid_argument("regular variation index: must be > 1 (finite clock mean)");
    }
    if (!(sv_constant > 0.0) || !std::isfinite(sv_constant)) {
        throw std::invalid_argument("slowly varying constant: must be > 0");
    }
}

double adjustment_function(const RiskModel& m, double r) {
    const auto& p = m.claims;
    const double mx = p.base().claim_law.mgf(r);
    if (std::isinf(mx)) return kInf;
    const double psi = p.subordinator().laplace_exponent(p.base().rate * (1.0 - mx));
    if (std::isinf(psi) && psi < 0.0) return kInf;
    return -psi - m.premium_rate * r;
}

AdjustmentResult solve_adjustment(const RiskModel& m, double bracket_start) {
    if (!(bracket_start > 0.0)) {
        throw std::invalid_argument("bracket_start: must be > 0");
    }
    if (!m.claims.base().claim_law.has_finite_mean() || !m.net_profit_condition()) {
        throw PreconditionError(errkind::net_profit_violated,
                                "net profit condition c > lambda E[X] does not hold");
    }
    const auto cls = m.claims.classify_y_tail();
    if (cls.tail == SubordinatedCPP::TailClass::heavy) {
        throw PreconditionError(errkind::heavy_tail,
                                "no adjustment coefficient: jump sizes are heavy-tailed (" +
                                    cls.reason + ")");
    }

    // Theta is convex with Theta(0) = 0 and negative slope at 0 under the net
    // profit condition, so the first sign change brackets the unique root.
    double lo = 0.0;
    double flo = 0.0;
    double hi = bracket_start;
    double fhi = adjustment_function(m, hi);
    int expansions = 0;
    while (fhi <= 0.0 && expansions++ < 200) {
        lo = hi;
        flo = fhi;
        hi *= 2.0;
        fhi = adjustment_function(m, hi);
        if (hi > 1e15) break;
    }
    if (!(fhi > 0.0)) {
        throw PreconditionError(errkind::no_root,
                                "adjustment function stays nonpositive up to the MGF boundary");
    }
    const double bracket_lo = lo;
    const double bracket_hi = hi;

    // Hybrid refinement: secant when it stays inside the bracket, bisection
    // on alternate steps to rule out one-sided stalls.
    for (int iter = 0; iter < 300 && (hi - lo) > 1e-16 * std::max(1.0, hi); ++iter) {
        double mid;
        if (iter % 2 == 0 && std::isfinite(fhi) && fhi != flo) {
            mid = hi - fhi * (hi - lo) / (fhi - flo);
            if (!(mid > lo && mid < hi)) mid = 0.5 * (lo + hi);
        } else {
            mid = 0.5 * (lo + hi);
        }
        const double f = adjustment_function(m, mid);
        if (f <= 0.0) {
            lo = mid;
            flo = f;
        } else {
            hi = mid;
            fhi = f;
        }
    }

    const double root = lo;
    const double residual = flo;
    // A residual still bounded away from zero at a machine-tight bracket
    // means the function jumps across the boundary without crossing.
    if (!(std::fabs(residual) < 1e-5 * std::max(1.0, m.premium_rate))) {
        throw PreconditionError(errkind::no_root,
                                "adjustment function does not cross zero before its "
                                "domain boundary");
    }

    // Eq.-(9)-style prefactor with the MGF derivative by central finite
    // difference on the closed-form M_Z, step scaled to the root.
    std::optional<double> prefactor;
    double h = 1e-6 * root;
    double mzp = m.claims.mgf_z(root + h);
    double mzm = m.claims.mgf_z(root - h);
    for (int guard = 0; !std::isfinite(mzp) && guard < 40; ++guard) {
        h *= 0.5;
        mzp = m.claims.mgf_z(root + h);
        mzm = m.claims.mgf_z(root - h);
    }
    if (std::isfinite(mzp) && std::isfinite(mzm)) {
        const double deriv = (mzp - mzm) / (2.0 * h);
        const double denom = m.claims.effective_rate() * deriv - m.premium_rate;
        if (std::isfinite(denom) && denom > 0.0) {
            prefactor = (m.premium_rate - m.expected_claims_per_unit_time()) / denom;
        }
    }

    return AdjustmentResult{root, bracket_lo, bracket_hi, residual, prefactor};
}

double cl_asymptotic_ruin(const RiskModel& m, const AdjustmentResult& a, double u) {
    (void)m;
    if (!a.asymptotic_prefactor) {
        throw PreconditionError(errkind::prefactor_undefined,
                                "asymptotic prefactor undefined: M_Z' unavailable at the root");
    }
    return *a.asymptotic_prefactor * std::exp(-a.coefficient * u);
}

double subexp_tail_equivalence(const SubordinatedCPP& p, double x, bool declared_subexponential) {
    if (p.subordinator().lambda1_heavy_tailed()) {
        throw PreconditionError(errkind::heavy_tail,
                                "tail equivalence requires a light-tailed subordinator");
    }
    if (!p.subordinator().is_time_normalized()) {
        throw PreconditionError(errkind::not_normalized,
                                "tail equivalence requires a time-normalized clock");
    }
    if (!declared_subexponential && !p.base().claim_law.is_subexponential()) {
        throw PreconditionError(errkind::not_subexponential,
                                "claim law is not subexponential (and not declared so)");
    }
    return p.base().rate / p.effective_rate() * p.base().claim_law.tail(x);
}

std::optional<RegularVariationSpec> rv_spec_of_subordinator(const Subordinator& s) {
    const auto* cp = std::get_if<CompoundPoissonJumps>(&s.jump_part());
    if (!cp) return std::nullopt;
    const auto* par = std::get_if<Pareto>(&cp->jump_law.params());
    if (!par || !(par->shape > 1.0)) return std::nullopt;
    return RegularVariationSpec(par->shape, cp->rate * std::pow(par->scale, par->shape));
}

double rv_tail_of_z(const SubordinatedCPP& p, const RegularVariationSpec& spec, double z) {
    validate_rv_preconditions(p, spec);
    const double lam_mean = p.base().rate * p.base().claim_law.mean();
    return std::pow(lam_mean, spec.index) / p.effective_rate() * std::pow(z, -spec.index) *
           spec.sv_constant;
}

double karamata_ruin_asymptotic(const RiskModel& m, const RegularVariationSpec& spec, double u) {
    if (!m.claims.base().claim_law.has_finite_mean() || !m.net_profit_condition()) {
        throw PreconditionError(errkind::net_profit_violated,
                                "net profit condition c > lambda E[X] does not hold");
    }
    validate_rv_preconditions(m.claims, spec);
    const double lam_mean = m.expected_claims_per_unit_time();
    return 1.0 / (m.premium_rate - lam_mean) / (spec.index - 1.0) *
           std::pow(lam_mean, spec.index) * std::pow(u, 1.0 - spec.index) * spec.sv_constant;
}

}  // namespace subrisk
