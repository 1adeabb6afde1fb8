#include "subrisk/subordinated.hpp"

#include "subrisk/errors.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace subrisk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Poisson(m) conditioned on N >= 1, sampled by inversion restricted to n >= 1.
long long truncated_poisson_geq1(double m, RandomSource& rng) {
    if (m > 30.0) {
        // P[N = 0] < 1e-13: conditioning is numerically vacuous
        std::poisson_distribution<long long> pd(m);
        long long n;
        do {
            n = pd(rng);
        } while (n == 0);
        return n;
    }
    const double mass = -std::expm1(-m);  // P[N >= 1]
    const double u = uniform01(rng) * mass;
    double p = std::exp(-m);  // running P[N = n], starting at n = 0
    double cum = 0.0;
    long long n = 0;
    do {
        ++n;
        p *= m / static_cast<double>(n);
        cum += p;
    } while (cum < u && n < 100000);
    return n;
}

}  // namespace

BaseCPP::BaseCPP(double rate_, ClaimDistribution claim_law_)
    : rate(rate_), claim_law(std::move(claim_law_)) {
    if (!(rate > 0.0) || !std::isfinite(rate)) {
        throw std::invalid_argument("base claim rate: must be a positive finite real");
    }
}

SubordinatedCPP::SubordinatedCPP(BaseCPP base, Subordinator sub)
    : base_(std::move(base)),
      sub_(std::move(sub)),
      effective_rate_(sub_.laplace_exponent(base_.rate)) {}

SubordinatedCPP::MixtureWeights SubordinatedCPP::weights_unchecked() const {
    if (effective_rate_ == 0.0) return {1.0, 0.0};  // degenerate zero clock
    const double single = sub_.drift() * base_.rate / effective_rate_;
    return {single, 1.0 - single};
}

SubordinatedCPP::MixtureWeights SubordinatedCPP::z_mixture_weights() const {
    if (!sub_.finite_activity()) {
        throw PreconditionError(errkind::infinite_activity,
                                "mixture weights require a finite-activity subordinator");
    }
    const auto check = sub_.check_time_normalized();
    if (!check.pass) {
        throw PreconditionError(errkind::not_normalized,
                                "subordinator is not time-normalized (|E[Lambda_1] - 1| = " +
                                    std::to_string(check.deviation) + ")");
    }
    return weights_unchecked();
}

double SubordinatedCPP::sample_z(RandomSource& rng, ZSampleDiagnostics* diag) const {
    if (!sub_.finite_activity()) {
        throw PreconditionError(
            errkind::infinite_activity,
            "exact Z sampling is unsupported for infinite-activity subordinators; "
            "use path simulation");
    }
    const auto w = weights_unchecked();
    if (w.single >= 1.0) {
        if (diag) diag->singles++;
        return base_.claim_law.sample(rng);
    }
    if (uniform01(rng) < w.single) {
        if (diag) diag->singles++;
        return base_.claim_law.sample(rng);
    }
    // Cluster: duration from the tilted jump measure (1 - e^{-lambda t}) nu(dt),
    // sampled by rejection from the jump law; then a Poisson(lambda t) number
    // of base claims conditioned on at least one.
    const auto& cp = std::get<CompoundPoissonJumps>(sub_.jump_part());
    double t = 0.0;
    for (;;) {
        t = cp.jump_law.sample(rng);
        if (diag) diag->proposals++;
        if (uniform01(rng) < -std::expm1(-base_.rate * t)) {
            if (diag) diag->accepts++;
            break;
        }
    }
    const long long n = truncated_poisson_geq1(base_.rate * t, rng);
    double total = 0.0;
    for (long long i = 0; i < n; ++i) total += base_.claim_law.sample(rng);
    if (diag) diag->clusters++;
    return total;
}

double SubordinatedCPP::mgf_z(double r) const {
    const double mx = base_.claim_law.mgf(r);
    if (std::isinf(mx)) return kInf;
    const double arg = base_.rate * (1.0 - mx);
    const double psi = sub_.laplace_exponent(arg);
    if (std::isinf(psi) && psi < 0.0) return kInf;
    return 1.0 - psi / effective_rate_;
}

double SubordinatedCPP::mean_z() const {
    // E[Z] = E[Y_1] / psi(lambda) with E[Y_1] = lambda E[X] E[Lambda_1];
    // the clock mean is 1 under time normalization.
    return base_.rate * base_.claim_law.mean() * sub_.mean_lambda1() / effective_rate_;
}

double SubordinatedCPP::laplace_y1(double u) const {
    if (!(u >= 0.0)) throw std::invalid_argument("laplace_y1: u must be >= 0");
    const double lx = base_.claim_law.mgf(-u);
    return std::exp(-sub_.laplace_exponent(base_.rate * (1.0 - lx)));
}

SubordinatedCPP::TailEstimate SubordinatedCPP::tail_z_mc(double x, std::uint64_t n,
                                                         RandomSource& rng) const {
    if (n == 0) throw std::invalid_argument("tail_z_mc: n must be >= 1");
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
        if (sample_z(rng) > x) ++hits;
    }
    const double p = static_cast<double>(hits) / static_cast<double>(n);
    return TailEstimate{p, std::sqrt(p * (1.0 - p) / static_cast<double>(n))};
}

SubordinatedCPP::TailClassification SubordinatedCPP::classify_y_tail() const {
    const bool claims_heavy = base_.claim_law.is_heavy_tailed();
    const bool sub_heavy = sub_.lambda1_heavy_tailed();
    if (!claims_heavy && !sub_heavy) return {TailClass::light, "none"};
    if (claims_heavy && sub_heavy) return {TailClass::heavy, "claims+subordinator"};
    return {TailClass::heavy, claims_heavy ? "claims" : "subordinator"};
}

}  // namespace subrisk
