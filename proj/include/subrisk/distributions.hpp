#pragma once

#include "subrisk/random.hpp"

#include <string>
#include <variant>

namespace subrisk {

// Positive jump-size laws, used both for claim sizes X and for the jumps K
// of a compound Poisson subordinator.

struct Exponential {
    double rate;  // mean 1/rate, support (0, inf)
};

struct Pareto {
    double scale;  // support [scale, inf), P[X > x] = (scale/x)^shape
    double shape;
};

struct GammaLaw {
    double shape;
    double rate;  // mean shape/rate
};

struct Deterministic {
    double value;  // point mass at value > 0
};

class ClaimDistribution {
public:
    using Params = std::variant<Exponential, Pareto, GammaLaw, Deterministic>;

    explicit ClaimDistribution(Params params);

    static ClaimDistribution exponential(double rate);
    static ClaimDistribution pareto(double scale, double shape);
    static ClaimDistribution gamma(double shape, double rate);
    static ClaimDistribution deterministic(double value);

    double sample(RandomSource& rng) const;

    // P[X > x] for x >= 0, exact closed form.
    double tail(double x) const;
    double cdf(double x) const;

    // E[X]; +inf for Pareto with shape <= 1.
    double mean() const;
    bool has_finite_mean() const;

    // E[e^{rX}]; +inf outside the finite domain (r >= mgf_sup()). Infinity is
    // a value here, not an error.
    double mgf(double r) const;

    // Supremum of the finite MGF domain: rate for exponential and gamma,
    // +inf for deterministic, 0 for Pareto.
    double mgf_sup() const;

    // Heavy-tailed = no positive exponential moment, i.e. mgf_sup() == 0.
    bool is_heavy_tailed() const;

    // Built-in subexponential-class membership (true for Pareto). Callers may
    // override by declaration where a config asserts membership.
    bool is_subexponential() const;

    const Params& params() const { return params_; }
    std::string describe() const;

private:
    Params params_;
};

}  // namespace subrisk
