#pragma once

#include "subrisk/distributions.hpp"
#include "subrisk/random.hpp"

#include <variant>
#include <vector>

namespace subrisk {

// Levy subordinators: nonnegative drift plus an independent nonnegative jump
// part, used as the random clock of the subordinated claims process.

struct NoJumps {};

struct CompoundPoissonJumps {
    double rate;                 // jump intensity
    ClaimDistribution jump_law;  // law of a single jump K
};

struct GammaJumps {
    double shape;  // increment over dt is Gamma(shape*dt, rate)
    double rate;
};

struct JumpEvent {
    double time;
    double size;
};

class Subordinator {
public:
    using JumpPart = std::variant<NoJumps, CompoundPoissonJumps, GammaJumps>;

    Subordinator(double drift, JumpPart jumps);

    static Subordinator pure_drift(double drift);
    static Subordinator compound_poisson(double drift, double rate, ClaimDistribution jump_law);
    static Subordinator gamma(double drift, double shape, double rate);

    double drift() const { return drift_; }
    const JumpPart& jump_part() const { return jumps_; }

    bool has_jumps() const;
    // Compound Poisson and pure drift have finitely many jumps per horizon;
    // the gamma subordinator does not.
    bool finite_activity() const;

    // Laplace exponent psi(u) = drift*u + integral of (1 - e^{-ux}) against
    // the jump measure, in closed form per family. Extended to negative u on
    // its natural domain; returns -inf below laplace_domain_inf().
    double laplace_exponent(double u) const;

    // Infimum of arguments where the Laplace exponent is finite.
    double laplace_domain_inf() const;

    // E[Lambda_1]; +inf when the jump law has infinite mean.
    double mean_lambda1() const;

    struct NormalizationCheck {
        bool pass;
        double deviation;  // |E[Lambda_1] - 1|
    };

    // Throws PreconditionError(not_normalizable) when E[Lambda_1] is infinite.
    NormalizationCheck check_time_normalized(double tol = 1e-12) const;
    bool is_time_normalized(double tol = 1e-12) const;

    // Lambda_1 has no positive exponential moment iff the jump law is
    // heavy-tailed (finite-activity case); gamma and pure drift are light.
    bool lambda1_heavy_tailed() const;

    // Exact draw of Lambda_{t+dt} - Lambda_t.
    double sample_increment(double dt, RandomSource& rng) const;

    // Jump epochs and sizes on [0, horizon], sorted by time. Throws
    // PreconditionError(infinite_activity) for the gamma subordinator.
    std::vector<JumpEvent> sample_jump_times_and_sizes(double horizon, RandomSource& rng) const;

private:
    double drift_;
    JumpPart jumps_;
};

}  // namespace subrisk
