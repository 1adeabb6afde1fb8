#pragma once

#include "subrisk/distributions.hpp"
#include "subrisk/random.hpp"
#include "subrisk/subordinator.hpp"

#include <cstdint>
#include <string>

namespace subrisk {

// The base claims process: claims at Poisson epochs with i.i.d. sizes X.
struct BaseCPP {
    double rate;  // claim intensity lambda > 0
    ClaimDistribution claim_law;

    BaseCPP(double rate_, ClaimDistribution claim_law_);
};

// Diagnostics collected by the exact Z sampler (rejection acceptance rate).
struct ZSampleDiagnostics {
    std::uint64_t singles = 0;
    std::uint64_t clusters = 0;
    std::uint64_t proposals = 0;
    std::uint64_t accepts = 0;

    double acceptance_rate() const {
        return proposals == 0 ? 1.0 : static_cast<double>(accepts) / static_cast<double>(proposals);
    }
};

// The time-changed claims process in its compound Poisson representation:
// jumps arrive at rate psi(lambda) with i.i.d. sizes Z, where Z mixes single
// base claims (drift part of the clock) with clusters of base claims swept
// together by a clock jump.
class SubordinatedCPP {
public:
    SubordinatedCPP(BaseCPP base, Subordinator sub);

    const BaseCPP& base() const { return base_; }
    const Subordinator& subordinator() const { return sub_; }

    // psi(lambda): the intensity of the representation.
    double effective_rate() const { return effective_rate_; }

    struct MixtureWeights {
        double single;   // drift * lambda / psi(lambda)
        double cluster;  // 1 - single
    };

    // Requires a time-normalized, finite-activity subordinator.
    MixtureWeights z_mixture_weights() const;

    // Exact draw of Z. Requires finite activity; throws
    // PreconditionError(infinite_activity) for the gamma subordinator.
    double sample_z(RandomSource& rng, ZSampleDiagnostics* diag = nullptr) const;

    // Closed-form moment-generating function of Z:
    //   M_Z(r) = 1 - psi(lambda [1 - M_X(r)]) / psi(lambda),
    // +inf outside its domain.
    double mgf_z(double r) const;

    // E[Z] = lambda E[X] / psi(lambda); +inf for infinite-mean claims.
    double mean_z() const;

    // Laplace transform of Y_1: exp(-psi(lambda [1 - L_X(u)])), u >= 0.
    double laplace_y1(double u) const;

    struct TailEstimate {
        double probability;
        double std_error;
    };

    // Empirical P[Z > x] from n exact draws, with binomial standard error.
    TailEstimate tail_z_mc(double x, std::uint64_t n, RandomSource& rng) const;

    enum class TailClass { light, heavy };

    struct TailClassification {
        TailClass tail;
        std::string reason;  // "claims", "subordinator", "claims+subordinator", "none"
    };

    // Structural classification: Y is heavy-tailed iff X or Lambda_1 is.
    TailClassification classify_y_tail() const;

private:
    MixtureWeights weights_unchecked() const;

    BaseCPP base_;
    Subordinator sub_;
    double effective_rate_;
};

}  // namespace subrisk
