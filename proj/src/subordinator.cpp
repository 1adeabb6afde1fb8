#include "subrisk/subordinator.hpp"

#include "subrisk/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace subrisk {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

Subordinator::Subordinator(double drift, JumpPart jumps)
    : drift_(drift), jumps_(std::move(jumps)) {
    if (!(drift >= 0.0) || !std::isfinite(drift)) {
        throw std::invalid_argument("subordinator drift: must be finite and >= 0");
    }
    std::visit(
        [](const auto& j) {
            using T = std::decay_t<decltype(j)>;
            if constexpr (std::is_same_v<T, CompoundPoissonJumps>) {
                if (!(j.rate > 0.0) || !std::isfinite(j.rate)) {
                    throw std::invalid_argument("subordinator jump rate: must be > 0");
                }
            } else if constexpr (std::is_same_v<T, GammaJumps>) {
                if (!(j.shape > 0.0) || !std::isfinite(j.shape)) {
                    throw std::invalid_argument("gamma subordinator shape: must be > 0");
                }
                if (!(j.rate > 0.0) || !std::isfinite(j.rate)) {
                    throw std::invalid_argument("gamma subordinator rate: must be > 0");
                }
            }
        },
        jumps_);
}

Subordinator Subordinator::pure_drift(double drift) { return Subordinator(drift, NoJumps{}); }

Subordinator Subordinator::compound_poisson(double drift, double rate, ClaimDistribution jump_law) {
    return Subordinator(drift, CompoundPoissonJumps{rate, std::move(jump_law)});
}

Subordinator Subordinator::gamma(double drift, double shape, double rate) {
    return Subordinator(drift, GammaJumps{shape, rate});
}

bool Subordinator::has_jumps() const { return !std::holds_alternative<NoJumps>(jumps_); }

bool Subordinator::finite_activity() const { return !std::holds_alternative<GammaJumps>(jumps_); }

double Subordinator::laplace_domain_inf() const {
    return std::visit(
        [](const auto& j) -> double {
            using T = std::decay_t<decltype(j)>;
            if constexpr (std::is_same_v<T, NoJumps>) {
                return -kInf;
            } else if constexpr (std::is_same_v<T, CompoundPoissonJumps>) {
                return -j.jump_law.mgf_sup();
            } else {
                return -j.rate;
            }
        },
        jumps_);
}

double Subordinator::laplace_exponent(double u) const {
    if (std::isnan(u)) throw std::invalid_argument("laplace_exponent: u is NaN");
    if (u < laplace_domain_inf()) return -kInf;
    const double drift_term = drift_ == 0.0 ? 0.0 : drift_ * u;
    return std::visit(
        [&](const auto& j) -> double {
            using T = std::decay_t<decltype(j)>;
            if constexpr (std::is_same_v<T, NoJumps>) {
                return drift_term;
            } else if constexpr (std::is_same_v<T, CompoundPoissonJumps>) {
                // At the domain boundary the jump MGF diverges for light jump
                // laws, so the closed form itself yields -inf there.
                const double laplace_k = j.jump_law.mgf(-u);
                if (std::isinf(laplace_k)) return -kInf;
                return drift_term + j.rate * (1.0 - laplace_k);
            } else {
                return drift_term + j.shape * std::log1p(u / j.rate);
            }
        },
        jumps_);
}

double Subordinator::mean_lambda1() const {
    return std::visit(
        [this](const auto& j) -> double {
            using T = std::decay_t<decltype(j)>;
            if constexpr (std::is_same_v<T, NoJumps>) {
                return drift_;
            } else if constexpr (std::is_same_v<T, CompoundPoissonJumps>) {
                return drift_ + j.rate * j.jump_law.mean();
            } else {
                return drift_ + j.shape / j.rate;
            }
        },
        jumps_);
}

Subordinator::NormalizationCheck Subordinator::check_time_normalized(double tol) const {
    const double m = mean_lambda1();
    if (!std::isfinite(m)) {
        throw PreconditionError(errkind::not_normalizable,
                                "subordinator jump law has infinite mean: not normalizable");
    }
    const double dev = std::fabs(m - 1.0);
    return NormalizationCheck{dev <= tol, dev};
}

bool Subordinator::is_time_normalized(double tol) const {
    const double m = mean_lambda1();
    return std::isfinite(m) && std::fabs(m - 1.0) <= tol;
}

bool Subordinator::lambda1_heavy_tailed() const {
    if (const auto* cp = std::get_if<CompoundPoissonJumps>(&jumps_)) {
        return cp->jump_law.is_heavy_tailed();
    }
    return false;
}

double Subordinator::sample_increment(double dt, RandomSource& rng) const {
    if (!(dt > 0.0)) throw std::invalid_argument("sample_increment: dt must be > 0");
    return std::visit(
        [&](const auto& j) -> double {
            using T = std::decay_t<decltype(j)>;
            if constexpr (std::is_same_v<T, NoJumps>) {
                return drift_ * dt;
            } else if constexpr (std::is_same_v<T, CompoundPoissonJumps>) {
                double total = drift_ * dt;
                std::poisson_distribution<long long> pd(j.rate * dt);
                const long long n = pd(rng);
                for (long long i = 0; i < n; ++i) total += j.jump_law.sample(rng);
                return total;
            } else {
                return drift_ * dt +
                       std::gamma_distribution<double>(j.shape * dt, 1.0 / j.rate)(rng);
            }
        },
        jumps_);
}

std::vector<JumpEvent> Subordinator::sample_jump_times_and_sizes(double horizon,
                                                                 RandomSource& rng) const {
    if (!(horizon > 0.0)) {
        throw std::invalid_argument("sample_jump_times_and_sizes: horizon must be > 0");
    }
    if (std::holds_alternative<GammaJumps>(jumps_)) {
        throw PreconditionError(errkind::infinite_activity,
                                "gamma subordinator has infinite activity: discretized paths only");
    }
    std::vector<JumpEvent> events;
    if (const auto* cp = std::get_if<CompoundPoissonJumps>(&jumps_)) {
        std::poisson_distribution<long long> pd(cp->rate * horizon);
        const long long n = pd(rng);
        events.resize(static_cast<std::size_t>(n));
        for (auto& e : events) e.time = horizon * uniform01(rng);
        std::sort(events.begin(), events.end(),
                  [](const JumpEvent& a, const JumpEvent& b) { return a.time < b.time; });
        for (auto& e : events) e.size = cp->jump_law.sample(rng);
    }
    return events;
}

}  // namespace subrisk
