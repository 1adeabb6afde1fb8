#include "subrisk/distributions.hpp"

#include "subrisk/special.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace subrisk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw std::invalid_argument(std::string(what) + ": must be a positive finite real");
    }
}

// Laplace transform E[e^{-uX}] of Pareto(scale, shape) at u > 0:
//   a (us)^a Gamma(-a, us).
double pareto_laplace(double scale, double shape, double u) {
    const double z = u * scale;
    if (z < 1e-25) return 1.0;  // 1 - O(z^(a^1)) below double resolution here
    if (z > 690.0) {
        // two-term asymptotic of Gamma(-a, z); the value is below 1e-290
        return shape * std::exp(-z) / z * (1.0 - (shape + 1.0) / z);
    }
    return shape * std::pow(z, shape) * special::upper_incomplete_gamma(-shape, z);
}

}  // namespace

ClaimDistribution::ClaimDistribution(Params params) : params_(std::move(params)) {
    std::visit(
        [](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, Exponential>) {
                require_positive(p.rate, "exponential rate");
            } else if constexpr (std::is_same_v<T, Pareto>) {
                require_positive(p.scale, "pareto scale");
                require_positive(p.shape, "pareto shape");
            } else if constexpr (std::is_same_v<T, GammaLaw>) {
                require_positive(p.shape, "gamma shape");
                require_positive(p.rate, "gamma rate");
            } else {
                require_positive(p.value, "deterministic value");
            }
        },
        params_);
}

ClaimDistribution ClaimDistribution::exponential(double rate) {
    return ClaimDistribution(Exponential{rate});
}
ClaimDistribution ClaimDistribution::pareto(double scale, double shape) {
    return ClaimDistribution(Pareto{scale, shape});
}
ClaimDistribution ClaimDistribution::gamma(double shape, double rate) {
    return ClaimDistribution(GammaLaw{shape, rate});
}
ClaimDistribution ClaimDistribution::deterministic(double value) {
    return ClaimDistribution(Deterministic{value});
}

double ClaimDistribution::sample(RandomSource& rng) const {
    return std::visit(
        [&rng](const auto& p) -> double {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, Exponential>) {
                return std::exponential_distribution<double>(p.rate)(rng);
            } else if constexpr (std::is_same_v<T, Pareto>) {
                // inverse transform; 1-U in (0,1] keeps the draw finite
                const double u = uniform01(rng);
                return p.scale * std::pow(1.0 - u, -1.0 / p.shape);
            } else if constexpr (std::is_same_v<T, GammaLaw>) {
                return std::gamma_distribution<double>(p.shape, 1.0 / p.rate)(rng);
            } else {
                return p.value;
            }
        },
        params_);
}

double ClaimDistribution::tail(double x) const {
    if (x < 0.0) return 1.0;
    return std::visit(
        [x](const auto& p) -> double {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, Exponential>) {
                return std::exp(-p.rate * x);
            } else if constexpr (std::is_same_v<T, Pareto>) {
                if (x <= p.scale) return 1.0;
                return std::pow(p.scale / x, p.shape);
            } else if constexpr (std::is_same_v<T, GammaLaw>) {
                if (x == 0.0) return 1.0;
                return boost::math::gamma_q(p.shape, p.rate * x);
            } else {
                return x < p.value ? 1.0 : 0.0;
            }
        },
        params_);
}

double ClaimDistribution::cdf(double x) const { return 1.0 - tail(x); }

double ClaimDistribution::mean() const {
    return std::visit(
        [](const auto& p) -> double {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, Exponential>) {
                return 1.0 / p.rate;
            } else if constexpr (std::is_same_v<T, Pareto>) {
                if (p.shape <= 1.0) return kInf;
                return p.scale * p.shape / (p.shape - 1.0);
            } else if constexpr (std::is_same_v<T, GammaLaw>) {
                return p.shape / p.rate;
            } else {
                return p.value;
            }
        },
        params_);
}

bool ClaimDistribution::has_finite_mean() const { return std::isfinite(mean()); }

double ClaimDistribution::mgf(double r) const {
    return std::visit(
        [r](const auto& p) -> double {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, Exponential>) {
                if (r >= p.rate) return kInf;
                return p.rate / (p.rate - r);
            } else if constexpr (std::is_same_v<T, Pareto>) {
                if (r > 0.0) return kInf;
                if (r == 0.0) return 1.0;
                if (std::isinf(r)) return 0.0;
                return pareto_laplace(p.scale, p.shape, -r);
            } else if constexpr (std::is_same_v<T, GammaLaw>) {
                if (r >= p.rate) return kInf;
                return std::pow(p.rate / (p.rate - r), p.shape);
            } else {
                return std::exp(r * p.value);
            }
        },
        params_);
}

double ClaimDistribution::mgf_sup() const {
    return std::visit(
        [](const auto& p) -> double {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, Exponential>) {
                return p.rate;
            } else if constexpr (std::is_same_v<T, Pareto>) {
                return 0.0;
            } else if constexpr (std::is_same_v<T, GammaLaw>) {
                return p.rate;
            } else {
                return kInf;
            }
        },
        params_);
}

bool ClaimDistribution::is_heavy_tailed() const { return mgf_sup() == 0.0; }

bool ClaimDistribution::is_subexponential() const {
    return std::holds_alternative<Pareto>(params_);
}

std::string ClaimDistribution::describe() const {
    std::ostringstream os;
    std::visit(
        [&os](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, Exponential>) {
                os << "exponential(rate=" << p.rate << ")";
            } else if constexpr (std::is_same_v<T, Pareto>) {
                os << "pareto(scale=" << p.scale << ", shape=" << p.shape << ")";
            } else if constexpr (std::is_same_v<T, GammaLaw>) {
                os << "gamma(shape=" << p.shape << ", rate=" << p.rate << ")";
            } else {
                os << "deterministic(value=" << p.value << ")";
            }
        },
        params_);
    return os.str();
}

}  // namespace subrisk
