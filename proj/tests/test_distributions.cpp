#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "subrisk/distributions.hpp"

#include "oracles.hpp"

#include <cmath>
#include <limits>
#include <vector>

using subrisk::ClaimDistribution;
using subrisk::RandomSource;

namespace {

std::vector<double> draw(const ClaimDistribution& d, std::size_t n, std::uint64_t seed) {
    RandomSource rng(seed);
    std::vector<double> xs(n);
    for (auto& x : xs) x = d.sample(rng);
    return xs;
}

// closed-form densities, used only to cross-check transforms by quadrature
double density(const ClaimDistribution& d, double x) {
    if (const auto* e = std::get_if<subrisk::Exponential>(&d.params())) {
        return e->rate * std::exp(-e->rate * x);
    }
    if (const auto* p = std::get_if<subrisk::Pareto>(&d.params())) {
        if (x < p->scale) return 0.0;
        return p->shape * std::pow(p->scale, p->shape) * std::pow(x, -p->shape - 1.0);
    }
    if (const auto* g = std::get_if<subrisk::GammaLaw>(&d.params())) {
        return std::pow(g->rate, g->shape) * std::pow(x, g->shape - 1.0) *
               std::exp(-g->rate * x) / std::tgamma(g->shape);
    }
    return 0.0;
}

double support_inf(const ClaimDistribution& d) {
    if (const auto* p = std::get_if<subrisk::Pareto>(&d.params())) return p->scale;
    return 0.0;
}

}  // namespace

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(ClaimDistribution::exponential(0.0), std::invalid_argument);
    CHECK_THROWS_AS(ClaimDistribution::exponential(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(ClaimDistribution::pareto(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(ClaimDistribution::gamma(-2.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(ClaimDistribution::deterministic(0.0), std::invalid_argument);
}

TEST_CASE("sampling basics") {
    const auto det = ClaimDistribution::deterministic(3.5);
    RandomSource rng(1);
    for (int i = 0; i < 100; ++i) CHECK(det.sample(rng) == 3.5);

    // law of large numbers for the unit exponential
    const auto xs = draw(ClaimDistribution::exponential(1.0), 1000000, 2);
    const auto mv = oracles::mean_var(xs);
    CHECK(std::fabs(mv.mean - 1.0) < 0.01);

    // support lower bound of the Pareto
    const auto ps = draw(ClaimDistribution::pareto(0.05, 2.0), 1000000, 3);
    for (const double p : ps) {
        REQUIRE(p >= 0.05);
    }
}

TEST_CASE("tail closed forms") {
    CHECK(ClaimDistribution::exponential(1.0).tail(0.0) == 1.0);
    CHECK(ClaimDistribution::exponential(2.0).tail(1.0) ==
          doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
    CHECK(ClaimDistribution::pareto(0.05, 2.0).tail(0.5) == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(ClaimDistribution::pareto(0.05, 2.0).tail(0.02) == 1.0);  // below the scale
    CHECK(ClaimDistribution::deterministic(2.0).tail(1.9) == 1.0);
    CHECK(ClaimDistribution::deterministic(2.0).tail(2.0) == 0.0);
    // gamma with shape 1 is exponential
    CHECK(ClaimDistribution::gamma(1.0, 2.0).tail(1.0) ==
          doctest::Approx(std::exp(-2.0)).epsilon(1e-12));
}

TEST_CASE("mgf closed forms and domain") {
    const auto e2 = ClaimDistribution::exponential(2.0);
    CHECK(e2.mgf(0.0) == 1.0);
    CHECK(e2.mgf(1.0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(std::isinf(e2.mgf(2.0)));
    CHECK(std::isinf(e2.mgf(5.0)));

    const auto par = ClaimDistribution::pareto(0.05, 2.0);
    CHECK(std::isinf(par.mgf(0.1)));
    CHECK(par.mgf(0.0) == 1.0);
    CHECK(par.mgf(-1.0) > 0.0);
    CHECK(par.mgf(-1.0) < 1.0);

    const auto g = ClaimDistribution::gamma(2.0, 3.0);
    CHECK(g.mgf(1.0) == doctest::Approx(std::pow(3.0 / 2.0, 2.0)).epsilon(1e-14));
    CHECK(std::isinf(g.mgf(3.0)));
}

TEST_CASE("heavy-tail classification") {
    CHECK_FALSE(ClaimDistribution::exponential(1.0).is_heavy_tailed());
    CHECK(ClaimDistribution::pareto(0.05, 2.0).is_heavy_tailed());
    CHECK_FALSE(ClaimDistribution::gamma(2.0, 3.0).is_heavy_tailed());
    CHECK_FALSE(ClaimDistribution::deterministic(1.0).is_heavy_tailed());

    CHECK(ClaimDistribution::exponential(3.0).mgf_sup() == 3.0);
    CHECK(ClaimDistribution::gamma(2.0, 3.0).mgf_sup() == 3.0);
    CHECK(ClaimDistribution::pareto(1.0, 2.0).mgf_sup() == 0.0);
    CHECK(std::isinf(ClaimDistribution::deterministic(1.0).mgf_sup()));

    CHECK(ClaimDistribution::pareto(1.0, 2.0).is_subexponential());
    CHECK_FALSE(ClaimDistribution::exponential(1.0).is_subexponential());
}

TEST_CASE("mean, including the infinite-mean Pareto") {
    CHECK(ClaimDistribution::exponential(2.0).mean() == 0.5);
    CHECK(ClaimDistribution::gamma(2.0, 3.0).mean() == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(ClaimDistribution::pareto(0.05, 2.0).mean() == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(ClaimDistribution::deterministic(3.5).mean() == 3.5);

    const auto heavy = ClaimDistribution::pareto(1.0, 1.0);
    CHECK(std::isinf(heavy.mean()));
    CHECK_FALSE(heavy.has_finite_mean());
    CHECK_FALSE(ClaimDistribution::pareto(1.0, 0.7).has_finite_mean());
    CHECK(ClaimDistribution::pareto(1.0, 1.0001).has_finite_mean());
}

TEST_CASE("empirical CDF matches the analytic CDF (KS < 0.01)") {
    const std::size_t n = 100000;
    const std::vector<ClaimDistribution> laws = {
        ClaimDistribution::exponential(0.7),
        ClaimDistribution::pareto(0.5, 1.8),
        ClaimDistribution::gamma(2.3, 1.4),
    };
    std::uint64_t seed = 11;
    for (const auto& law : laws) {
        const auto xs = draw(law, n, seed++);
        const double d = oracles::ks_statistic(xs, [&law](double x) { return law.cdf(x); });
        CHECK(d < 0.01);
    }
    // the point mass: every draw sits exactly on the atom
    for (const double x : draw(ClaimDistribution::deterministic(1.25), 1000, seed)) {
        REQUIRE(x == 1.25);
    }
}

TEST_CASE("mgf at negative arguments equals the Laplace transform by quadrature") {
    const std::vector<ClaimDistribution> laws = {
        ClaimDistribution::exponential(1.3),
        ClaimDistribution::pareto(0.05, 2.0),
        ClaimDistribution::pareto(0.4, 1.5),
        ClaimDistribution::pareto(1.0, 3.0),
        ClaimDistribution::gamma(2.0, 3.0),
    };
    const double rs[] = {-0.1, -0.5, -1.0, -2.0, -5.0};
    for (const auto& law : laws) {
        for (const double r : rs) {
            const double direct = law.mgf(r);
            const double byquad = oracles::integrate_to_inf(
                [&](double x) { return std::exp(r * x) * density(law, x); }, support_inf(law));
            CHECK(std::fabs(direct - byquad) <= 1e-6 * std::fabs(byquad));
        }
    }
    const auto det = ClaimDistribution::deterministic(0.5);
    for (const double r : rs) {
        CHECK(det.mgf(r) == doctest::Approx(std::exp(r * 0.5)).epsilon(1e-15));
    }
}

TEST_CASE("mean equals the MGF derivative at zero (central difference)") {
    const std::vector<ClaimDistribution> laws = {
        ClaimDistribution::exponential(2.0),
        ClaimDistribution::gamma(2.0, 3.0),
        ClaimDistribution::deterministic(3.5),
        ClaimDistribution::gamma(0.7, 0.9),
    };
    const double h = 1e-5;
    for (const auto& law : laws) {
        const double deriv = (law.mgf(h) - law.mgf(-h)) / (2.0 * h);
        CHECK(std::fabs(deriv - law.mean()) < 1e-4 * law.mean());
    }
}
