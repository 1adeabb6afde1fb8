#pragma once

#include "subrisk/ruin.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace subrisk {

enum class PathRoute {
    // Event-driven over the compound Poisson representation: jump epochs at
    // rate psi(lambda), a Z draw per epoch. Exact for finite activity.
    direct,
    // Simulate the clock's jumps and drift, then base claims on the warped
    // clock. Cross-validation oracle; must agree with `direct` in law.
    warped_clock,
};

struct PathOutcome {
    bool ruined;
    std::optional<double> ruin_time;
    double min_surplus;
    double total_claims;  // Y at the horizon
};

// Exact ruin detection for finite-activity clocks: the surplus only falls at
// claim epochs, so every epoch is checked and nothing is discretized. The
// gamma subordinator uses clock discretization with step 1e-2 instead.
PathOutcome simulate_surplus_path(const RiskModel& m, double horizon, RandomSource& rng,
                                  PathRoute route = PathRoute::direct);

struct RuinEstimate {
    double point;
    double std_error;
    std::uint64_t n_paths;
    double horizon;  // +inf for the infinite-horizon estimator
    std::uint64_t seed;
    std::string note;  // non-empty for fallbacks and warnings
};

// Fraction of ruined paths over n_paths replications. Path i draws from its
// own stream seeded by (seed, i), so results are bit-identical regardless of
// thread count and couple exactly across horizons and capital levels.
RuinEstimate mc_ruin(const RiskModel& m, double horizon, std::uint64_t n_paths,
                     std::uint64_t seed, PathRoute route = PathRoute::direct,
                     unsigned n_threads = 0);

// Closed-form infinite-horizon ruin probability where one exists: exponential
// claims under a pure-drift clock.
std::optional<double> pk_closed_form(const RiskModel& m);

// Unbiased infinite-horizon estimator via the geometric-compound (ladder
// height) representation: ruin iff the sum of G integrated-tail draws exceeds
// u, G geometric with success 1 - E[Y_1]/c. Available when the jump tail of
// the claims process is known in closed form (pure-drift clock); otherwise
// falls back to long-horizon mc_ruin and says so in `note`.
RuinEstimate pk_exact_ruin(const RiskModel& m, std::uint64_t n_geom, std::uint64_t seed,
                           unsigned n_threads = 0);

struct SweepRow {
    double u;
    RuinEstimate estimate;
};

// One mc_ruin per grid point under common random numbers (the same master
// seed and per-path streams), so estimates are exactly monotone in u.
std::vector<SweepRow> tail_horizon_sweep(const RiskModel& m, std::span<const double> u_grid,
                                         double horizon, std::uint64_t n_paths,
                                         std::uint64_t seed);

struct TrajectoryPoint {
    double t;
    double surplus;
};

// Piecewise-linear surplus trajectory: a row at t = 0, a pre/post pair per
// claim epoch, and a final row at the horizon.
std::vector<TrajectoryPoint> surplus_trajectory(const RiskModel& m, double horizon,
                                                RandomSource& rng);

// One draw of Y_1 through the representation (Poisson(psi) many Z draws).
double sample_y1_direct(const SubordinatedCPP& p, RandomSource& rng);

struct Y1Warped {
    double y;
    std::uint64_t claims;  // base claim count N at the warped unit time
};

// One draw of Y_1 by warping the clock: Lambda_1 exactly, then
// Poisson(lambda Lambda_1) base claims.
Y1Warped sample_y1_warped(const SubordinatedCPP& p, RandomSource& rng);

// Number of distinct jump epochs of Y on [0, horizon] from a warped-clock
// path: drift-segment claims count individually, a clock jump counts once
// when at least one claim falls inside it. Mean is psi(lambda) * horizon.
std::uint64_t count_jump_epochs_warped(const SubordinatedCPP& p, double horizon,
                                       RandomSource& rng);

}  // namespace subrisk
