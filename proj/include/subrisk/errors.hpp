#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace subrisk {

// Invalid or incomplete configuration input. Messages name the offending
// field, e.g. "model.base.rate: must be > 0".
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A mathematical precondition of the requested operation does not hold.
// kind() is a stable machine-readable tag suitable for reports.
class PreconditionError : public std::runtime_error {
public:
    PreconditionError(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

namespace errkind {
inline constexpr const char* net_profit_violated = "NetProfitViolated";
inline constexpr const char* heavy_tail = "HeavyTail";
inline constexpr const char* no_root = "NoRoot";
inline constexpr const char* not_normalizable = "NotNormalizable";
inline constexpr const char* not_normalized = "NotNormalized";
inline constexpr const char* infinite_activity = "InfiniteActivity";
inline constexpr const char* infinite_mean = "InfiniteMean";
inline constexpr const char* integrated_tail_unavailable = "IntegratedTailUnavailable";
inline constexpr const char* not_regularly_varying = "NotRegularlyVarying";
inline constexpr const char* not_subexponential = "NotSubexponential";
inline constexpr const char* claim_tail_too_heavy = "ClaimTailTooHeavy";
inline constexpr const char* prefactor_undefined = "PrefactorUndefined";
}  // namespace errkind

}  // namespace subrisk
