#include "subrisk/config.hpp"

#include "subrisk/errors.hpp"

#include <cmath>

namespace subrisk::config {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& why) {
    throw ConfigError(path + ": " + why);
}

std::string join(const std::string& path, const char* field) {
    return path.empty() ? std::string(field) : path + "." + field;
}

}  // namespace

const json& require_field(const json& j, const std::string& path, const char* field) {
    if (!j.is_object()) fail(path, "expected an object");
    const auto it = j.find(field);
    if (it == j.end()) fail(join(path, field), "required field is missing");
    return *it;
}

double require_number(const json& j, const std::string& path, const char* field) {
    const json& v = require_field(j, path, field);
    if (!v.is_number()) fail(join(path, field), "must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) fail(join(path, field), "must be finite");
    return d;
}

double require_positive(const json& j, const std::string& path, const char* field) {
    const double d = require_number(j, path, field);
    if (!(d > 0.0)) fail(join(path, field), "must be > 0");
    return d;
}

std::uint64_t require_uint(const json& j, const std::string& path, const char* field) {
    const json& v = require_field(j, path, field);
    if (!v.is_number_unsigned()) fail(join(path, field), "must be a nonnegative integer");
    return v.get<std::uint64_t>();
}

std::string require_string(const json& j, const std::string& path, const char* field) {
    const json& v = require_field(j, path, field);
    if (!v.is_string()) fail(join(path, field), "must be a string");
    return v.get<std::string>();
}

ClaimDistribution parse_claim_law(const json& j, const std::string& path) {
    const std::string kind = require_string(j, path, "kind");
    try {
        if (kind == "exponential") {
            return ClaimDistribution::exponential(require_positive(j, path, "rate"));
        }
        if (kind == "pareto") {
            return ClaimDistribution::pareto(require_positive(j, path, "scale"),
                                             require_positive(j, path, "shape"));
        }
        if (kind == "gamma") {
            return ClaimDistribution::gamma(require_positive(j, path, "shape"),
                                            require_positive(j, path, "rate"));
        }
        if (kind == "deterministic") {
            return ClaimDistribution::deterministic(require_positive(j, path, "value"));
        }
    } catch (const std::invalid_argument& e) {
        fail(path, e.what());
    }
    fail(join(path, "kind"),
         "unknown distribution kind '" + kind +
             "' (expected exponential, pareto, gamma, or deterministic)");
}

Subordinator parse_subordinator(const json& j, const std::string& path) {
    const double drift = require_number(j, path, "drift");
    if (drift < 0.0) fail(join(path, "drift"), "must be >= 0");
    const json& jumps = require_field(j, path, "jumps");
    const std::string jpath = join(path, "jumps");
    const std::string kind = require_string(jumps, jpath, "kind");
    try {
        if (kind == "none") {
            return Subordinator::pure_drift(drift);
        }
        if (kind == "compound_poisson") {
            const double rate = require_positive(jumps, jpath, "rate");
            const json& law = require_field(jumps, jpath, "jump_law");
            return Subordinator::compound_poisson(drift, rate,
                                                  parse_claim_law(law, join(jpath, "jump_law")));
        }
        if (kind == "gamma") {
            return Subordinator::gamma(drift, require_positive(jumps, jpath, "shape"),
                                       require_positive(jumps, jpath, "rate"));
        }
    } catch (const std::invalid_argument& e) {
        fail(jpath, e.what());
    }
    fail(join(jpath, "kind"),
         "unknown jump kind '" + kind + "' (expected none, compound_poisson, or gamma)");
}

SubordinatedCPP parse_process(const json& j, const std::string& path) {
    const json& base = require_field(j, path, "base");
    const std::string bpath = join(path, "base");
    const double rate = require_positive(base, bpath, "rate");
    const json& law = require_field(base, bpath, "claim_law");
    ClaimDistribution claim_law = parse_claim_law(law, join(bpath, "claim_law"));
    const json& sub = require_field(j, path, "subordinator");
    try {
        return SubordinatedCPP(BaseCPP(rate, std::move(claim_law)),
                               parse_subordinator(sub, join(path, "subordinator")));
    } catch (const std::invalid_argument& e) {
        fail(path, e.what());
    }
}

RiskModel ModelConfig::risk_model(const std::string& path) const {
    if (!capital) fail(join(path, "capital"), "required for this command");
    if (!premium) fail(join(path, "premium"), "required for this command");
    try {
        return RiskModel(*capital, *premium, process);
    } catch (const std::invalid_argument& e) {
        fail(path, e.what());
    }
}

ModelConfig parse_model(const json& j, const std::string& path) {
    ModelConfig cfg{std::nullopt, std::nullopt, parse_process(j, path), false};
    if (j.contains("capital")) {
        const double u = require_number(j, path, "capital");
        if (u < 0.0) fail(join(path, "capital"), "must be >= 0");
        cfg.capital = u;
    }
    if (j.contains("premium")) {
        cfg.premium = require_positive(j, path, "premium");
    }
    if (j.contains("claims_subexponential")) {
        const json& v = j.at("claims_subexponential");
        if (!v.is_boolean()) fail(join(path, "claims_subexponential"), "must be a boolean");
        cfg.claims_declared_subexponential = v.get<bool>();
    }
    return cfg;
}

json claim_law_to_json(const ClaimDistribution& law) {
    json j;
    std::visit(
        [&j](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, Exponential>) {
                j["kind"] = "exponential";
                j["rate"] = p.rate;
            } else if constexpr (std::is_same_v<T, Pareto>) {
                j["kind"] = "pareto";
                j["scale"] = p.scale;
                j["shape"] = p.shape;
            } else if constexpr (std::is_same_v<T, GammaLaw>) {
                j["kind"] = "gamma";
                j["shape"] = p.shape;
                j["rate"] = p.rate;
            } else {
                j["kind"] = "deterministic";
                j["value"] = p.value;
            }
        },
        law.params());
    return j;
}

json subordinator_to_json(const Subordinator& s) {
    json j;
    j["drift"] = s.drift();
    json jumps;
    std::visit(
        [&jumps](const auto& part) {
            using T = std::decay_t<decltype(part)>;
            if constexpr (std::is_same_v<T, NoJumps>) {
                jumps["kind"] = "none";
            } else if constexpr (std::is_same_v<T, CompoundPoissonJumps>) {
                jumps["kind"] = "compound_poisson";
                jumps["rate"] = part.rate;
                jumps["jump_law"] = claim_law_to_json(part.jump_law);
            } else {
                jumps["kind"] = "gamma";
                jumps["shape"] = part.shape;
                jumps["rate"] = part.rate;
            }
        },
        s.jump_part());
    j["jumps"] = jumps;
    return j;
}

}  // namespace subrisk::config
