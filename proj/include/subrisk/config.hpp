#pragma once

#include "subrisk/ruin.hpp"
#include "subrisk/subordinated.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace subrisk::config {

using json = nlohmann::ordered_json;

// Parsers throw ConfigError with a dotted field path naming the offender,
// e.g. "model.subordinator.jumps.rate: must be > 0".

ClaimDistribution parse_claim_law(const json& j, const std::string& path);
Subordinator parse_subordinator(const json& j, const std::string& path);
SubordinatedCPP parse_process(const json& j, const std::string& path);

struct ModelConfig {
    std::optional<double> capital;
    std::optional<double> premium;
    SubordinatedCPP process;
    bool claims_declared_subexponential = false;

    // Builds the surplus model; errors when capital/premium are absent.
    RiskModel risk_model(const std::string& path) const;
};

ModelConfig parse_model(const json& j, const std::string& path);

// Typed field access with path-carrying diagnostics.
const json& require_field(const json& j, const std::string& path, const char* field);
double require_number(const json& j, const std::string& path, const char* field);
double require_positive(const json& j, const std::string& path, const char* field);
std::uint64_t require_uint(const json& j, const std::string& path, const char* field);
std::string require_string(const json& j, const std::string& path, const char* field);

// Serializers (used by the inspect report and round-trip tests).
json claim_law_to_json(const ClaimDistribution& law);
json subordinator_to_json(const Subordinator& s);

}  // namespace subrisk::config
