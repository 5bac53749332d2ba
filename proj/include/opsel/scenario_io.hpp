#pragma once

#include "opsel/model.hpp"

#include <filesystem>
#include <string>

#include "json.hpp"

namespace opsel
{
    nlohmann::json to_json(const Scenario &s);

    /// Parses and validates. Structural problems (missing fields, wrong types,
    /// unknown enum names) and invariant violations are all reported together
    /// through ScenarioError.
    Scenario scenario_from_json(const nlohmann::json &j);

    /// Throws ScenarioError for malformed or invalid content, std::runtime_error
    /// when the file cannot be read.
    Scenario load_scenario(const std::filesystem::path &path);

    void save_scenario(const Scenario &s, const std::filesystem::path &path);
} // namespace opsel
