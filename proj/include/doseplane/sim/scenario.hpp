#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "doseplane/model/params.hpp"

namespace doseplane::sim {

enum class Hypothesis { h0, h1 };

std::string_view to_string(Hypothesis h) noexcept;

/// True dose-toxicity and dose-efficacy models for simulation.
///
/// Unlike fitted efficacy parameters, true ones may have zero interaction or linear terms
/// (an additive surface is a legitimate truth), so only finiteness and beta1..3 >= 0 are required.
struct Scenario {
    std::string name;
    model::ToxicityParamsClinical tox{};
    model::EfficacyParams eff{};
    Hypothesis hypothesis = Hypothesis::h1;
    int tox_label = 0;  ///< 0 when not one of the bundled scenarios
    int eff_label = 0;

    /// Throws InputError with paths like "tox.rho00" or "eff.beta3".
    void validate() const;
};

/// {name?, tox: {rho00, rho10, rho01, alpha3}, eff: {beta0..beta5}, hypothesis: "H0"|"H1", labels?: {tox, eff}}
Scenario scenario_from_json(const nlohmann::json& j);
nlohmann::json to_json(const Scenario& s);
/// Reads and parses a scenario file; parse errors are reported as InputError on field "".
Scenario load_scenario(const std::string& path);

/// The two toxicity and four efficacy scenarios, each under H0 and H1 (16 in total).
/// Efficacy scenario 3 is additive (beta3 = 0).
std::vector<Scenario> builtin_scenarios();
/// Throws std::out_of_range for labels outside 1..2 / 1..4.
Scenario builtin_scenario(int tox_label, int eff_label, Hypothesis h);

}  // namespace doseplane::sim
