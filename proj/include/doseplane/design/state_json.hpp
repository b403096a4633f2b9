#pragma once

#include <string>

#include <json.hpp>

#include "doseplane/design/engine.hpp"

namespace doseplane::design {

inline constexpr int kStateFormatVersion = 1;

// Readers throw InputError whose field() is a dotted path such as "config.theta_z".
// Missing optional fields take their defaults; unknown fields are ignored.

nlohmann::json to_json(const model::DesignConfig& c);
model::DesignConfig design_config_from_json(const nlohmann::json& j, const std::string& path = "config");

nlohmann::json to_json(const inference::McmcConfig& c);
inference::McmcConfig mcmc_config_from_json(const nlohmann::json& j, const std::string& path = "mcmc");

nlohmann::json to_json(const model::DoseWindow& w);
model::DoseWindow dose_window_from_json(const nlohmann::json& j, const std::string& path = "window");

nlohmann::json to_json(const model::PatientRecord& r);
model::PatientRecord patient_record_from_json(const nlohmann::json& j, const std::string& path);

nlohmann::json to_json(const model::MtdCurve& c);
nlohmann::json to_json(const CohortAssignment& a, const model::DoseWindow& window);
CohortAssignment cohort_assignment_from_json(const nlohmann::json& j, const std::string& path = "pending");

/// Outcome list as accepted by the CLI and the HTTP service: [{"z": 0|1, "e": 0|1|null}, ...].
std::vector<CohortOutcome> outcomes_from_json(const nlohmann::json& j, const std::string& path = "outcomes");

/// Snapshot of everything in TrialState except cached draws.
nlohmann::json to_json(const TrialState& s);
/// Inverse of to_json; the plug-in curve is rebuilt from the stored medians.
TrialState state_from_json(const nlohmann::json& j);

nlohmann::json to_json(const FinalDecision& d, const model::DoseWindow& window);

}  // namespace doseplane::design
