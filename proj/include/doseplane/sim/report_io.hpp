#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "doseplane/sim/metrics.hpp"

namespace doseplane::sim {

nlohmann::json to_json(const OcReport& r);
nlohmann::json to_json(const CalibrationResult& c);

/// Files written by write_report, relative to the output directory.
inline const std::vector<std::string> kReportFiles = {"oc_report.json", "profiles.csv", "trials.csv",
                                                      "recommendations.csv"};

/// Writes the report files. Output is a pure function of the arguments.
void write_report(const std::filesystem::path& dir, const OcReport& report, const std::vector<TrialResult>& results,
                  const model::DoseWindow& window = {});

}  // namespace doseplane::sim
