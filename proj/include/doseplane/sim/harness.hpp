#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "doseplane/design/engine.hpp"
#include "doseplane/sim/scenario.hpp"

namespace doseplane::sim {

struct Outcome {
    bool z = false;
    bool e = false;
};

/// Independent Bernoulli DLT and response draws from the true models (DLT first).
Outcome simulate_outcome(const Scenario& truth, model::DoseCombo dose, util::Rng& rng);

struct TrialResult {
    std::size_t index = 0;
    std::uint64_t seed = 0;
    model::TrialData data{};
    design::Phase phase = design::Phase::completed;
    design::StopReason stop_reason = design::StopReason::none;
    bool reject_h0 = false;
    std::optional<model::DoseCombo> recommended;
    /// Max exceedance along the final curve; set only for completed trials with a nonempty curve.
    std::optional<double> max_exceedance;
    std::optional<model::MtdCurve> final_curve;
    std::vector<double> true_pi_e;  ///< per patient, at the assigned dose
    std::vector<double> true_pi_z;

    bool completed() const noexcept { return phase == design::Phase::completed; }
    bool operator==(const TrialResult&) const;
};

/// One complete simulated trial. Deterministic in (truth, configs, seed).
TrialResult run_trial(const Scenario& truth, const model::DesignConfig& design, const inference::McmcConfig& mcmc,
                      std::uint64_t seed, const model::DoseWindow& window = {});

/// Trials j = 0..J-1 with seeds base_seed ^ j on `workers` threads; results are ordered by j
/// and do not depend on the worker count. The first exception thrown by any trial is rethrown.
std::vector<TrialResult> run_trials(const Scenario& truth, const model::DesignConfig& design,
                                    const inference::McmcConfig& mcmc, std::size_t j, std::uint64_t base_seed,
                                    unsigned workers);

}  // namespace doseplane::sim
