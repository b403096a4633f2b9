#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "doseplane/inference/priors.hpp"
#include "doseplane/inference/sampler.hpp"
#include "doseplane/inference/summaries.hpp"
#include "doseplane/model/design_config.hpp"
#include "doseplane/model/mtd_curve.hpp"
#include "doseplane/model/trial_data.hpp"
#include "doseplane/util/random.hpp"

namespace doseplane::design {

enum class Phase { stage1, stage2, stopped_safety, stopped_futility, completed };

enum class StopReason {
    none,
    safety_stage1,      ///< P(pi_Z(0,0) > theta_z + margin | D) > delta_theta1
    safety_stage2,      ///< pooled-rate Jeffreys posterior exceedance > delta_theta2
    supra_toxic_curve,  ///< estimated contour lies entirely below the square
    futility,           ///< max exceedance along the curve < delta0
};

std::string_view to_string(Phase p) noexcept;
std::string_view to_string(StopReason r) noexcept;
/// Throw InputError on unknown names.
Phase parse_phase(std::string_view s);
StopReason parse_stop_reason(std::string_view s);

struct Assignment {
    int patient_index = 0;
    model::DoseCombo dose{};

    bool operator==(const Assignment&) const = default;
};

/// Doses for the next cohort plus what produced them.
struct CohortAssignment {
    int stage = 1;
    int cohort = 1;
    std::vector<Assignment> patients;
    double feasibility_bound = 0.0;  ///< stage 1 only
    /// Stage 2 only: normalized randomization weight of each curve grid cell.
    std::vector<double> density;

    bool operator==(const CohortAssignment&) const = default;
};

struct CohortOutcome {
    model::Binary z = model::Binary::zero;
    model::Binary e = model::Binary::zero;
};

struct FitDiagnostics {
    double tox_max_rhat = 0.0;
    double eff_max_rhat = 0.0;
    double tox_min_acceptance = 0.0;
    double eff_min_acceptance = 0.0;

    bool operator==(const FitDiagnostics&) const = default;
};

/// Sequential trial state. Everything except the cached draws is part of the persisted
/// snapshot; the draws are a deterministic function of (data, seed) and can be refitted.
struct TrialState {
    model::DesignConfig config{};
    inference::McmcConfig mcmc{};
    inference::ToxPriorSpec tox_prior{};
    inference::EffPriorSpec eff_prior{};
    std::uint64_t seed = 0;
    model::TrialData data{};
    Phase phase = Phase::stage1;
    StopReason stop_reason = StopReason::none;
    int c1 = 0;  ///< completed stage-1 cohorts
    int c2 = 0;  ///< completed stage-2 cohorts
    double feasibility_bound = 0.0;
    std::optional<model::ToxicityParamsClinical> tox_median;
    std::optional<model::EfficacyParams> eff_median;
    std::optional<model::MtdCurve> curve;  ///< plug-in curve at the toxicity medians
    std::optional<inference::ExceedanceProfile> exceedance;
    std::optional<CohortAssignment> pending;
    FitDiagnostics diagnostics{};

    std::shared_ptr<const inference::PosteriorDraws> tox_draws;
    std::shared_ptr<const inference::PosteriorDraws> eff_draws;

    bool active() const noexcept { return phase == Phase::stage1 || phase == Phase::stage2; }
};

/// EWOC feasibility bound for stage-1 cohort `cohort` (1-based):
/// min(start + step * max(0, cohort - 2), cap).
double feasibility_schedule(int cohort, const model::DesignConfig& config = {});

/// Fresh trial with the first cohort pending at (0,0). Validates all inputs.
TrialState start_trial(const model::DesignConfig& config, const inference::McmcConfig& mcmc,
                       const model::DoseWindow& window, std::uint64_t seed);

/// Posterior for the state's current data. The sampler seed is derived from
/// (state.seed, model, number of records), so refits reproduce earlier draws exactly.
inference::PosteriorDraws fit(const TrialState& state, inference::ModelKind kind);

/// Stage-I doses for cohort c1 + 1. `tox` may be null only for the first cohort.
/// Throws StateError outside stage 1.
CohortAssignment stage1_next_assignments(const TrialState& state, const inference::PosteriorDraws* tox);

/// Stage-II cohort drawn from the plug-in efficacy density along the plug-in curve.
/// Returns nullopt when the estimated curve is supra-toxic (the caller stops for safety);
/// a sub-toxic curve sends the whole cohort to (1,1). Throws StateError outside stage 2.
std::optional<CohortAssignment> stage2_sample_cohort(const TrialState& state, util::Rng& rng);

/// True means stop: max exceedance along the curve < delta0.
bool futility_check(const inference::ExceedanceProfile& profile, const model::DesignConfig& config);
bool futility_check(const inference::PosteriorDraws& eff, const model::MtdCurve& curve,
                    const model::DesignConfig& config);

/// Fraction of draws with rho00 > theta_z + margin.
double stage1_overdose_probability(const inference::PosteriorDraws& tox, const model::DesignConfig& config);
/// True means stop: that fraction exceeds delta_theta1.
bool safety_check_stage1(const inference::PosteriorDraws& tox, const model::DesignConfig& config);

/// P(Theta > theta_z + margin) under Theta ~ beta(0.5 + s, 0.5 + n - s).
double stage2_overdose_probability(int n, int s, const model::DesignConfig& config);
/// True means stop: that probability exceeds delta_theta2.
bool safety_check_stage2(int n, int s, const model::DesignConfig& config);

struct FinalDecision {
    bool reject_h0 = false;
    std::optional<model::DoseCombo> optimal;
    double optimal_exceedance = 0.0;  ///< max over the final curve of P(pi_E > theta_e | D_N)
    std::optional<std::size_t> optimal_index;
    double delta_u = 0.0;
    std::optional<model::MtdCurve> curve;
    std::optional<inference::ExceedanceProfile> profile;
    Phase phase = Phase::completed;
    StopReason stop_reason = StopReason::none;
    std::string note;  ///< why there is no recommendation, when there is none
};

/// Final test and recommendation given the full-data efficacy posterior. Stopped trials
/// return reject_h0 = false with their stop reason. Throws StateError for an active trial.
FinalDecision final_decision(const TrialState& state, const inference::PosteriorDraws& eff);

/// final_decision with the efficacy posterior taken from the cache or refitted.
FinalDecision decide(const TrialState& state);

/// Records the pending cohort's outcomes, refits, applies the stopping rules (safety
/// first, then futility in stage 2) and prepares the next cohort.
/// Throws StateError when the trial is not active and InputError on a size mismatch.
void advance(TrialState& state, std::span<const CohortOutcome> outcomes);

/// Resolves efficacy outcomes left pending at submission (1-based patient index) and refits
/// the efficacy posterior if the trial has one. Validates every update before applying any.
void resolve_efficacy(TrialState& state, std::span<const std::pair<int, model::Binary>> updates);

}  // namespace doseplane::design
