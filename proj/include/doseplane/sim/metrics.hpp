#pragma once

#include <string>
#include <vector>

#include "doseplane/sim/harness.hpp"

namespace doseplane::sim {

/// Signed minimum Euclidean distance from `p` to the estimated curve {(t, y_hat(t)) : t in [x_lo, x_hi]}.
/// The sign is that of y_hat(p.x) - p.y when p.x lies in the estimated domain and of
/// y_end - p.y for the nearest domain endpoint otherwise. Throws std::invalid_argument on an empty curve.
double signed_distance(model::DoseCombo p, const model::MtdCurve& estimate);

/// distances[t][i]: signed distance from true grid point i to the t-th nonempty estimate.
struct DistanceTable {
    std::vector<model::DoseCombo> true_grid;
    std::vector<std::vector<double>> distances;
    std::size_t excluded = 0;  ///< estimates skipped because they were missing or empty
};

DistanceTable distance_table(const model::MtdCurve& truth, const std::vector<const model::MtdCurve*>& estimates);

/// Mean signed distance per true grid point (zeros when no estimate is usable).
std::vector<double> pointwise_bias(const DistanceTable& t);
/// Fraction of estimates with |d| <= p * |true point| at each true grid point.
std::vector<double> percent_correct(const DistanceTable& t, double p);

/// Mean |bias| over the first, middle and last thirds of the grid.
struct BiasThirds {
    double left = 0.0;
    double central = 0.0;
    double right = 0.0;
};
BiasThirds bias_by_thirds(const std::vector<double>& bias);

struct OcReport {
    std::string scenario;
    std::string hypothesis;
    std::size_t j = 0;
    double delta_u = 0.0;

    std::size_t completed = 0;
    std::size_t stopped_safety = 0;
    std::size_t stopped_futility = 0;
    double safety_stop_rate = 0.0;
    double futility_stop_rate = 0.0;

    double avg_dlt_rate = 0.0;          ///< mean over all trials of observed DLTs / patients
    double frac_dlt_above_limit = 0.0;  ///< trials whose observed DLT proportion > theta_z + safety_margin
    /// Same two summaries with each trial's rate taken as the mean true DLT probability at
    /// the assigned doses.
    double avg_expected_dlt_rate = 0.0;
    double frac_expected_dlt_above_limit = 0.0;
    double rejection_rate = 0.0;        ///< power under H1, type-I error under H0

    std::size_t recommendations = 0;
    double frac_rec_effective = 0.0;  ///< recommendations with true pi_E >= theta_e
    std::vector<model::DoseCombo> recommended;

    std::size_t stage2_patients = 0;
    double frac_stage2_effective = 0.0;  ///< stage-2 patients with true pi_E > theta_e

    std::vector<model::DoseCombo> true_grid;
    std::vector<double> bias;
    std::vector<double> pc10;
    std::vector<double> pc20;
    BiasThirds bias_thirds{};
    std::size_t curves_used = 0;
    std::size_t curves_excluded = 0;
};

/// Operating characteristics of a batch. Rejection uses each trial's stored max exceedance
/// against `delta_u`, so a batch can be rescored for any threshold without rerunning it.
OcReport summarize_oc(const std::vector<TrialResult>& results, const Scenario& truth,
                      const model::DesignConfig& design, double delta_u);

/// Fraction of trials rejecting H0 at threshold delta_u.
double rejection_rate(const std::vector<TrialResult>& results, double delta_u);

struct CalibrationResult {
    double delta_u = 0.0;
    double type1 = 0.0;
    bool met = true;
    std::string warning;
    std::vector<std::pair<double, double>> sweep;  ///< (candidate, rejection rate)
};

/// Smallest candidate whose rejection rate on an H0 batch is <= target; when none qualifies,
/// the candidate with the lowest rate (largest on ties) and a warning.
CalibrationResult calibrate_delta_u(const std::vector<TrialResult>& h0_results, std::vector<double> candidates,
                                    double target);

/// 0.50, 0.51, ..., 0.99
std::vector<double> default_delta_u_candidates();

struct Study {
    std::vector<TrialResult> results;
    OcReport report;
};

/// run_trials followed by summarize_oc at design.delta_u.
Study run_study(const Scenario& truth, const model::DesignConfig& design, const inference::McmcConfig& mcmc,
                std::size_t j, std::uint64_t base_seed, unsigned workers);

}  // namespace doseplane::sim
