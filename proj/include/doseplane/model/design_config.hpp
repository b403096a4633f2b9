#pragma once

#include <cstddef>

namespace doseplane::model {

/// Design constants of the two-stage trial.
struct DesignConfig {
    double theta_z = 0.33;  ///< target DLT probability
    double theta_e = 0.15;  ///< standard-of-care response rate
    int n1 = 30;            ///< stage-I patients
    int n2 = 30;            ///< stage-II patients
    int m1 = 2;             ///< stage-I cohort size (the escalation scheme needs exactly 2)
    int m2 = 5;             ///< stage-II cohort size
    double ewoc_alpha_start = 0.25;
    double ewoc_alpha_cap = 0.5;
    double ewoc_alpha_step = 0.05;
    double delta_u = 0.80;       ///< final-test rejection threshold
    double delta0 = 0.10;        ///< futility threshold
    double delta_theta1 = 0.5;   ///< stage-I safety confidence
    double delta_theta2 = 0.7;   ///< stage-II safety confidence
    double safety_margin = 0.1;  ///< excess over theta_z that counts as overly toxic
    std::size_t grid_size = 201;

    int stage1_cohorts() const noexcept { return n1 / m1; }
    int stage2_cohorts() const noexcept { return n2 / m2; }
    int total_patients() const noexcept { return n1 + n2; }

    /// Throws InputError naming the offending field.
    void validate() const;
    bool operator==(const DesignConfig&) const = default;
};

}  // namespace doseplane::model
