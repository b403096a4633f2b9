#pragma once

#include <array>

#include "doseplane/model/dose.hpp"

namespace doseplane::model {

/// Dose-toxicity model in clinically interpretable form: DLT probabilities at the four
/// corners' axes (rho00 at (0,0), rho10 at (1,0), rho01 at (0,1)) plus the interaction.
struct ToxicityParamsClinical {
    double rho00 = 0.0;
    double rho10 = 0.0;
    double rho01 = 0.0;
    double alpha3 = 0.0;

    /// rho's in (0,1), rho00 < min(rho10, rho01), alpha3 >= 0, all finite.
    bool valid() const noexcept;
    /// Throws InvariantError naming the violated condition.
    void validate() const;
    bool operator==(const ToxicityParamsClinical&) const = default;
};

/// pi_Z(x, y) = Phi(alpha0 + alpha1 x + alpha2 y + alpha3 x y).
struct ToxicityParamsNatural {
    double alpha0 = 0.0;
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    double alpha3 = 0.0;

    bool valid() const noexcept;
    void validate() const;
    bool operator==(const ToxicityParamsNatural&) const = default;
};

/// pi_E(x, y) = Phi(b0 + b1 x + b2 y + b3 x y + b4 x^2 + b5 y^2), b1, b2, b3 > 0.
struct EfficacyParams {
    std::array<double, 6> beta{};

    bool valid() const noexcept;
    void validate() const;
    bool operator==(const EfficacyParams&) const = default;
};

ToxicityParamsNatural to_natural(const ToxicityParamsClinical& p);
ToxicityParamsClinical to_clinical(const ToxicityParamsNatural& p);

double tox_linear_predictor(const ToxicityParamsNatural& p, DoseCombo d) noexcept;
double eff_linear_predictor(const EfficacyParams& b, DoseCombo d) noexcept;

double prob_dlt(const ToxicityParamsNatural& p, DoseCombo d) noexcept;
double prob_dlt(const ToxicityParamsClinical& p, DoseCombo d);
double prob_eff(const EfficacyParams& b, DoseCombo d) noexcept;

}  // namespace doseplane::model
