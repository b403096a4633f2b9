#pragma once

#include <cstddef>
#include <vector>

#include "doseplane/inference/sampler.hpp"
#include "doseplane/model/mtd_curve.hpp"

namespace doseplane::inference {

/// Linear interpolation between order statistics: h = (n - 1) p. Input must be sorted.
double quantile_sorted(const std::vector<double>& sorted, double p);
/// Copies and sorts. Throws std::invalid_argument on empty input or p outside [0, 1].
double empirical_quantile(std::vector<double> values, double p);

/// Componentwise medians of the primary parameters.
std::vector<double> posterior_medians(const PosteriorDraws& draws);
model::ToxicityParamsClinical tox_medians(const PosteriorDraws& draws);
model::EfficacyParams eff_medians(const PosteriorDraws& draws);

enum class Axis { x, y };

/// Per-draw closed-form solution of pi_Z = theta_z for the free agent with the other fixed
/// at `fixed_value`. For fixed y: x = (Phi^{-1}(theta) - a0 - a2 y) / (a1 + a3 y).
std::vector<double> conditional_mtd_solutions(const PosteriorDraws& tox, Axis fixed_axis, double fixed_value,
                                              double theta_z);

/// alpha-quantile of the conditional MTD distribution, clamped into [0, 1].
double conditional_mtd_quantile(const PosteriorDraws& tox, Axis fixed_axis, double fixed_value, double alpha,
                                double theta_z);

/// Posterior probability that efficacy exceeds theta_e at each grid point of a curve.
struct ExceedanceProfile {
    std::vector<double> prob;
    std::size_t argmax = 0;  ///< first index attaining the maximum
    double max = 0.0;
};

/// Throws std::invalid_argument on an empty curve or empty draws.
ExceedanceProfile exceedance_profile(const PosteriorDraws& eff, const model::MtdCurve& curve, double theta_e);
ExceedanceProfile exceedance_profile(const PosteriorDraws& eff, const std::vector<model::DoseCombo>& points,
                                     double theta_e);

}  // namespace doseplane::inference
