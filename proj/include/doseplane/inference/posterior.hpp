#pragma once

#include <vector>

#include "doseplane/inference/priors.hpp"
#include "doseplane/model/params.hpp"
#include "doseplane/model/trial_data.hpp"

namespace doseplane::inference {

/// Probabilities are clamped to [kProbClamp, 1 - kProbClamp] before taking logs.
inline constexpr double kProbClamp = 1e-12;

/// Bernoulli-probit log-likelihood of the DLT outcomes, columns cached for repeated evaluation.
class ToxicityLikelihood {
  public:
    explicit ToxicityLikelihood(const model::TrialData& data);
    double operator()(const model::ToxicityParamsNatural& p) const;
    std::size_t size() const noexcept { return sign_.size(); }

  private:
    std::vector<double> ones_, x_, y_, xy_, sign_;
};

/// Same for efficacy; records whose response is pending are left out.
class EfficacyLikelihood {
  public:
    explicit EfficacyLikelihood(const model::TrialData& data);
    double operator()(const model::EfficacyParams& b) const;
    std::size_t size() const noexcept { return sign_.size(); }

  private:
    std::vector<double> ones_, x_, y_, xy_, xx_, yy_, sign_;
};

/// Log prior density of (rho00, rho10, rho01, alpha3) with respect to Lebesgue measure on
/// those four coordinates; the conditional ratio prior contributes -log min(rho01, rho10).
/// -infinity outside the support.
double log_prior_tox(const model::ToxicityParamsClinical& p, const ToxPriorSpec& prior = {});
double log_prior_eff(const model::EfficacyParams& b, const EffPriorSpec& prior = {});

/// Unnormalized log-posteriors. Invalid parameters give -infinity rather than throwing.
double log_post_tox(const model::ToxicityParamsClinical& p, const model::TrialData& data,
                    const ToxPriorSpec& prior = {});
double log_post_tox(const model::ToxicityParamsClinical& p, const ToxicityLikelihood& lik,
                    const ToxPriorSpec& prior = {});
double log_post_eff(const model::EfficacyParams& b, const model::TrialData& data, const EffPriorSpec& prior = {});
double log_post_eff(const model::EfficacyParams& b, const EfficacyLikelihood& lik, const EffPriorSpec& prior = {});

}  // namespace doseplane::inference
