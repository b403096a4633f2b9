#include "doseplane/inference/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "doseplane/kernels/kernels.hpp"

namespace doseplane::inference {

using model::Binary;

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

ToxicityLikelihood::ToxicityLikelihood(const model::TrialData& data) {
    for (const auto& r : data.records()) {
        if (!model::resolved(r.z)) continue;
        ones_.push_back(1.0);
        x_.push_back(r.dose.x);
        y_.push_back(r.dose.y);
        xy_.push_back(r.dose.x * r.dose.y);
        sign_.push_back(r.z == Binary::one ? 1.0 : -1.0);
    }
}

double ToxicityLikelihood::operator()(const model::ToxicityParamsNatural& p) const {
    if (sign_.empty()) return 0.0;
    const double* cols[] = {ones_.data(), x_.data(), y_.data(), xy_.data()};
    const double coef[] = {p.alpha0, p.alpha1, p.alpha2, p.alpha3};
    return kernels::active_kernels().probit_loglik(cols, coef, 4, sign_.data(), sign_.size(), kProbClamp);
}

EfficacyLikelihood::EfficacyLikelihood(const model::TrialData& data) {
    for (const auto& r : data.records()) {
        if (!model::resolved(r.e)) continue;
        const double x = r.dose.x;
        const double y = r.dose.y;
        ones_.push_back(1.0);
        x_.push_back(x);
        y_.push_back(y);
        xy_.push_back(x * y);
        xx_.push_back(x * x);
        yy_.push_back(y * y);
        sign_.push_back(r.e == Binary::one ? 1.0 : -1.0);
    }
}

double EfficacyLikelihood::operator()(const model::EfficacyParams& b) const {
    if (sign_.empty()) return 0.0;
    const double* cols[] = {ones_.data(), x_.data(), y_.data(), xy_.data(), xx_.data(), yy_.data()};
    return kernels::active_kernels().probit_loglik(cols, b.beta.data(), 6, sign_.data(), sign_.size(), kProbClamp);
}

double log_prior_tox(const model::ToxicityParamsClinical& p, const ToxPriorSpec& prior) {
    if (!p.valid()) return kNegInf;
    const double m = std::min(p.rho01, p.rho10);
    return log_beta_pdf(p.rho01, prior.rho01) + log_beta_pdf(p.rho10, prior.rho10) +
           log_beta_pdf(p.rho00 / m, prior.ratio) - std::log(m) + log_gamma_pdf(p.alpha3, prior.alpha3);
}

double log_prior_eff(const model::EfficacyParams& b, const EffPriorSpec& prior) {
    if (!b.valid()) return kNegInf;
    const auto& v = b.beta;
    return log_normal_pdf(v[0], prior.beta0) + log_gamma_pdf(v[1], prior.beta1) + log_gamma_pdf(v[2], prior.beta2) +
           log_gamma_pdf(v[3], prior.beta3) + log_normal_pdf(v[4], prior.beta4) + log_normal_pdf(v[5], prior.beta5);
}

double log_post_tox(const model::ToxicityParamsClinical& p, const ToxicityLikelihood& lik, const ToxPriorSpec& prior) {
    const double lp = log_prior_tox(p, prior);
    if (!std::isfinite(lp)) return kNegInf;
    const double ll = lik(model::to_natural(p));
    return std::isfinite(ll) ? lp + ll : kNegInf;
}

double log_post_tox(const model::ToxicityParamsClinical& p, const model::TrialData& data, const ToxPriorSpec& prior) {
    return log_post_tox(p, ToxicityLikelihood(data), prior);
}

double log_post_eff(const model::EfficacyParams& b, const EfficacyLikelihood& lik, const EffPriorSpec& prior) {
    const double lp = log_prior_eff(b, prior);
    if (!std::isfinite(lp)) return kNegInf;
    const double ll = lik(b);
    return std::isfinite(ll) ? lp + ll : kNegInf;
}

double log_post_eff(const model::EfficacyParams& b, const model::TrialData& data, const EffPriorSpec& prior) {
    return log_post_eff(b, EfficacyLikelihood(data), prior);
}

}  // namespace doseplane::inference
