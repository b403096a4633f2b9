#include "doseplane/model/params.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "doseplane/errors.hpp"
#include "doseplane/numeric/normal.hpp"

namespace doseplane::model {

using numeric::std_normal_cdf;
using numeric::std_normal_quantile;

namespace {
bool open_unit(double v) { return v > 0.0 && v < 1.0; }
}  // namespace

bool ToxicityParamsClinical::valid() const noexcept {
    return open_unit(rho00) && open_unit(rho10) && open_unit(rho01) && rho00 < std::min(rho10, rho01) &&
           std::isfinite(alpha3) && alpha3 >= 0.0;
}

void ToxicityParamsClinical::validate() const {
    if (valid()) return;
    std::ostringstream os;
    os << "toxicity parameters (rho00=" << rho00 << ", rho10=" << rho10 << ", rho01=" << rho01
       << ", alpha3=" << alpha3 << ") violate 0 < rho00 < min(rho10, rho01) < 1, alpha3 >= 0";
    throw InvariantError(os.str());
}

bool ToxicityParamsNatural::valid() const noexcept {
    return std::isfinite(alpha0) && std::isfinite(alpha1) && std::isfinite(alpha2) && std::isfinite(alpha3) &&
           alpha1 > 0.0 && alpha2 > 0.0 && alpha3 >= 0.0;
}

void ToxicityParamsNatural::validate() const {
    if (valid()) return;
    std::ostringstream os;
    os << "toxicity parameters (alpha0=" << alpha0 << ", alpha1=" << alpha1 << ", alpha2=" << alpha2
       << ", alpha3=" << alpha3 << ") violate alpha1, alpha2 > 0, alpha3 >= 0";
    throw InvariantError(os.str());
}

bool EfficacyParams::valid() const noexcept {
    for (double b : beta) {
        if (!std::isfinite(b)) return false;
    }
    return beta[1] > 0.0 && beta[2] > 0.0 && beta[3] > 0.0;
}

void EfficacyParams::validate() const {
    if (valid()) return;
    std::ostringstream os;
    os << "efficacy parameters violate beta1, beta2, beta3 > 0 (beta1=" << beta[1] << ", beta2=" << beta[2]
       << ", beta3=" << beta[3] << ")";
    throw InvariantError(os.str());
}

ToxicityParamsNatural to_natural(const ToxicityParamsClinical& p) {
    p.validate();
    const double q00 = std_normal_quantile(p.rho00);
    return {q00, std_normal_quantile(p.rho10) - q00, std_normal_quantile(p.rho01) - q00, p.alpha3};
}

ToxicityParamsClinical to_clinical(const ToxicityParamsNatural& p) {
    p.validate();
    return {std_normal_cdf(p.alpha0), std_normal_cdf(p.alpha0 + p.alpha1), std_normal_cdf(p.alpha0 + p.alpha2),
            p.alpha3};
}

double tox_linear_predictor(const ToxicityParamsNatural& p, DoseCombo d) noexcept {
    return p.alpha0 + p.alpha1 * d.x + p.alpha2 * d.y + p.alpha3 * d.x * d.y;
}

double eff_linear_predictor(const EfficacyParams& b, DoseCombo d) noexcept {
    const auto& v = b.beta;
    return v[0] + v[1] * d.x + v[2] * d.y + v[3] * d.x * d.y + v[4] * d.x * d.x + v[5] * d.y * d.y;
}

double prob_dlt(const ToxicityParamsNatural& p, DoseCombo d) noexcept {
    return std_normal_cdf(tox_linear_predictor(p, d));
}

double prob_dlt(const ToxicityParamsClinical& p, DoseCombo d) { return prob_dlt(to_natural(p), d); }

double prob_eff(const EfficacyParams& b, DoseCombo d) noexcept { return std_normal_cdf(eff_linear_predictor(b, d)); }

}  // namespace doseplane::model
