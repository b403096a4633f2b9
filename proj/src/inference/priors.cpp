#include "doseplane/inference/priors.hpp"

#include <cmath>
#include <limits>

#include <boost/math/special_functions/gamma.hpp>

#include "doseplane/errors.hpp"
#include "doseplane/numeric/incomplete_beta.hpp"
#include "doseplane/numeric/normal.hpp"

namespace doseplane::inference {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void require_positive(double v, const char* field) {
    if (!(v > 0.0) || !std::isfinite(v)) throw InputError(field, "hyperparameter must be positive and finite");
}
}  // namespace

void ToxPriorSpec::validate() const {
    require_positive(rho01.a, "prior.tox.rho01.a");
    require_positive(rho01.b, "prior.tox.rho01.b");
    require_positive(rho10.a, "prior.tox.rho10.a");
    require_positive(rho10.b, "prior.tox.rho10.b");
    require_positive(ratio.a, "prior.tox.ratio.a");
    require_positive(ratio.b, "prior.tox.ratio.b");
    require_positive(alpha3.shape, "prior.tox.alpha3.shape");
    require_positive(alpha3.rate, "prior.tox.alpha3.rate");
}

void EffPriorSpec::validate() const {
    require_positive(beta0.sd, "prior.eff.beta0.sd");
    require_positive(beta4.sd, "prior.eff.beta4.sd");
    require_positive(beta5.sd, "prior.eff.beta5.sd");
    require_positive(beta1.shape, "prior.eff.beta1.shape");
    require_positive(beta1.rate, "prior.eff.beta1.rate");
    require_positive(beta2.shape, "prior.eff.beta2.shape");
    require_positive(beta2.rate, "prior.eff.beta2.rate");
    require_positive(beta3.shape, "prior.eff.beta3.shape");
    require_positive(beta3.rate, "prior.eff.beta3.rate");
}

double log_beta_pdf(double x, BetaPrior p) noexcept {
    if (!(x > 0.0 && x < 1.0)) return kNegInf;
    const double log_norm = std::lgamma(p.a + p.b) - std::lgamma(p.a) - std::lgamma(p.b);
    double v = log_norm;
    if (p.a != 1.0) v += (p.a - 1.0) * std::log(x);
    if (p.b != 1.0) v += (p.b - 1.0) * std::log1p(-x);
    return v;
}

double log_gamma_pdf(double x, GammaPrior p) noexcept {
    if (!(x > 0.0) || !std::isfinite(x)) return kNegInf;
    return p.shape * std::log(p.rate) - std::lgamma(p.shape) + (p.shape - 1.0) * std::log(x) - p.rate * x;
}

double log_normal_pdf(double x, NormalPrior p) noexcept {
    const double z = (x - p.mean) / p.sd;
    return -0.5 * z * z - std::log(p.sd) - 0.5 * std::log(2.0 * M_PI);
}

double beta_cdf(double x, BetaPrior p) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    return numeric::regularized_incomplete_beta(p.a, p.b, x);
}

double gamma_cdf(double x, GammaPrior p) {
    if (x <= 0.0) return 0.0;
    return boost::math::gamma_p(p.shape, p.rate * x);
}

double normal_cdf(double x, NormalPrior p) noexcept { return numeric::std_normal_cdf((x - p.mean) / p.sd); }

}  // namespace doseplane::inference
