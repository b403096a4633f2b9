#pragma once

namespace doseplane::inference {

struct BetaPrior {
    double a = 1.0;
    double b = 1.0;
};

/// Shape/rate parameterization.
struct GammaPrior {
    double shape = 0.1;
    double rate = 0.1;
};

struct NormalPrior {
    double mean = 0.0;
    double sd = 10.0;
};

/// Vague toxicity prior: rho01, rho10 ~ beta(1,1); rho00 / min(rho01, rho10) ~ beta(1,1);
/// alpha3 ~ gamma(0.1, 0.1).
struct ToxPriorSpec {
    BetaPrior rho01{};
    BetaPrior rho10{};
    BetaPrior ratio{};
    GammaPrior alpha3{};

    void validate() const;
};

/// beta0, beta4, beta5 ~ N(0, 10^2); beta1, beta2, beta3 ~ gamma(0.1, 0.1); all independent.
struct EffPriorSpec {
    NormalPrior beta0{};
    GammaPrior beta1{};
    GammaPrior beta2{};
    GammaPrior beta3{};
    NormalPrior beta4{};
    NormalPrior beta5{};

    void validate() const;
};

double log_beta_pdf(double x, BetaPrior p) noexcept;
double log_gamma_pdf(double x, GammaPrior p) noexcept;
double log_normal_pdf(double x, NormalPrior p) noexcept;

double beta_cdf(double x, BetaPrior p);
double gamma_cdf(double x, GammaPrior p);
double normal_cdf(double x, NormalPrior p) noexcept;

}  // namespace doseplane::inference
