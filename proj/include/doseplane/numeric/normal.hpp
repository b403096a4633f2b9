#pragma once

namespace doseplane::numeric {

/// Standard normal CDF, computed through erfc so the lower tail keeps full relative accuracy.
double std_normal_cdf(double t) noexcept;

/// Standard normal quantile (probit). Wichura's AS241 rational approximation, relative
/// error around 1e-16 over the whole open interval.
/// Throws DomainError unless 0 < p < 1.
double std_normal_quantile(double p);

/// log(Phi(t)) with Phi clamped to [lo, 1 - lo] first.
double log_std_normal_cdf_clamped(double t, double lo = 1e-12) noexcept;

}  // namespace doseplane::numeric
