#pragma once

namespace doseplane::numeric {

/// Regularized incomplete beta I_x(a, b), a, b > 0, 0 <= x <= 1.
/// Continued fraction (modified Lentz) on whichever side of the mean converges fastest.
double regularized_incomplete_beta(double a, double b, double x);

/// Upper tail 1 - I_x(a, b), evaluated without cancellation.
double regularized_incomplete_beta_upper(double a, double b, double x);

}  // namespace doseplane::numeric
