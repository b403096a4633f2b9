#include "doseplane/model/mtd_curve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "doseplane/errors.hpp"
#include "doseplane/numeric/normal.hpp"

namespace doseplane::model {

namespace {

MtdPoint solve_y(const ToxicityParamsNatural& n, double target, double x) {
    const double den = n.alpha2 + n.alpha3 * x;
    if (den == 0.0 || !std::isfinite(den)) {
        throw DomainError("mtd_y_given_x: singular curve (alpha2 + alpha3 x == 0)");
    }
    const double y = (target - n.alpha0 - n.alpha1 * x) / den;
    return {y, y >= 0.0 && y <= 1.0};
}

}  // namespace

MtdPoint mtd_y_given_x(const ToxicityParamsNatural& p, double theta_z, double x) {
    return solve_y(p, numeric::std_normal_quantile(theta_z), x);
}

MtdPoint mtd_y_given_x(const ToxicityParamsClinical& p, double theta_z, double x) {
    return mtd_y_given_x(to_natural(p), theta_z, x);
}

std::string_view to_string(CurveEmptiness e) noexcept {
    switch (e) {
        case CurveEmptiness::none: return "none";
        case CurveEmptiness::sub_toxic: return "sub_toxic";
        case CurveEmptiness::supra_toxic: return "supra_toxic";
    }
    return "unknown";
}

double MtdCurve::y_at(double x) const noexcept {
    return (target_ - natural_.alpha0 - natural_.alpha1 * x) / (natural_.alpha2 + natural_.alpha3 * x);
}

DoseCombo MtdCurve::point_at(double x) const noexcept {
    return {x, std::clamp(y_at(x), 0.0, 1.0)};
}

MtdCurve build_mtd_curve(const ToxicityParamsClinical& p, double theta_z, std::size_t grid_size) {
    if (grid_size < 2) throw std::invalid_argument("build_mtd_curve: grid_size must be at least 2");
    MtdCurve c;
    c.params_ = p;
    c.natural_ = to_natural(p);
    c.theta_z_ = theta_z;
    c.target_ = numeric::std_normal_quantile(theta_z);

    const auto& n = c.natural_;
    // Offset of the contour's linear predictor from the intercept.
    const double k = c.target_ - n.alpha0;
    if (k < 0.0) {
        c.emptiness_ = CurveEmptiness::supra_toxic;
        return c;
    }
    if (k > n.alpha1 + n.alpha2 + n.alpha3) {
        c.emptiness_ = CurveEmptiness::sub_toxic;
        return c;
    }
    // y(x) <= 1  <=>  x >= (k - a2) / (a1 + a3);   y(x) >= 0  <=>  x <= k / a1.
    c.x_lo_ = std::max(0.0, (k - n.alpha2) / (n.alpha1 + n.alpha3));
    c.x_hi_ = std::min(1.0, k / n.alpha1);
    if (c.x_hi_ < c.x_lo_) c.x_hi_ = c.x_lo_;

    if (c.x_hi_ - c.x_lo_ <= 1e-15) {
        c.grid_.push_back(c.point_at(c.x_lo_));
        return c;
    }
    c.grid_.reserve(grid_size);
    const double h = (c.x_hi_ - c.x_lo_) / static_cast<double>(grid_size - 1);
    for (std::size_t i = 0; i < grid_size; ++i) {
        const double x = i + 1 == grid_size ? c.x_hi_ : c.x_lo_ + h * static_cast<double>(i);
        c.grid_.push_back(c.point_at(x));
    }
    return c;
}

}  // namespace doseplane::model
