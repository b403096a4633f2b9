#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "doseplane/model/params.hpp"

namespace doseplane::model {

/// y on the MTD contour at a given x, with no clamping; `in_range` tells whether y is in [0,1].
struct MtdPoint {
    double y = 0.0;
    bool in_range = false;
};

/// Solves pi_Z(x, y) = theta_z for y. Throws DomainError on a vanishing denominator
/// (impossible for valid parameters and x >= 0).
MtdPoint mtd_y_given_x(const ToxicityParamsClinical& p, double theta_z, double x);
MtdPoint mtd_y_given_x(const ToxicityParamsNatural& p, double theta_z, double x);

enum class CurveEmptiness {
    none,
    sub_toxic,    ///< pi_Z(1,1) < theta_z: every dose is below target
    supra_toxic,  ///< pi_Z(0,0) > theta_z: every dose is above target
};

std::string_view to_string(CurveEmptiness e) noexcept;

/// Discretized MTD contour {pi_Z = theta_z} restricted to the unit square.
///
/// y(x) is strictly decreasing, so the in-square part is the single x-interval
/// [x_lo, x_hi]. The grid is uniform in x over that interval. A contour that misses the
/// square is represented as an empty grid plus the reason.
class MtdCurve {
  public:
    MtdCurve() = default;

    const ToxicityParamsClinical& params() const noexcept { return params_; }
    const ToxicityParamsNatural& natural() const noexcept { return natural_; }
    double theta_z() const noexcept { return theta_z_; }
    const std::vector<DoseCombo>& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return grid_.size(); }
    bool empty() const noexcept { return grid_.empty(); }
    CurveEmptiness emptiness() const noexcept { return emptiness_; }
    double x_lo() const noexcept { return x_lo_; }
    double x_hi() const noexcept { return x_hi_; }

    /// Contour y at x without clamping; valid for any x in [0, 1].
    double y_at(double x) const noexcept;
    /// Point on the curve at x in [x_lo, x_hi], y clamped into [0, 1] against rounding.
    DoseCombo point_at(double x) const noexcept;

    friend MtdCurve build_mtd_curve(const ToxicityParamsClinical& p, double theta_z, std::size_t grid_size);

  private:
    ToxicityParamsClinical params_{};
    ToxicityParamsNatural natural_{};
    double theta_z_ = 0.0;
    double target_ = 0.0;  // Phi^{-1}(theta_z)
    double x_lo_ = 0.0;
    double x_hi_ = 0.0;
    CurveEmptiness emptiness_ = CurveEmptiness::none;
    std::vector<DoseCombo> grid_;
};

/// Throws InvariantError for invalid parameters and std::invalid_argument when grid_size < 2.
MtdCurve build_mtd_curve(const ToxicityParamsClinical& p, double theta_z, std::size_t grid_size);

}  // namespace doseplane::model
