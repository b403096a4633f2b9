#include "doseplane/model/design_config.hpp"

#include "doseplane/errors.hpp"

namespace doseplane::model {

namespace {
void require_probability(double v, const char* field) {
    if (!(v > 0.0 && v < 1.0)) throw InputError(field, "must lie strictly between 0 and 1");
}
}  // namespace

void DesignConfig::validate() const {
    require_probability(theta_z, "theta_z");
    require_probability(theta_e, "theta_e");
    require_probability(ewoc_alpha_start, "ewoc_alpha_start");
    require_probability(ewoc_alpha_cap, "ewoc_alpha_cap");
    require_probability(delta_u, "delta_u");
    require_probability(delta0, "delta0");
    require_probability(delta_theta1, "delta_theta1");
    require_probability(delta_theta2, "delta_theta2");
    if (!(theta_z + safety_margin < 1.0) || !(safety_margin >= 0.0)) {
        throw InputError("safety_margin", "theta_z + safety_margin must stay below 1");
    }
    if (ewoc_alpha_start > ewoc_alpha_cap) throw InputError("ewoc_alpha_start", "must not exceed ewoc_alpha_cap");
    if (!(ewoc_alpha_step >= 0.0)) throw InputError("ewoc_alpha_step", "must be nonnegative");
    if (m1 != 2) throw InputError("m1", "stage-I escalation assigns patients in pairs; m1 must be 2");
    if (m2 < 1) throw InputError("m2", "must be positive");
    if (n1 < m1 || n1 % m1 != 0) throw InputError("n1", "must be a positive multiple of m1");
    if (n2 < 0 || n2 % m2 != 0) throw InputError("n2", "must be a nonnegative multiple of m2");
    if (grid_size < 2) throw InputError("grid_size", "must be at least 2");
}

}  // namespace doseplane::model
