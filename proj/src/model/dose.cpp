#include "doseplane/model/dose.hpp"

#include <cmath>
#include <sstream>

#include "doseplane/errors.hpp"

namespace doseplane::model {

void DoseWindow::validate() const {
    if (!(std::isfinite(x_min) && std::isfinite(x_max) && x_min < x_max)) {
        throw InputError("window.x_min", "x_min must be finite and below x_max");
    }
    if (!(std::isfinite(y_min) && std::isfinite(y_max) && y_min < y_max)) {
        throw InputError("window.y_min", "y_min must be finite and below y_max");
    }
}

bool in_unit_square(DoseCombo d) noexcept { return d.x >= 0.0 && d.x <= 1.0 && d.y >= 0.0 && d.y <= 1.0; }

DoseCombo standardize(RawDose raw, const DoseWindow& w) {
    if (!(raw.x >= w.x_min && raw.x <= w.x_max && raw.y >= w.y_min && raw.y <= w.y_max)) {
        std::ostringstream os;
        os << "standardize: raw dose (" << raw.x << ", " << raw.y << ") outside window [" << w.x_min << ", "
           << w.x_max << "] x [" << w.y_min << ", " << w.y_max << "]";
        throw DomainError(os.str());
    }
    return {(raw.x - w.x_min) / (w.x_max - w.x_min), (raw.y - w.y_min) / (w.y_max - w.y_min)};
}

RawDose destandardize(DoseCombo d, const DoseWindow& w) {
    return {w.x_min + d.x * (w.x_max - w.x_min), w.y_min + d.y * (w.y_max - w.y_min)};
}

}  // namespace doseplane::model
