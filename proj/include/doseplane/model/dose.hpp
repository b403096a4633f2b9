#pragma once

namespace doseplane::model {

/// Raw dose bounds (mg/m^2) for agents X and Y.
struct DoseWindow {
    double x_min = 50.0;
    double x_max = 100.0;
    double y_min = 10.0;
    double y_max = 25.0;

    /// Cisplatin (X) 50-100, cabazitaxel (Y) 10-25.
    static DoseWindow cisplatin_cabazitaxel() { return {}; }

    void validate() const;
    bool operator==(const DoseWindow&) const = default;
};

/// Standardized dose combination, both coordinates in [0, 1].
struct DoseCombo {
    double x = 0.0;
    double y = 0.0;

    bool operator==(const DoseCombo&) const = default;
};

/// Dose combination in raw units.
struct RawDose {
    double x = 0.0;
    double y = 0.0;
};

/// Affine maps onto [0,1]. Throws DomainError when the raw dose falls outside the window.
DoseCombo standardize(RawDose raw, const DoseWindow& window);
RawDose destandardize(DoseCombo dose, const DoseWindow& window);

bool in_unit_square(DoseCombo dose) noexcept;

}  // namespace doseplane::model
