#pragma once

#include <cstdint>
#include <vector>

#include "doseplane/model/dose.hpp"

namespace doseplane::model {

/// Binary outcome that may still be unresolved (efficacy in conduct mode).
enum class Binary : std::int8_t { zero = 0, one = 1, pending = -1 };

inline bool resolved(Binary b) noexcept { return b != Binary::pending; }
inline int as_int(Binary b) noexcept { return b == Binary::one ? 1 : 0; }
inline Binary from_bool(bool v) noexcept { return v ? Binary::one : Binary::zero; }

struct PatientRecord {
    int index = 0;  ///< 1-based enrollment order
    DoseCombo dose{};
    Binary z = Binary::zero;  ///< DLT
    Binary e = Binary::zero;  ///< response
    int stage = 1;
    int cohort = 1;  ///< cohort index within its stage, 1-based

    bool operator==(const PatientRecord&) const = default;
};

/// Ordered enrollment history.
class TrialData {
  public:
    TrialData() = default;
    explicit TrialData(DoseWindow window) : window_(window) {}

    /// Appends with index = size() + 1. Throws InputError if the record would break
    /// stage ordering or carries a dose outside the unit square.
    const PatientRecord& append(DoseCombo dose, Binary z, Binary e, int stage, int cohort);
    /// Appends a fully specified record, checking index contiguity as well.
    void push(const PatientRecord& r);
    /// Resolves a pending efficacy outcome; throws InputError for unknown index or already-resolved e.
    void resolve_efficacy(int index, Binary e);

    const std::vector<PatientRecord>& records() const noexcept { return records_; }
    const DoseWindow& window() const noexcept { return window_; }
    std::size_t size() const noexcept { return records_.size(); }
    bool empty() const noexcept { return records_.empty(); }
    const PatientRecord& operator[](std::size_t i) const { return records_[i]; }

    int dlt_count() const noexcept;
    int dlt_resolved() const noexcept;

    bool operator==(const TrialData&) const = default;

  private:
    DoseWindow window_{};
    std::vector<PatientRecord> records_;
};

}  // namespace doseplane::model
