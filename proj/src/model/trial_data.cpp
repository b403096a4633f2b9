#include "doseplane/model/trial_data.hpp"

#include <string>

#include "doseplane/errors.hpp"

namespace doseplane::model {

void TrialData::push(const PatientRecord& r) {
    const std::string field = "records[" + std::to_string(records_.size()) + "]";
    if (r.index != static_cast<int>(records_.size()) + 1) throw InputError(field + ".index", "indices must be contiguous from 1");
    if (r.stage != 1 && r.stage != 2) throw InputError(field + ".stage", "must be 1 or 2");
    if (!records_.empty() && records_.back().stage > r.stage) {
        throw InputError(field + ".stage", "stage-1 records must precede stage-2 records");
    }
    if (!in_unit_square(r.dose)) throw InputError(field + ".dose", "standardized dose outside [0,1]^2");
    if (r.cohort < 1) throw InputError(field + ".cohort", "must be positive");
    if (!resolved(r.z)) throw InputError(field + ".z", "DLT outcome must be resolved");
    records_.push_back(r);
}

const PatientRecord& TrialData::append(DoseCombo dose, Binary z, Binary e, int stage, int cohort) {
    push(PatientRecord{static_cast<int>(records_.size()) + 1, dose, z, e, stage, cohort});
    return records_.back();
}

void TrialData::resolve_efficacy(int index, Binary e) {
    if (index < 1 || index > static_cast<int>(records_.size())) {
        throw InputError("index", "no patient with index " + std::to_string(index));
    }
    auto& r = records_[static_cast<std::size_t>(index - 1)];
    if (resolved(r.e)) throw InputError("index", "efficacy of patient " + std::to_string(index) + " already resolved");
    if (!resolved(e)) throw InputError("e", "update must resolve the outcome");
    r.e = e;
}

int TrialData::dlt_count() const noexcept {
    int s = 0;
    for (const auto& r : records_) s += r.z == Binary::one ? 1 : 0;
    return s;
}

int TrialData::dlt_resolved() const noexcept {
    int n = 0;
    for (const auto& r : records_) n += resolved(r.z) ? 1 : 0;
    return n;
}

}  // namespace doseplane::model
