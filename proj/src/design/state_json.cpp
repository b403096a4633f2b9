#include "doseplane/design/state_json.hpp"

#include "doseplane/errors.hpp"
#include "doseplane/util/json_fields.hpp"

namespace doseplane::design {

using nlohmann::json;
using util::as_integer;
using util::as_number;
using util::index_path;
using util::join_path;
using util::read_opt;
using util::require_array;
using util::require_field;
using util::require_object;

namespace {

json binary_json(model::Binary b) {
    if (!model::resolved(b)) return nullptr;
    return model::as_int(b);
}

model::Binary binary_from_json(const json& v, const std::string& path, bool allow_pending) {
    if (v.is_null()) {
        if (!allow_pending) throw InputError(path, "outcome must be 0 or 1");
        return model::Binary::pending;
    }
    if (v.is_boolean()) return model::from_bool(v.get<bool>());
    const auto i = as_integer(v, path);
    if (i != 0 && i != 1) throw InputError(path, "outcome must be 0 or 1");
    return model::from_bool(i == 1);
}

json dose_json(model::DoseCombo d, const model::DoseWindow& w) {
    const auto raw = model::destandardize(d, w);
    return {{"x", d.x}, {"y", d.y}, {"raw_x", raw.x}, {"raw_y", raw.y}};
}

model::DoseCombo dose_from_json(const json& j, const std::string& path) {
    require_object(j, path);
    model::DoseCombo d{as_number(require_field(j, "x", path), join_path(path, "x")),
                       as_number(require_field(j, "y", path), join_path(path, "y"))};
    if (!model::in_unit_square(d)) throw InputError(path, "standardized dose must lie in [0,1]^2");
    return d;
}

json tox_json(const model::ToxicityParamsClinical& p) {
    const auto n = model::to_natural(p);
    return {{"rho00", p.rho00}, {"rho10", p.rho10}, {"rho01", p.rho01}, {"alpha3", p.alpha3},
            {"alpha0", n.alpha0}, {"alpha1", n.alpha1}, {"alpha2", n.alpha2}};
}

model::ToxicityParamsClinical tox_from_json(const json& j, const std::string& path) {
    require_object(j, path);
    model::ToxicityParamsClinical p;
    p.rho00 = as_number(require_field(j, "rho00", path), join_path(path, "rho00"));
    p.rho10 = as_number(require_field(j, "rho10", path), join_path(path, "rho10"));
    p.rho01 = as_number(require_field(j, "rho01", path), join_path(path, "rho01"));
    p.alpha3 = as_number(require_field(j, "alpha3", path), join_path(path, "alpha3"));
    if (!p.valid()) throw InputError(path, "toxicity parameters violate 0 < rho00 < min(rho10, rho01) < 1, alpha3 >= 0");
    return p;
}

json eff_json(const model::EfficacyParams& b) { return {{"beta", b.beta}}; }

model::EfficacyParams eff_from_json(const json& j, const std::string& path) {
    require_object(j, path);
    const auto bpath = join_path(path, "beta");
    const auto& arr = require_array(require_field(j, "beta", path), bpath);
    if (arr.size() != 6) throw InputError(bpath, "expected 6 coefficients");
    model::EfficacyParams b;
    for (std::size_t i = 0; i < 6; ++i) b.beta[i] = as_number(arr[i], index_path(bpath, i));
    return b;
}

json profile_json(const inference::ExceedanceProfile& p) {
    return {{"prob", p.prob}, {"argmax", p.argmax}, {"max", p.max}};
}

inference::ExceedanceProfile profile_from_json(const json& j, const std::string& path) {
    require_object(j, path);
    inference::ExceedanceProfile p;
    const auto ppath = join_path(path, "prob");
    const auto& arr = require_array(require_field(j, "prob", path), ppath);
    for (std::size_t i = 0; i < arr.size(); ++i) p.prob.push_back(as_number(arr[i], index_path(ppath, i)));
    read_opt(j, "argmax", path, p.argmax);
    read_opt(j, "max", path, p.max);
    if (!p.prob.empty() && p.argmax >= p.prob.size()) throw InputError(join_path(path, "argmax"), "out of range");
    return p;
}

}  // namespace

json to_json(const model::DesignConfig& c) {
    return {{"theta_z", c.theta_z},
            {"theta_e", c.theta_e},
            {"n1", c.n1},
            {"n2", c.n2},
            {"m1", c.m1},
            {"m2", c.m2},
            {"ewoc_alpha_start", c.ewoc_alpha_start},
            {"ewoc_alpha_cap", c.ewoc_alpha_cap},
            {"ewoc_alpha_step", c.ewoc_alpha_step},
            {"delta_u", c.delta_u},
            {"delta0", c.delta0},
            {"delta_theta1", c.delta_theta1},
            {"delta_theta2", c.delta_theta2},
            {"safety_margin", c.safety_margin},
            {"grid_size", c.grid_size}};
}

model::DesignConfig design_config_from_json(const json& j, const std::string& path) {
    require_object(j, path);
    model::DesignConfig c;
    read_opt(j, "theta_z", path, c.theta_z);
    read_opt(j, "theta_e", path, c.theta_e);
    read_opt(j, "n1", path, c.n1);
    read_opt(j, "n2", path, c.n2);
    read_opt(j, "m1", path, c.m1);
    read_opt(j, "m2", path, c.m2);
    read_opt(j, "ewoc_alpha_start", path, c.ewoc_alpha_start);
    read_opt(j, "ewoc_alpha_cap", path, c.ewoc_alpha_cap);
    read_opt(j, "ewoc_alpha_step", path, c.ewoc_alpha_step);
    read_opt(j, "delta_u", path, c.delta_u);
    read_opt(j, "delta0", path, c.delta0);
    read_opt(j, "delta_theta1", path, c.delta_theta1);
    read_opt(j, "delta_theta2", path, c.delta_theta2);
    read_opt(j, "safety_margin", path, c.safety_margin);
    read_opt(j, "grid_size", path, c.grid_size);
    util::validate_under(path, [&] { c.validate(); });
    return c;
}

json to_json(const inference::McmcConfig& c) {
    return {{"iterations", c.iterations}, {"burn_in", c.burn_in},
            {"thin", c.thin},             {"chains", c.chains},
            {"target_acceptance", c.target_acceptance}, {"threads", c.threads}};
}

inference::McmcConfig mcmc_config_from_json(const json& j, const std::string& path) {
    require_object(j, path);
    inference::McmcConfig c;
    read_opt(j, "iterations", path, c.iterations);
    read_opt(j, "burn_in", path, c.burn_in);
    read_opt(j, "thin", path, c.thin);
    read_opt(j, "chains", path, c.chains);
    read_opt(j, "target_acceptance", path, c.target_acceptance);
    read_opt(j, "threads", path, c.threads);
    util::validate_under(path, [&] { c.validate(); });
    return c;
}

json to_json(const model::DoseWindow& w) {
    return {{"x_min", w.x_min}, {"x_max", w.x_max}, {"y_min", w.y_min}, {"y_max", w.y_max}};
}

model::DoseWindow dose_window_from_json(const json& j, const std::string& path) {
    require_object(j, path);
    model::DoseWindow w;
    read_opt(j, "x_min", path, w.x_min);
    read_opt(j, "x_max", path, w.x_max);
    read_opt(j, "y_min", path, w.y_min);
    read_opt(j, "y_max", path, w.y_max);
    try {
        w.validate();
    } catch (const std::exception& e) {
        throw InputError(path, e.what());
    }
    return w;
}

json to_json(const model::PatientRecord& r) {
    return {{"index", r.index}, {"x", r.dose.x},     {"y", r.dose.y},          {"z", binary_json(r.z)},
            {"e", binary_json(r.e)}, {"stage", r.stage}, {"cohort", r.cohort}};
}

model::PatientRecord patient_record_from_json(const json& j, const std::string& path) {
    require_object(j, path);
    model::PatientRecord r;
    read_opt(j, "index", path, r.index);
    r.dose = dose_from_json(j, path);
    r.z = binary_from_json(require_field(j, "z", path), join_path(path, "z"), false);
    r.e = binary_from_json(require_field(j, "e", path), join_path(path, "e"), true);
    read_opt(j, "stage", path, r.stage);
    read_opt(j, "cohort", path, r.cohort);
    return r;
}

json to_json(const model::MtdCurve& c) {
    json grid = json::array();
    for (const auto& p : c.grid()) grid.push_back({p.x, p.y});
    return {{"emptiness", model::to_string(c.emptiness())},
            {"x_lo", c.x_lo()},
            {"x_hi", c.x_hi()},
            {"theta_z", c.theta_z()},
            {"grid", std::move(grid)}};
}

json to_json(const CohortAssignment& a, const model::DoseWindow& window) {
    json patients = json::array();
    for (const auto& p : a.patients) {
        auto d = dose_json(p.dose, window);
        d["index"] = p.patient_index;
        patients.push_back(std::move(d));
    }
    json out = {{"stage", a.stage}, {"cohort", a.cohort}, {"patients", std::move(patients)}};
    if (a.stage == 1) out["feasibility_bound"] = a.feasibility_bound;
    if (!a.density.empty()) out["density"] = a.density;
    return out;
}

CohortAssignment cohort_assignment_from_json(const json& j, const std::string& path) {
    require_object(j, path);
    CohortAssignment a;
    read_opt(j, "stage", path, a.stage);
    read_opt(j, "cohort", path, a.cohort);
    read_opt(j, "feasibility_bound", path, a.feasibility_bound);
    const auto ppath = join_path(path, "patients");
    const auto& arr = require_array(require_field(j, "patients", path), ppath);
    for (std::size_t i = 0; i < arr.size(); ++i) {
        const auto ip = index_path(ppath, i);
        Assignment p;
        p.dose = dose_from_json(arr[i], ip);
        p.patient_index = static_cast<int>(as_integer(require_field(arr[i], "index", ip), join_path(ip, "index")));
        a.patients.push_back(p);
    }
    if (auto it = j.find("density"); it != j.end()) {
        const auto dpath = join_path(path, "density");
        require_array(*it, dpath);
        for (std::size_t i = 0; i < it->size(); ++i) a.density.push_back(as_number((*it)[i], index_path(dpath, i)));
    }
    return a;
}

std::vector<CohortOutcome> outcomes_from_json(const json& j, const std::string& path) {
    require_array(j, path);
    std::vector<CohortOutcome> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const auto ip = index_path(path, i);
        require_object(j[i], ip);
        CohortOutcome o;
        o.z = binary_from_json(require_field(j[i], "z", ip), join_path(ip, "z"), false);
        auto e = j[i].find("e");
        o.e = e == j[i].end() ? model::Binary::pending : binary_from_json(*e, join_path(ip, "e"), true);
        out.push_back(o);
    }
    return out;
}

json to_json(const TrialState& s) {
    json records = json::array();
    for (const auto& r : s.data.records()) records.push_back(to_json(r));
    json out = {{"format_version", kStateFormatVersion},
                {"seed", std::to_string(s.seed)},
                {"config", to_json(s.config)},
                {"mcmc", to_json(s.mcmc)},
                {"window", to_json(s.data.window())},
                {"phase", to_string(s.phase)},
                {"stop_reason", to_string(s.stop_reason)},
                {"c1", s.c1},
                {"c2", s.c2},
                {"stage1_cohorts", s.config.stage1_cohorts()},
                {"stage2_cohorts", s.config.stage2_cohorts()},
                {"feasibility_bound", s.feasibility_bound},
                {"records", std::move(records)},
                {"dlt_count", s.data.dlt_count()},
                {"diagnostics",
                 {{"tox_max_rhat", s.diagnostics.tox_max_rhat},
                  {"eff_max_rhat", s.diagnostics.eff_max_rhat},
                  {"tox_min_acceptance", s.diagnostics.tox_min_acceptance},
                  {"eff_min_acceptance", s.diagnostics.eff_min_acceptance}}}};
    out["tox_median"] = s.tox_median ? tox_json(*s.tox_median) : json(nullptr);
    out["eff_median"] = s.eff_median ? eff_json(*s.eff_median) : json(nullptr);
    out["curve"] = s.curve ? to_json(*s.curve) : json(nullptr);
    out["exceedance"] = s.exceedance ? profile_json(*s.exceedance) : json(nullptr);
    out["pending"] = s.pending ? to_json(*s.pending, s.data.window()) : json(nullptr);
    return out;
}

TrialState state_from_json(const json& j) {
    const std::string root;
    require_object(j, "state");
    const auto version = as_integer(require_field(j, "format_version", root), "format_version");
    if (version != kStateFormatVersion) {
        throw InputError("format_version", "unsupported state format version " + std::to_string(version));
    }
    TrialState s;
    s.seed = util::as_uint64(require_field(j, "seed", root), "seed");
    s.config = design_config_from_json(require_field(j, "config", root), "config");
    if (auto it = j.find("mcmc"); it != j.end()) s.mcmc = mcmc_config_from_json(*it, "mcmc");
    model::DoseWindow window;
    if (auto it = j.find("window"); it != j.end()) window = dose_window_from_json(*it, "window");
    s.data = model::TrialData(window);
    s.phase = parse_phase(util::as_string(require_field(j, "phase", root), "phase"));
    if (auto it = j.find("stop_reason"); it != j.end()) {
        s.stop_reason = parse_stop_reason(util::as_string(*it, "stop_reason"));
    }
    read_opt(j, "c1", root, s.c1);
    read_opt(j, "c2", root, s.c2);
    read_opt(j, "feasibility_bound", root, s.feasibility_bound);

    const auto& recs = require_array(require_field(j, "records", root), "records");
    for (std::size_t i = 0; i < recs.size(); ++i) {
        const auto ip = index_path("records", i);
        auto r = patient_record_from_json(recs[i], ip);
        if (r.index == 0) r.index = static_cast<int>(i) + 1;
        try {
            s.data.push(r);
        } catch (const InputError& e) {
            throw InputError(ip, e.what());
        }
    }
    if (s.data.size() > static_cast<std::size_t>(s.config.total_patients())) {
        throw InputError("records", "more records than n1 + n2");
    }
    if (s.c1 < 0 || s.c1 > s.config.stage1_cohorts()) throw InputError("c1", "out of range");
    if (s.c2 < 0 || s.c2 > s.config.stage2_cohorts()) throw InputError("c2", "out of range");

    if (auto it = j.find("diagnostics"); it != j.end() && it->is_object()) {
        read_opt(*it, "tox_max_rhat", "diagnostics", s.diagnostics.tox_max_rhat);
        read_opt(*it, "eff_max_rhat", "diagnostics", s.diagnostics.eff_max_rhat);
        read_opt(*it, "tox_min_acceptance", "diagnostics", s.diagnostics.tox_min_acceptance);
        read_opt(*it, "eff_min_acceptance", "diagnostics", s.diagnostics.eff_min_acceptance);
    }
    if (auto it = j.find("tox_median"); it != j.end() && !it->is_null()) {
        s.tox_median = tox_from_json(*it, "tox_median");
        s.curve = model::build_mtd_curve(*s.tox_median, s.config.theta_z, s.config.grid_size);
    }
    if (auto it = j.find("eff_median"); it != j.end() && !it->is_null()) {
        s.eff_median = eff_from_json(*it, "eff_median");
    }
    if (auto it = j.find("exceedance"); it != j.end() && !it->is_null()) {
        s.exceedance = profile_from_json(*it, "exceedance");
    }
    if (auto it = j.find("pending"); it != j.end() && !it->is_null()) {
        if (!s.active()) throw InputError("pending", "a stopped or completed trial cannot have a pending cohort");
        s.pending = cohort_assignment_from_json(*it, "pending");
    }
    if (s.active() && !s.pending) throw InputError("pending", "an active trial needs a pending cohort");
    return s;
}

json to_json(const FinalDecision& d, const model::DoseWindow& window) {
    json out = {{"reject_h0", d.reject_h0},
                {"delta_u", d.delta_u},
                {"phase", to_string(d.phase)},
                {"stop_reason", to_string(d.stop_reason)},
                {"optimal_exceedance", d.optimal_exceedance}};
    out["optimal"] = d.optimal ? dose_json(*d.optimal, window) : json(nullptr);
    out["optimal_index"] = d.optimal_index ? json(*d.optimal_index) : json(nullptr);
    out["curve"] = d.curve ? to_json(*d.curve) : json(nullptr);
    out["exceedance"] = d.profile ? json(d.profile->prob) : json(nullptr);
    if (!d.note.empty()) out["note"] = d.note;
    out["summary"] = d.reject_h0 ? "reject H0" : "accept H0";
    if (d.phase == Phase::stopped_safety || d.phase == Phase::stopped_futility) {
        out["summary"] = "accept H0 (stopped: " + std::string(d.phase == Phase::stopped_safety ? "safety" : "futility") + ")";
    }
    return out;
}

}  // namespace doseplane::design
