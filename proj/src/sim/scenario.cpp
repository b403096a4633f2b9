#include "doseplane/sim/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "doseplane/errors.hpp"
#include "doseplane/util/json_fields.hpp"

namespace doseplane::sim {

using nlohmann::json;

std::string_view to_string(Hypothesis h) noexcept { return h == Hypothesis::h0 ? "H0" : "H1"; }

void Scenario::validate() const {
    const std::pair<const char*, double> rhos[] = {{"tox.rho00", tox.rho00}, {"tox.rho10", tox.rho10},
                                                    {"tox.rho01", tox.rho01}};
    for (const auto& [field, v] : rhos) {
        if (!(v > 0.0 && v < 1.0)) throw InputError(field, "must lie strictly between 0 and 1");
    }
    if (!(tox.rho00 < std::min(tox.rho10, tox.rho01))) {
        throw InputError("tox.rho00", "must be below both rho10 and rho01");
    }
    if (!(tox.alpha3 >= 0.0) || !std::isfinite(tox.alpha3)) throw InputError("tox.alpha3", "must be finite and >= 0");
    for (std::size_t i = 0; i < 6; ++i) {
        const auto field = "eff.beta" + std::to_string(i);
        if (!std::isfinite(eff.beta[i])) throw InputError(field, "must be finite");
        if (i >= 1 && i <= 3 && eff.beta[i] < 0.0) throw InputError(field, "must be >= 0");
    }
}

Scenario scenario_from_json(const json& j) {
    using util::as_number;
    using util::join_path;
    using util::require_field;
    util::require_object(j, "");
    Scenario s;
    if (auto it = j.find("name"); it != j.end()) s.name = util::as_string(*it, "name");

    const auto& tox = util::require_object(require_field(j, "tox", ""), "tox");
    s.tox.rho00 = as_number(require_field(tox, "rho00", "tox"), "tox.rho00");
    s.tox.rho10 = as_number(require_field(tox, "rho10", "tox"), "tox.rho10");
    s.tox.rho01 = as_number(require_field(tox, "rho01", "tox"), "tox.rho01");
    s.tox.alpha3 = as_number(require_field(tox, "alpha3", "tox"), "tox.alpha3");

    const auto& eff = util::require_object(require_field(j, "eff", ""), "eff");
    for (std::size_t i = 0; i < 6; ++i) {
        const auto key = "beta" + std::to_string(i);
        const bool optional = i >= 4;  // quadratic terms default to 0
        if (optional && !eff.contains(key)) continue;
        s.eff.beta[i] = as_number(require_field(eff, key, "eff"), join_path("eff", key));
    }

    const auto h = util::as_string(require_field(j, "hypothesis", ""), "hypothesis");
    if (h == "H0" || h == "h0") {
        s.hypothesis = Hypothesis::h0;
    } else if (h == "H1" || h == "h1") {
        s.hypothesis = Hypothesis::h1;
    } else {
        throw InputError("hypothesis", "must be \"H0\" or \"H1\"");
    }
    if (auto it = j.find("labels"); it != j.end()) {
        util::require_object(*it, "labels");
        util::read_opt(*it, "tox", "labels", s.tox_label);
        util::read_opt(*it, "eff", "labels", s.eff_label);
    }
    s.validate();
    return s;
}

json to_json(const Scenario& s) {
    json eff;
    for (std::size_t i = 0; i < 6; ++i) eff["beta" + std::to_string(i)] = s.eff.beta[i];
    return {{"name", s.name},
            {"tox", {{"rho00", s.tox.rho00}, {"rho10", s.tox.rho10}, {"rho01", s.tox.rho01}, {"alpha3", s.tox.alpha3}}},
            {"eff", eff},
            {"hypothesis", to_string(s.hypothesis)},
            {"labels", {{"tox", s.tox_label}, {"eff", s.eff_label}}}};
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("", "cannot open scenario file " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError("", "scenario file " + path + " is not valid JSON: " + e.what());
    }
    return scenario_from_json(j);
}

namespace {

struct EffRow {
    double b0_h0, b0_h1, b1, b2, b3;
};

// Rows indexed [tox - 1][eff - 1].
constexpr EffRow kEff[2][4] = {
    {{-6.3, -5.51, 2.0, 4.3, 10.0}, {-6.3, -5.51, 4.3, 2.0, 10.0}, {-7.3, -6.5, 6.17, 5.5, 0.0},
     {-4.8, -4.0, 1.25, 1.25, 12.0}},
    {{-2.8, -2.0, 0.05, 1.57, 1.0}, {-2.8, -2.0, 1.55, 0.05, 1.0}, {-6.6, -5.8, 4.63, 4.73, 0.0},
     {-7.28, -6.49, 0.2, 0.2, 26.0}},
};

constexpr model::ToxicityParamsClinical kTox[2] = {
    {1e-7, 0.3, 0.3, 2.0},
    {1e-5, 0.005, 0.01, 9.0},
};

}  // namespace

Scenario builtin_scenario(int tox_label, int eff_label, Hypothesis h) {
    if (tox_label < 1 || tox_label > 2 || eff_label < 1 || eff_label > 4) {
        throw std::out_of_range("builtin_scenario: labels are tox 1..2, eff 1..4");
    }
    const auto& row = kEff[tox_label - 1][eff_label - 1];
    Scenario s;
    s.tox = kTox[tox_label - 1];
    s.eff.beta = {h == Hypothesis::h0 ? row.b0_h0 : row.b0_h1, row.b1, row.b2, row.b3, 0.0, 0.0};
    s.hypothesis = h;
    s.tox_label = tox_label;
    s.eff_label = eff_label;
    s.name = "tox" + std::to_string(tox_label) + "_eff" + std::to_string(eff_label) + "_" +
             (h == Hypothesis::h0 ? "h0" : "h1");
    return s;
}

std::vector<Scenario> builtin_scenarios() {
    std::vector<Scenario> out;
    for (int t = 1; t <= 2; ++t) {
        for (int e = 1; e <= 4; ++e) {
            for (auto h : {Hypothesis::h0, Hypothesis::h1}) out.push_back(builtin_scenario(t, e, h));
        }
    }
    return out;
}

}  // namespace doseplane::sim
