#include "doseplane/sim/report_io.hpp"

#include <fstream>
#include <sstream>

#include "doseplane/util/atomic_file.hpp"

namespace doseplane::sim {

using nlohmann::json;

namespace {

std::string num(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

json dose_pairs(const std::vector<model::DoseCombo>& pts) {
    json out = json::array();
    for (const auto& p : pts) out.push_back({p.x, p.y});
    return out;
}

}  // namespace

json to_json(const OcReport& r) {
    return {{"scenario", r.scenario},
            {"hypothesis", r.hypothesis},
            {"j", r.j},
            {"delta_u", r.delta_u},
            {"completed", r.completed},
            {"stopped_safety", r.stopped_safety},
            {"stopped_futility", r.stopped_futility},
            {"safety_stop_rate", r.safety_stop_rate},
            {"futility_stop_rate", r.futility_stop_rate},
            {"avg_dlt_rate", r.avg_dlt_rate},
            {"frac_dlt_above_limit", r.frac_dlt_above_limit},
            {"avg_expected_dlt_rate", r.avg_expected_dlt_rate},
            {"frac_expected_dlt_above_limit", r.frac_expected_dlt_above_limit},
            {"rejection_rate", r.rejection_rate},
            {"recommendations", r.recommendations},
            {"frac_rec_effective", r.frac_rec_effective},
            {"stage2_patients", r.stage2_patients},
            {"frac_stage2_effective", r.frac_stage2_effective},
            {"curves_used", r.curves_used},
            {"curves_excluded", r.curves_excluded},
            {"bias_thirds", {{"left", r.bias_thirds.left}, {"central", r.bias_thirds.central},
                             {"right", r.bias_thirds.right}}},
            {"true_grid", dose_pairs(r.true_grid)},
            {"bias", r.bias},
            {"pc10", r.pc10},
            {"pc20", r.pc20},
            {"recommended", dose_pairs(r.recommended)}};
}

json to_json(const CalibrationResult& c) {
    json sweep = json::array();
    for (const auto& [d, rate] : c.sweep) sweep.push_back({{"delta_u", d}, {"rejection_rate", rate}});
    json out = {{"delta_u", c.delta_u}, {"type1", c.type1}, {"met", c.met}, {"sweep", std::move(sweep)}};
    if (!c.warning.empty()) out["warning"] = c.warning;
    return out;
}

void write_report(const std::filesystem::path& dir, const OcReport& report, const std::vector<TrialResult>& results,
                  const model::DoseWindow& window) {
    std::filesystem::create_directories(dir);
    util::write_file_atomic(dir / "oc_report.json", to_json(report).dump(2) + "\n");

    std::ostringstream prof;
    prof << "i,x,y,raw_x,raw_y,bias,pc10,pc20\n";
    for (std::size_t i = 0; i < report.true_grid.size(); ++i) {
        const auto& p = report.true_grid[i];
        const auto raw = model::destandardize(p, window);
        prof << i << ',' << num(p.x) << ',' << num(p.y) << ',' << num(raw.x) << ',' << num(raw.y) << ','
             << num(report.bias[i]) << ',' << num(report.pc10[i]) << ',' << num(report.pc20[i]) << '\n';
    }
    util::write_file_atomic(dir / "profiles.csv", prof.str());

    std::ostringstream trials;
    trials << "j,seed,phase,stop_reason,patients,dlts,reject_h0,max_exceedance,rec_x,rec_y\n";
    for (const auto& r : results) {
        trials << r.index << ',' << r.seed << ',' << design::to_string(r.phase) << ','
               << design::to_string(r.stop_reason) << ',' << r.data.size() << ',' << r.data.dlt_count() << ','
               << (r.reject_h0 ? 1 : 0) << ',' << (r.max_exceedance ? num(*r.max_exceedance) : "") << ','
               << (r.recommended ? num(r.recommended->x) : "") << ','
               << (r.recommended ? num(r.recommended->y) : "") << '\n';
    }
    util::write_file_atomic(dir / "trials.csv", trials.str());

    std::ostringstream recs;
    recs << "j,x,y,raw_x,raw_y\n";
    for (const auto& r : results) {
        if (!r.recommended) continue;
        const auto raw = model::destandardize(*r.recommended, window);
        recs << r.index << ',' << num(r.recommended->x) << ',' << num(r.recommended->y) << ',' << num(raw.x) << ','
             << num(raw.y) << '\n';
    }
    util::write_file_atomic(dir / "recommendations.csv", recs.str());
}

}  // namespace doseplane::sim
