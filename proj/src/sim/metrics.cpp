#include "doseplane/sim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace doseplane::sim {

namespace {

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

double dist2(const model::MtdCurve& c, model::DoseCombo p, double t) {
    const auto q = c.point_at(t);
    const double dx = q.x - p.x;
    const double dy = q.y - p.y;
    return dx * dx + dy * dy;
}

}  // namespace

double signed_distance(model::DoseCombo p, const model::MtdCurve& estimate) {
    if (estimate.empty()) throw std::invalid_argument("signed_distance: empty estimated curve");
    const double lo = estimate.x_lo();
    const double hi = estimate.x_hi();

    double best_t = lo;
    if (hi > lo) {
        constexpr int kScan = 256;
        const double step = (hi - lo) / kScan;
        double best = dist2(estimate, p, lo);
        int best_k = 0;
        for (int k = 1; k <= kScan; ++k) {
            const double t = k == kScan ? hi : lo + step * k;
            const double d = dist2(estimate, p, t);
            if (d < best) {
                best = d;
                best_k = k;
            }
        }
        // Golden-section refinement inside the bracket around the best scan point.
        double a = std::max(lo, lo + step * (best_k - 1));
        double b = std::min(hi, lo + step * (best_k + 1));
        const double g = 0.5 * (std::sqrt(5.0) - 1.0);
        double c = b - g * (b - a);
        double d = a + g * (b - a);
        double fc = dist2(estimate, p, c);
        double fd = dist2(estimate, p, d);
        for (int it = 0; it < 200 && b - a > 1e-13; ++it) {
            if (fc < fd) {
                b = d;
                d = c;
                fd = fc;
                c = b - g * (b - a);
                fc = dist2(estimate, p, c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + g * (b - a);
                fd = dist2(estimate, p, d);
            }
        }
        best_t = 0.5 * (a + b);
        if (dist2(estimate, p, best_t) > best) best_t = lo + step * best_k;
        for (double t : {lo, hi}) {
            if (dist2(estimate, p, t) < dist2(estimate, p, best_t)) best_t = t;
        }
    }
    const double dist = std::sqrt(dist2(estimate, p, best_t));

    int s;
    if (p.x >= lo && p.x <= hi) {
        s = sign_of(estimate.y_at(p.x) - p.y);
    } else {
        const auto end = estimate.point_at(p.x < lo ? lo : hi);
        s = sign_of(end.y - p.y);
        if (s == 0) s = sign_of(end.x - p.x);
    }
    return s * dist;
}

DistanceTable distance_table(const model::MtdCurve& truth, const std::vector<const model::MtdCurve*>& estimates) {
    DistanceTable t;
    t.true_grid = truth.grid();
    for (const auto* est : estimates) {
        if (est == nullptr || est->empty()) {
            ++t.excluded;
            continue;
        }
        std::vector<double> row;
        row.reserve(t.true_grid.size());
        for (const auto& p : t.true_grid) row.push_back(signed_distance(p, *est));
        t.distances.push_back(std::move(row));
    }
    return t;
}

std::vector<double> pointwise_bias(const DistanceTable& t) {
    std::vector<double> out(t.true_grid.size(), 0.0);
    if (t.distances.empty()) return out;
    for (const auto& row : t.distances) {
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += row[i];
    }
    for (auto& v : out) v /= static_cast<double>(t.distances.size());
    return out;
}

std::vector<double> percent_correct(const DistanceTable& t, double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("percent_correct: p must lie in (0, 1)");
    std::vector<double> out(t.true_grid.size(), 0.0);
    if (t.distances.empty()) return out;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double radius = p * std::hypot(t.true_grid[i].x, t.true_grid[i].y);
        std::size_t hits = 0;
        for (const auto& row : t.distances) hits += std::abs(row[i]) <= radius ? 1 : 0;
        out[i] = static_cast<double>(hits) / static_cast<double>(t.distances.size());
    }
    return out;
}

BiasThirds bias_by_thirds(const std::vector<double>& bias) {
    BiasThirds b;
    const std::size_t n = bias.size();
    if (n < 3) return b;
    auto mean_abs = [&](std::size_t from, std::size_t to) {
        double s = 0.0;
        for (std::size_t i = from; i < to; ++i) s += std::abs(bias[i]);
        return s / static_cast<double>(to - from);
    };
    b.left = mean_abs(0, n / 3);
    b.central = mean_abs(n / 3, 2 * n / 3);
    b.right = mean_abs(2 * n / 3, n);
    return b;
}

double rejection_rate(const std::vector<TrialResult>& results, double delta_u) {
    if (results.empty()) return 0.0;
    std::size_t rejected = 0;
    for (const auto& r : results) rejected += (r.completed() && r.max_exceedance && *r.max_exceedance > delta_u) ? 1 : 0;
    return static_cast<double>(rejected) / static_cast<double>(results.size());
}

OcReport summarize_oc(const std::vector<TrialResult>& results, const Scenario& truth,
                      const model::DesignConfig& design, double delta_u) {
    OcReport rep;
    rep.scenario = truth.name;
    rep.hypothesis = std::string(to_string(truth.hypothesis));
    rep.j = results.size();
    rep.delta_u = delta_u;
    if (results.empty()) return rep;
    const double jd = static_cast<double>(results.size());

    std::size_t above = 0;
    std::size_t expected_above = 0;
    double expected_sum = 0.0;
    std::size_t rec_effective = 0;
    std::size_t stage2_effective = 0;
    double dlt_sum = 0.0;
    std::vector<const model::MtdCurve*> curves;
    for (const auto& r : results) {
        switch (r.phase) {
            case design::Phase::completed: ++rep.completed; break;
            case design::Phase::stopped_safety: ++rep.stopped_safety; break;
            case design::Phase::stopped_futility: ++rep.stopped_futility; break;
            default: break;
        }
        const double n = static_cast<double>(r.data.size());
        const double rate = n > 0 ? r.data.dlt_count() / n : 0.0;
        dlt_sum += rate;
        above += rate > design.theta_z + design.safety_margin ? 1 : 0;
        double expected = 0.0;
        for (double p : r.true_pi_z) expected += p;
        expected = r.true_pi_z.empty() ? 0.0 : expected / static_cast<double>(r.true_pi_z.size());
        expected_sum += expected;
        expected_above += expected > design.theta_z + design.safety_margin ? 1 : 0;
        if (r.recommended) {
            ++rep.recommendations;
            rep.recommended.push_back(*r.recommended);
            rec_effective += model::prob_eff(truth.eff, *r.recommended) >= design.theta_e ? 1 : 0;
        }
        for (std::size_t i = 0; i < r.data.size(); ++i) {
            if (r.data[i].stage != 2) continue;
            ++rep.stage2_patients;
            stage2_effective += r.true_pi_e[i] > design.theta_e ? 1 : 0;
        }
        curves.push_back(r.completed() && r.final_curve ? &*r.final_curve : nullptr);
    }
    rep.safety_stop_rate = rep.stopped_safety / jd;
    rep.futility_stop_rate = rep.stopped_futility / jd;
    rep.avg_dlt_rate = dlt_sum / jd;
    rep.frac_dlt_above_limit = above / jd;
    rep.avg_expected_dlt_rate = expected_sum / jd;
    rep.frac_expected_dlt_above_limit = expected_above / jd;
    rep.rejection_rate = rejection_rate(results, delta_u);
    rep.frac_rec_effective = rep.recommendations ? static_cast<double>(rec_effective) / rep.recommendations : 0.0;
    rep.frac_stage2_effective =
        rep.stage2_patients ? static_cast<double>(stage2_effective) / rep.stage2_patients : 0.0;

    const auto true_curve = model::build_mtd_curve(truth.tox, design.theta_z, design.grid_size);
    const auto table = distance_table(true_curve, curves);
    rep.true_grid = table.true_grid;
    rep.bias = pointwise_bias(table);
    rep.pc10 = percent_correct(table, 0.1);
    rep.pc20 = percent_correct(table, 0.2);
    rep.bias_thirds = bias_by_thirds(rep.bias);
    rep.curves_used = table.distances.size();
    rep.curves_excluded = table.excluded;
    return rep;
}

std::vector<double> default_delta_u_candidates() {
    std::vector<double> out;
    for (int k = 50; k <= 99; ++k) out.push_back(k / 100.0);
    return out;
}

CalibrationResult calibrate_delta_u(const std::vector<TrialResult>& h0_results, std::vector<double> candidates,
                                    double target) {
    if (candidates.empty()) throw std::invalid_argument("calibrate_delta_u: no candidates");
    for (double c : candidates) {
        if (!(c > 0.0 && c < 1.0)) throw std::invalid_argument("calibrate_delta_u: candidates must lie in (0, 1)");
    }
    std::sort(candidates.begin(), candidates.end());
    CalibrationResult out;
    for (double c : candidates) out.sweep.emplace_back(c, rejection_rate(h0_results, c));
    for (const auto& [c, rate] : out.sweep) {
        if (rate <= target) {
            out.delta_u = c;
            out.type1 = rate;
            return out;
        }
    }
    out.met = false;
    auto best = out.sweep.front();
    for (const auto& s : out.sweep) {
        if (s.second <= best.second) best = s;
    }
    out.delta_u = best.first;
    out.type1 = best.second;
    out.warning = "no candidate reaches the target type-I error; using the closest";
    return out;
}

Study run_study(const Scenario& truth, const model::DesignConfig& design, const inference::McmcConfig& mcmc,
                std::size_t j, std::uint64_t base_seed, unsigned workers) {
    if (j == 0) throw std::invalid_argument("run_study: J must be at least 1");
    Study s;
    s.results = run_trials(truth, design, mcmc, j, base_seed, workers);
    s.report = summarize_oc(s.results, truth, design, design.delta_u);
    return s;
}

}  // namespace doseplane::sim
