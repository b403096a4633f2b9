#include "doseplane/inference/summaries.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "doseplane/kernels/kernels.hpp"
#include "doseplane/numeric/normal.hpp"

namespace doseplane::inference {

double quantile_sorted(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) throw std::invalid_argument("quantile of an empty sample");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("quantile level outside [0, 1]");
    const double h = static_cast<double>(sorted.size() - 1) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

double empirical_quantile(std::vector<double> values, double p) {
    std::sort(values.begin(), values.end());
    return quantile_sorted(values, p);
}

std::vector<double> posterior_medians(const PosteriorDraws& draws) {
    if (draws.empty()) throw std::invalid_argument("posterior_medians: no draws");
    std::vector<double> out;
    for (std::size_t k = 0; k < draws.primary_count(); ++k) out.push_back(empirical_quantile(draws.column(k), 0.5));
    return out;
}

model::ToxicityParamsClinical tox_medians(const PosteriorDraws& draws) {
    if (draws.kind() != ModelKind::toxicity) throw std::invalid_argument("tox_medians: efficacy draws");
    const auto m = posterior_medians(draws);
    return {m[0], m[1], m[2], m[3]};
}

model::EfficacyParams eff_medians(const PosteriorDraws& draws) {
    if (draws.kind() != ModelKind::efficacy) throw std::invalid_argument("eff_medians: toxicity draws");
    const auto m = posterior_medians(draws);
    return {{m[0], m[1], m[2], m[3], m[4], m[5]}};
}

std::vector<double> conditional_mtd_solutions(const PosteriorDraws& tox, Axis fixed_axis, double fixed_value,
                                              double theta_z) {
    if (tox.kind() != ModelKind::toxicity) throw std::invalid_argument("conditional_mtd_solutions: efficacy draws");
    const double target = numeric::std_normal_quantile(theta_z);
    const auto& a0 = tox.column(PosteriorDraws::alpha0);
    const auto& a1 = tox.column(PosteriorDraws::alpha1);
    const auto& a2 = tox.column(PosteriorDraws::alpha2);
    const auto& a3 = tox.column(PosteriorDraws::alpha3);
    const bool solve_x = fixed_axis == Axis::y;
    std::vector<double> out(tox.size());
    kernels::active_kernels().conditional_solve(a0.data(), solve_x ? a2.data() : a1.data(),
                                                solve_x ? a1.data() : a2.data(), a3.data(), target, fixed_value,
                                                out.size(), out.data());
    return out;
}

double conditional_mtd_quantile(const PosteriorDraws& tox, Axis fixed_axis, double fixed_value, double alpha,
                                double theta_z) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("conditional_mtd_quantile: alpha outside (0,1)");
    if (!(fixed_value >= 0.0 && fixed_value <= 1.0)) {
        throw std::invalid_argument("conditional_mtd_quantile: fixed dose outside [0,1]");
    }
    const double q = empirical_quantile(conditional_mtd_solutions(tox, fixed_axis, fixed_value, theta_z), alpha);
    return std::clamp(q, 0.0, 1.0);
}

ExceedanceProfile exceedance_profile(const PosteriorDraws& eff, const std::vector<model::DoseCombo>& points,
                                     double theta_e) {
    if (eff.kind() != ModelKind::efficacy) throw std::invalid_argument("exceedance_profile: toxicity draws");
    if (eff.empty()) throw std::invalid_argument("exceedance_profile: no draws");
    if (points.empty()) throw std::invalid_argument("exceedance_profile: empty curve");

    const std::size_t g = points.size();
    std::vector<double> f[6];
    for (auto& col : f) col.reserve(g);
    for (const auto& p : points) {
        f[0].push_back(1.0);
        f[1].push_back(p.x);
        f[2].push_back(p.y);
        f[3].push_back(p.x * p.y);
        f[4].push_back(p.x * p.x);
        f[5].push_back(p.y * p.y);
    }
    const double* feats[6];
    const double* draws[6];
    for (std::size_t k = 0; k < 6; ++k) {
        feats[k] = f[k].data();
        draws[k] = eff.column(k).data();
    }
    // Phi(eta) > theta_e  <=>  eta > Phi^{-1}(theta_e)
    const double threshold = numeric::std_normal_quantile(theta_e);
    std::vector<std::uint32_t> counts(g);
    kernels::active_kernels().exceedance_counts(draws, eff.size(), feats, g, 6, threshold, counts.data());

    ExceedanceProfile out;
    out.prob.resize(g);
    const double n = static_cast<double>(eff.size());
    for (std::size_t i = 0; i < g; ++i) {
        out.prob[i] = static_cast<double>(counts[i]) / n;
        if (out.prob[i] > out.prob[out.argmax]) out.argmax = i;
    }
    out.max = out.prob[out.argmax];
    return out;
}

ExceedanceProfile exceedance_profile(const PosteriorDraws& eff, const model::MtdCurve& curve, double theta_e) {
    return exceedance_profile(eff, curve.grid(), theta_e);
}

}  // namespace doseplane::inference
