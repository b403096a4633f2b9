#include "doseplane/design/engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "doseplane/errors.hpp"
#include "doseplane/numeric/incomplete_beta.hpp"

namespace doseplane::design {

using inference::ModelKind;
using inference::PosteriorDraws;
using model::Binary;
using model::DoseCombo;

std::string_view to_string(Phase p) noexcept {
    switch (p) {
        case Phase::stage1: return "stage1";
        case Phase::stage2: return "stage2";
        case Phase::stopped_safety: return "stopped_safety";
        case Phase::stopped_futility: return "stopped_futility";
        case Phase::completed: return "completed";
    }
    return "unknown";
}

std::string_view to_string(StopReason r) noexcept {
    switch (r) {
        case StopReason::none: return "none";
        case StopReason::safety_stage1: return "safety_stage1";
        case StopReason::safety_stage2: return "safety_stage2";
        case StopReason::supra_toxic_curve: return "supra_toxic_curve";
        case StopReason::futility: return "futility";
    }
    return "unknown";
}

Phase parse_phase(std::string_view s) {
    for (auto p : {Phase::stage1, Phase::stage2, Phase::stopped_safety, Phase::stopped_futility, Phase::completed}) {
        if (to_string(p) == s) return p;
    }
    throw InputError("phase", "unknown phase '" + std::string(s) + "'");
}

StopReason parse_stop_reason(std::string_view s) {
    for (auto r : {StopReason::none, StopReason::safety_stage1, StopReason::safety_stage2,
                   StopReason::supra_toxic_curve, StopReason::futility}) {
        if (to_string(r) == s) return r;
    }
    throw InputError("stop_reason", "unknown stop reason '" + std::string(s) + "'");
}

double feasibility_schedule(int cohort, const model::DesignConfig& config) {
    const double steps = std::max(0, cohort - 2);
    return std::min(config.ewoc_alpha_start + config.ewoc_alpha_step * steps, config.ewoc_alpha_cap);
}

TrialState start_trial(const model::DesignConfig& config, const inference::McmcConfig& mcmc,
                       const model::DoseWindow& window, std::uint64_t seed) {
    config.validate();
    mcmc.validate();
    window.validate();
    TrialState s;
    s.config = config;
    s.mcmc = mcmc;
    s.seed = seed;
    s.data = model::TrialData(window);
    s.phase = Phase::stage1;
    s.pending = stage1_next_assignments(s, nullptr);
    s.feasibility_bound = s.pending->feasibility_bound;
    return s;
}

PosteriorDraws fit(const TrialState& state, ModelKind kind) {
    auto cfg = state.mcmc;
    const auto tag = kind == ModelKind::toxicity ? util::stream::tox_fit : util::stream::eff_fit;
    cfg.seed = util::derive_seed(state.seed, tag, state.data.size());
    return inference::sample_posterior(kind, state.data, cfg, state.tox_prior, state.eff_prior);
}

CohortAssignment stage1_next_assignments(const TrialState& state, const PosteriorDraws* tox) {
    if (state.phase != Phase::stage1) throw StateError("stage-1 assignment requested outside stage 1");
    const int c = state.c1 + 1;
    if (c > state.config.stage1_cohorts()) throw StateError("stage 1 has no cohorts left");

    CohortAssignment a;
    a.stage = 1;
    a.cohort = c;
    a.feasibility_bound = feasibility_schedule(c, state.config);
    const int first = static_cast<int>(state.data.size()) + 1;
    if (c == 1) {
        a.patients = {{first, {0.0, 0.0}}, {first + 1, {0.0, 0.0}}};
        return a;
    }
    if (tox == nullptr || tox->empty()) throw StateError("stage-1 assignment needs toxicity draws");
    if (state.data.size() < 2) throw StateError("stage-1 assignment needs the previous cohort");

    const auto& recs = state.data.records();
    const DoseCombo prev_first = recs[recs.size() - 2].dose;
    const DoseCombo prev_second = recs[recs.size() - 1].dose;
    const double alpha = a.feasibility_bound;
    const double theta = state.config.theta_z;
    using inference::Axis;
    using inference::conditional_mtd_quantile;

    DoseCombo d1, d2;
    if (c % 2 == 0) {
        d1 = {conditional_mtd_quantile(*tox, Axis::y, prev_first.y, alpha, theta), prev_first.y};
        d2 = {prev_second.x, conditional_mtd_quantile(*tox, Axis::x, prev_second.x, alpha, theta)};
    } else {
        d1 = {prev_first.x, conditional_mtd_quantile(*tox, Axis::x, prev_first.x, alpha, theta)};
        d2 = {conditional_mtd_quantile(*tox, Axis::y, prev_second.y, alpha, theta), prev_second.y};
    }
    a.patients = {{first, d1}, {first + 1, d2}};
    return a;
}

std::optional<CohortAssignment> stage2_sample_cohort(const TrialState& state, util::Rng& rng) {
    if (state.phase != Phase::stage2) throw StateError("stage-2 assignment requested outside stage 2");
    if (!state.curve || !state.eff_median) throw StateError("stage-2 assignment needs fitted medians");
    const auto& curve = *state.curve;
    if (curve.emptiness() == model::CurveEmptiness::supra_toxic) return std::nullopt;

    CohortAssignment a;
    a.stage = 2;
    a.cohort = state.c2 + 1;
    const int first = static_cast<int>(state.data.size()) + 1;
    const int m = state.config.m2;

    if (curve.emptiness() == model::CurveEmptiness::sub_toxic) {
        for (int i = 0; i < m; ++i) a.patients.push_back({first + i, {1.0, 1.0}});
        return a;
    }
    const auto& grid = curve.grid();
    const std::size_t g = grid.size();
    if (g == 1) {
        a.density = {1.0};
        for (int i = 0; i < m; ++i) a.patients.push_back({first + i, grid[0]});
        return a;
    }

    const double h = (curve.x_hi() - curve.x_lo()) / static_cast<double>(g - 1);
    std::vector<double> w(g);
    double total = 0.0;
    for (std::size_t i = 0; i < g; ++i) {
        const double width = (i == 0 || i + 1 == g) ? 0.5 * h : h;
        w[i] = model::prob_eff(*state.eff_median, grid[i]) * width;
        total += w[i];
    }
    if (!(total > 0.0) || !std::isfinite(total)) {
        std::fill(w.begin(), w.end(), 1.0 / static_cast<double>(g));
    } else {
        for (auto& v : w) v /= total;
    }
    std::vector<double> cdf(g);
    std::partial_sum(w.begin(), w.end(), cdf.begin());

    for (int i = 0; i < m; ++i) {
        const double u = rng.uniform() * cdf.back();
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        const std::size_t cell = std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), g - 1);
        const double lo = std::max(curve.x_lo(), grid[cell].x - 0.5 * h);
        const double hi = std::min(curve.x_hi(), grid[cell].x + 0.5 * h);
        const double x = rng.uniform(lo, hi);
        a.patients.push_back({first + i, curve.point_at(x)});
    }
    a.density = std::move(w);
    return a;
}

bool futility_check(const inference::ExceedanceProfile& profile, const model::DesignConfig& config) {
    return profile.max < config.delta0;
}

bool futility_check(const PosteriorDraws& eff, const model::MtdCurve& curve, const model::DesignConfig& config) {
    return futility_check(inference::exceedance_profile(eff, curve, config.theta_e), config);
}

double stage1_overdose_probability(const PosteriorDraws& tox, const model::DesignConfig& config) {
    if (tox.empty()) throw std::invalid_argument("stage1_overdose_probability: no draws");
    const double limit = config.theta_z + config.safety_margin;
    const auto& rho = tox.column(PosteriorDraws::rho00);
    const auto hits = std::count_if(rho.begin(), rho.end(), [&](double r) { return r > limit; });
    return static_cast<double>(hits) / static_cast<double>(rho.size());
}

bool safety_check_stage1(const PosteriorDraws& tox, const model::DesignConfig& config) {
    return stage1_overdose_probability(tox, config) > config.delta_theta1;
}

double stage2_overdose_probability(int n, int s, const model::DesignConfig& config) {
    if (n < 0 || s < 0 || s > n) throw std::invalid_argument("stage2_overdose_probability: need 0 <= s <= n");
    const double a = 0.5 + s;
    const double b = 0.5 + (n - s);
    return numeric::regularized_incomplete_beta_upper(a, b, config.theta_z + config.safety_margin);
}

bool safety_check_stage2(int n, int s, const model::DesignConfig& config) {
    return stage2_overdose_probability(n, s, config) > config.delta_theta2;
}

FinalDecision final_decision(const TrialState& state, const PosteriorDraws& eff) {
    if (state.active()) throw StateError("final decision requested for an active trial");
    FinalDecision d;
    d.phase = state.phase;
    d.stop_reason = state.stop_reason;
    d.delta_u = state.config.delta_u;
    if (state.phase != Phase::completed) {
        d.note = "stopped early: " + std::string(to_string(state.stop_reason));
        return d;
    }
    if (!state.curve) throw StateError("completed trial has no fitted curve");
    d.curve = state.curve;
    if (state.curve->empty()) {
        d.note = "estimated MTD curve is empty (" + std::string(model::to_string(state.curve->emptiness())) + ")";
        return d;
    }
    d.profile = inference::exceedance_profile(eff, *state.curve, state.config.theta_e);
    d.optimal_exceedance = d.profile->max;
    d.optimal_index = d.profile->argmax;
    d.optimal = state.curve->grid()[d.profile->argmax];
    d.reject_h0 = d.profile->max > state.config.delta_u;
    return d;
}

FinalDecision decide(const TrialState& state) {
    if (state.active()) throw StateError("final decision requested for an active trial");
    if (state.phase != Phase::completed) return final_decision(state, PosteriorDraws{});
    if (state.eff_draws) return final_decision(state, *state.eff_draws);
    return final_decision(state, fit(state, ModelKind::efficacy));
}

namespace {

void refit_tox(TrialState& s) {
    auto draws = std::make_shared<const PosteriorDraws>(fit(s, ModelKind::toxicity));
    s.tox_median = inference::tox_medians(*draws);
    s.curve = model::build_mtd_curve(*s.tox_median, s.config.theta_z, s.config.grid_size);
    s.diagnostics.tox_max_rhat = draws->max_split_rhat();
    const auto& acc = draws->acceptance();
    s.diagnostics.tox_min_acceptance = acc.empty() ? 0.0 : *std::min_element(acc.begin(), acc.end());
    s.tox_draws = std::move(draws);
}

void refit_eff(TrialState& s) {
    auto draws = std::make_shared<const PosteriorDraws>(fit(s, ModelKind::efficacy));
    s.eff_median = inference::eff_medians(*draws);
    s.diagnostics.eff_max_rhat = draws->max_split_rhat();
    const auto& acc = draws->acceptance();
    s.diagnostics.eff_min_acceptance = acc.empty() ? 0.0 : *std::min_element(acc.begin(), acc.end());
    if (s.curve && !s.curve->empty()) {
        s.exceedance = inference::exceedance_profile(*draws, *s.curve, s.config.theta_e);
    } else {
        s.exceedance.reset();
    }
    s.eff_draws = std::move(draws);
}

void stop(TrialState& s, Phase phase, StopReason reason) {
    s.phase = phase;
    s.stop_reason = reason;
    s.pending.reset();
}

void prepare_stage2_cohort(TrialState& s) {
    util::Rng rng(util::derive_seed(s.seed, util::stream::stage2, static_cast<std::uint64_t>(s.c2 + 1)));
    auto next = stage2_sample_cohort(s, rng);
    if (!next) {
        stop(s, Phase::stopped_safety, StopReason::supra_toxic_curve);
        return;
    }
    s.pending = std::move(next);
}

}  // namespace

void advance(TrialState& state, std::span<const CohortOutcome> outcomes) {
    if (!state.active()) throw StateError("trial is no longer active (" + std::string(to_string(state.phase)) + ")");
    if (!state.pending) throw StateError("no cohort is pending");
    const auto& pending = *state.pending;
    if (outcomes.size() != pending.patients.size()) {
        throw InputError("outcomes", "expected " + std::to_string(pending.patients.size()) + " outcomes, got " +
                                         std::to_string(outcomes.size()));
    }
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        if (!model::resolved(outcomes[i].z)) {
            throw InputError("outcomes[" + std::to_string(i) + "].z", "DLT outcome must be 0 or 1");
        }
    }
    // Validate the whole cohort before touching the state.
    model::TrialData data = state.data;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        data.append(pending.patients[i].dose, outcomes[i].z, outcomes[i].e, pending.stage, pending.cohort);
    }
    state.data = std::move(data);
    state.pending.reset();
    const auto& cfg = state.config;

    if (state.phase == Phase::stage1) {
        ++state.c1;
        refit_tox(state);
        if (safety_check_stage1(*state.tox_draws, cfg)) {
            stop(state, Phase::stopped_safety, StopReason::safety_stage1);
            return;
        }
        if (state.c1 < cfg.stage1_cohorts()) {
            state.pending = stage1_next_assignments(state, state.tox_draws.get());
            state.feasibility_bound = state.pending->feasibility_bound;
            return;
        }
        state.phase = Phase::stage2;
        refit_eff(state);
        if (cfg.stage2_cohorts() == 0) {
            state.phase = Phase::completed;
            return;
        }
        prepare_stage2_cohort(state);
        return;
    }

    ++state.c2;
    refit_tox(state);
    refit_eff(state);
    if (state.c2 >= cfg.stage2_cohorts()) {
        state.phase = Phase::completed;
        return;
    }
    const int n = state.data.dlt_resolved();
    if (safety_check_stage2(n, state.data.dlt_count(), cfg)) {
        stop(state, Phase::stopped_safety, StopReason::safety_stage2);
        return;
    }
    if (state.curve->emptiness() == model::CurveEmptiness::supra_toxic) {
        stop(state, Phase::stopped_safety, StopReason::supra_toxic_curve);
        return;
    }
    if (state.exceedance && futility_check(*state.exceedance, cfg)) {
        stop(state, Phase::stopped_futility, StopReason::futility);
        return;
    }
    prepare_stage2_cohort(state);
}

void resolve_efficacy(TrialState& state, std::span<const std::pair<int, model::Binary>> updates) {
    model::TrialData data = state.data;
    for (std::size_t i = 0; i < updates.size(); ++i) {
        try {
            data.resolve_efficacy(updates[i].first, updates[i].second);
        } catch (const InputError& e) {
            const std::string what = e.what();
            throw InputError("updates[" + std::to_string(i) + "]." + e.field(), what.substr(e.field().size() + 2));
        }
    }
    state.data = std::move(data);
    if (state.eff_median) refit_eff(state);
}

}  // namespace doseplane::design
