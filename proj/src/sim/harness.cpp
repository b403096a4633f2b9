#include "doseplane/sim/harness.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace doseplane::sim {

Outcome simulate_outcome(const Scenario& truth, model::DoseCombo dose, util::Rng& rng) {
    Outcome o;
    o.z = rng.bernoulli(model::prob_dlt(model::to_natural(truth.tox), dose));
    o.e = rng.bernoulli(model::prob_eff(truth.eff, dose));
    return o;
}

bool TrialResult::operator==(const TrialResult& o) const {
    const bool curves_equal =
        final_curve.has_value() == o.final_curve.has_value() &&
        (!final_curve || (final_curve->grid() == o.final_curve->grid() &&
                          final_curve->params() == o.final_curve->params() &&
                          final_curve->emptiness() == o.final_curve->emptiness()));
    return index == o.index && seed == o.seed && data == o.data && phase == o.phase &&
           stop_reason == o.stop_reason && reject_h0 == o.reject_h0 && recommended == o.recommended &&
           max_exceedance == o.max_exceedance && true_pi_e == o.true_pi_e && true_pi_z == o.true_pi_z && curves_equal;
}

TrialResult run_trial(const Scenario& truth, const model::DesignConfig& design, const inference::McmcConfig& mcmc,
                      std::uint64_t seed, const model::DoseWindow& window) {
    auto state = design::start_trial(design, mcmc, window, seed);
    util::Rng rng(util::derive_seed(seed, util::stream::outcomes));
    std::vector<design::CohortOutcome> outcomes;
    while (state.active()) {
        outcomes.clear();
        for (const auto& p : state.pending->patients) {
            const auto o = simulate_outcome(truth, p.dose, rng);
            outcomes.push_back({model::from_bool(o.z), model::from_bool(o.e)});
        }
        design::advance(state, outcomes);
    }
    const auto decision = design::decide(state);

    TrialResult r;
    r.seed = seed;
    r.phase = state.phase;
    r.stop_reason = state.stop_reason;
    r.reject_h0 = decision.reject_h0;
    r.recommended = decision.optimal;
    if (decision.profile) r.max_exceedance = decision.profile->max;
    if (r.completed()) r.final_curve = state.curve;
    const auto tox = model::to_natural(truth.tox);
    for (const auto& rec : state.data.records()) {
        r.true_pi_e.push_back(model::prob_eff(truth.eff, rec.dose));
        r.true_pi_z.push_back(model::prob_dlt(tox, rec.dose));
    }
    r.data = std::move(state.data);
    return r;
}

std::vector<TrialResult> run_trials(const Scenario& truth, const model::DesignConfig& design,
                                    const inference::McmcConfig& mcmc, std::size_t j, std::uint64_t base_seed,
                                    unsigned workers) {
    std::vector<TrialResult> results(j);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::size_t failed_at = j;
    std::mutex mu;

    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= j) return;
            try {
                results[i] = run_trial(truth, design, mcmc, base_seed ^ static_cast<std::uint64_t>(i));
                results[i].index = i;
            } catch (...) {
                std::lock_guard lock(mu);
                // Keep the lowest-index failure so the reported error is schedule independent.
                if (i < failed_at) {
                    failed_at = i;
                    failure = std::current_exception();
                }
            }
        }
    };
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(j, 1))));
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    return results;
}

}  // namespace doseplane::sim
