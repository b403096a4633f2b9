#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "doseplane/design/engine.hpp"
#include "doseplane/errors.hpp"
#include "fixtures.hpp"

using namespace doseplane;
using design::CohortOutcome;
using design::Phase;
using model::Binary;

namespace {

inference::McmcConfig quick_mcmc() {
    inference::McmcConfig m;
    m.iterations = 1500;
    m.burn_in = 400;
    return m;
}

std::vector<CohortOutcome> outcomes(std::size_t n, bool dlt, bool response) {
    return std::vector<CohortOutcome>(n, CohortOutcome{model::from_bool(dlt), model::from_bool(response)});
}

// Kolmogorov-Smirnov distance of a sample from the uniform law on [lo, hi].
double ks_uniform(std::vector<double> v, double lo, double hi) {
    std::sort(v.begin(), v.end());
    const double n = static_cast<double>(v.size());
    double d = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double f = (v[i] - lo) / (hi - lo);
        d = std::max({d, std::abs(f - i / n), std::abs((i + 1) / n - f)});
    }
    return d;
}

design::TrialState stage2_state(const model::EfficacyParams& eff_median) {
    auto s = design::start_trial({}, quick_mcmc(), {}, 3);
    s.phase = Phase::stage2;
    s.c1 = 15;
    s.tox_median = model::ToxicityParamsClinical{0.05, 0.4, 0.35, 1.0};
    s.curve = model::build_mtd_curve(*s.tox_median, 0.33, 201);
    s.eff_median = eff_median;
    s.pending.reset();
    return s;
}

}  // namespace

TEST_CASE("feasibility bound schedule") {
    CHECK(design::feasibility_schedule(1) == 0.25);
    CHECK(design::feasibility_schedule(2) == 0.25);
    CHECK(design::feasibility_schedule(3) == doctest::Approx(0.30));
    CHECK(design::feasibility_schedule(6) == doctest::Approx(0.45));
    CHECK(design::feasibility_schedule(7) == doctest::Approx(0.5));
    CHECK(design::feasibility_schedule(15) == 0.5);
}

TEST_CASE("a fresh trial puts the first cohort at the minimum combination") {
    const auto s = design::start_trial({}, quick_mcmc(), {}, 1);
    CHECK(s.phase == Phase::stage1);
    REQUIRE(s.pending);
    REQUIRE(s.pending->patients.size() == 2);
    for (const auto& p : s.pending->patients) CHECK(p.dose == model::DoseCombo{0.0, 0.0});
    CHECK(s.pending->patients[0].patient_index == 1);
    CHECK(s.pending->patients[1].patient_index == 2);
    CHECK(s.feasibility_bound == 0.25);
}

TEST_CASE("stage-1 escalation alternates the free agent") {
    std::vector<model::ToxicityParamsClinical> pts;
    for (int i = 0; i < 50; ++i) pts.push_back({0.02 + 0.001 * i, 0.3 + 0.004 * i, 0.25 + 0.003 * i, 0.5 + 0.02 * i});
    const auto draws = inference::PosteriorDraws::from_toxicity(pts);

    auto s = design::start_trial({}, quick_mcmc(), {}, 1);
    s.data.append({0.1, 0.2}, Binary::zero, Binary::zero, 1, 1);
    s.data.append({0.3, 0.4}, Binary::zero, Binary::zero, 1, 1);
    s.c1 = 1;
    const auto even = design::stage1_next_assignments(s, &draws);
    CHECK(even.cohort == 2);
    CHECK(even.feasibility_bound == 0.25);
    using inference::Axis;
    CHECK(even.patients[0].dose.y == 0.2);
    CHECK(even.patients[0].dose.x == inference::conditional_mtd_quantile(draws, Axis::y, 0.2, 0.25, 0.33));
    CHECK(even.patients[1].dose.x == 0.3);
    CHECK(even.patients[1].dose.y == inference::conditional_mtd_quantile(draws, Axis::x, 0.3, 0.25, 0.33));

    s.c1 = 2;
    const auto odd = design::stage1_next_assignments(s, &draws);
    CHECK(odd.feasibility_bound == doctest::Approx(0.30));
    CHECK(odd.patients[0].dose.x == 0.1);
    CHECK(odd.patients[0].dose.y == inference::conditional_mtd_quantile(draws, Axis::x, 0.1, 0.30, 0.33));
    CHECK(odd.patients[1].dose.y == 0.4);
    CHECK(odd.patients[1].dose.x == inference::conditional_mtd_quantile(draws, Axis::y, 0.4, 0.30, 0.33));

    CHECK_THROWS_AS(design::stage1_next_assignments(s, nullptr), StateError);
}

TEST_CASE("flat efficacy spreads stage-2 doses uniformly along the curve") {
    const auto s = stage2_state({{-1.0, 0.0, 0.0, 0.0, 0.0, 0.0}});
    const auto& curve = *s.curve;
    util::Rng rng(12345);
    std::vector<double> xs;
    while (xs.size() < 4000) {
        const auto a = design::stage2_sample_cohort(s, rng);
        REQUIRE(a);
        for (const auto& p : a->patients) {
            CHECK(std::abs(model::prob_dlt(*s.tox_median, p.dose) - 0.33) < 1e-9);
            xs.push_back(p.dose.x);
        }
    }
    CHECK(ks_uniform(xs, curve.x_lo(), curve.x_hi()) < 0.03);
}

TEST_CASE("stage-2 density follows the efficacy surface") {
    const auto s = stage2_state({{-2.0, 3.0, 0.1, 0.1, 0.0, 0.0}});
    util::Rng rng(7);
    const auto a = design::stage2_sample_cohort(s, rng);
    REQUIRE(a);
    CHECK(a->patients.size() == 5);
    CHECK(a->cohort == 1);
    CHECK(a->patients[0].patient_index == 1);
    REQUIRE(a->density.size() == 201);
    double total = 0.0;
    for (double w : a->density) total += w;
    CHECK(total == doctest::Approx(1.0));
    // efficacy rises with x along this curve, so the right end carries more weight
    CHECK(a->density[199] > a->density[1]);
}

TEST_CASE("stage-2 sampling on empty curves") {
    auto s = stage2_state({{-1.0, 0.5, 0.5, 0.5, 0.0, 0.0}});
    util::Rng rng(1);
    s.curve = model::build_mtd_curve({0.01, 0.05, 0.05, 0.0}, 0.33, 201);
    const auto sub = design::stage2_sample_cohort(s, rng);
    REQUIRE(sub);
    for (const auto& p : sub->patients) CHECK(p.dose == model::DoseCombo{1.0, 1.0});
    s.curve = model::build_mtd_curve({0.4, 0.6, 0.6, 1.0}, 0.33, 201);
    CHECK_FALSE(design::stage2_sample_cohort(s, rng));
}

TEST_CASE("stage-2 safety rule against the incomplete beta reference") {
    const model::DesignConfig cfg;
    for (const auto& c : fixtures::kStage2Overdose) {
        CAPTURE(c.n);
        CAPTURE(c.s);
        CHECK(std::abs(design::stage2_overdose_probability(c.n, c.s, cfg) - c.prob) < 1e-12);
        CHECK(design::safety_check_stage2(c.n, c.s, cfg) == (c.prob > 0.7));
    }
    CHECK(design::stage2_overdose_probability(0, 0, cfg) == doctest::Approx(0.5447).epsilon(1e-3));
    CHECK_THROWS_AS(design::stage2_overdose_probability(3, 4, cfg), std::invalid_argument);
}

TEST_CASE("stage-1 safety rule counts draws with rho00 above the limit") {
    std::vector<model::ToxicityParamsClinical> pts;
    for (int i = 0; i < 10; ++i) pts.push_back({0.40 + 0.02 * i, 0.9, 0.9, 1.0});  // 0.40 .. 0.58
    const auto draws = inference::PosteriorDraws::from_toxicity(pts);
    const model::DesignConfig cfg;
    CHECK(design::stage1_overdose_probability(draws, cfg) == doctest::Approx(0.8));
    CHECK(design::safety_check_stage1(draws, cfg));
    pts.resize(4);
    for (int i = 0; i < 6; ++i) pts.push_back({0.1, 0.9, 0.9, 1.0});
    // 0.40 and 0.42 sit below the limit, 0.44 and 0.46 above
    CHECK(design::stage1_overdose_probability(inference::PosteriorDraws::from_toxicity(pts), cfg) ==
          doctest::Approx(0.2));
    CHECK_FALSE(design::safety_check_stage1(inference::PosteriorDraws::from_toxicity(pts), cfg));
}

TEST_CASE("futility threshold") {
    const model::DesignConfig cfg;
    inference::ExceedanceProfile p;
    p.max = 0.0999;
    CHECK(design::futility_check(p, cfg));
    p.max = 0.1;
    CHECK_FALSE(design::futility_check(p, cfg));
}

TEST_CASE("final decision rejects when exceedance saturates") {
    auto s = stage2_state({{-1.0, 0.5, 0.5, 0.5, 0.0, 0.0}});
    s.phase = Phase::completed;
    const auto strong = inference::PosteriorDraws::from_efficacy(
        std::vector<model::EfficacyParams>(20, model::EfficacyParams{{1.0, 0.5, 0.5, 0.5, 0.0, 0.0}}));
    const auto d = design::final_decision(s, strong);
    CHECK(d.reject_h0);
    CHECK(d.optimal_exceedance == 1.0);
    REQUIRE(d.optimal_index);
    CHECK(*d.optimal_index == 0);  // first maximum wins
    CHECK(*d.optimal == s.curve->grid()[0]);

    const auto weak = inference::PosteriorDraws::from_efficacy(
        std::vector<model::EfficacyParams>(20, model::EfficacyParams{{-4.0, 0.1, 0.1, 0.1, 0.0, 0.0}}));
    CHECK_FALSE(design::final_decision(s, weak).reject_h0);

    s.phase = Phase::stopped_futility;
    s.stop_reason = design::StopReason::futility;
    const auto stopped = design::final_decision(s, strong);
    CHECK_FALSE(stopped.reject_h0);
    CHECK_FALSE(stopped.optimal);
    CHECK(stopped.stop_reason == design::StopReason::futility);

    s.phase = Phase::stage2;
    CHECK_THROWS_AS(design::final_decision(s, strong), StateError);
}

TEST_CASE("a trial with DLTs only at high doses runs both stages to completion") {
    auto s = design::start_trial({}, quick_mcmc(), {}, 2024);
    int cohorts = 0;
    while (s.active()) {
        REQUIRE(s.pending);
        const auto n = s.pending->patients.size();
        CHECK(n == (s.phase == Phase::stage1 ? 2u : 5u));
        std::vector<CohortOutcome> o;
        for (const auto& p : s.pending->patients) {
            o.push_back({model::from_bool(p.dose.x + p.dose.y > 0.9), Binary::one});
        }
        design::advance(s, o);
        ++cohorts;
    }
    CHECK(s.phase == Phase::completed);
    CHECK(cohorts == 21);
    CHECK(s.data.size() == 60);
    CHECK(s.c1 == 15);
    CHECK(s.c2 == 6);
    for (const auto& r : s.data.records()) CHECK(model::in_unit_square(r.dose));
    // escalation moved away from the origin
    CHECK(s.data[29].dose.x + s.data[29].dose.y > 0.5);
    const auto d = design::decide(s);
    CHECK(d.optimal);
    CHECK(d.reject_h0);
}

TEST_CASE("an all-DLT stream stops for safety in stage 1") {
    auto s = design::start_trial({}, quick_mcmc(), {}, 5);
    int cohorts = 0;
    while (s.active() && cohorts < 15) {
        design::advance(s, outcomes(2, true, false));
        ++cohorts;
    }
    CHECK(s.phase == Phase::stopped_safety);
    CHECK(s.stop_reason == design::StopReason::safety_stage1);
    CHECK(cohorts <= 3);
    CHECK_FALSE(s.pending);
    CHECK_THROWS_AS(design::advance(s, outcomes(2, false, false)), StateError);
}

TEST_CASE("advance rejects a wrong-sized cohort without mutating the state") {
    auto s = design::start_trial({}, quick_mcmc(), {}, 5);
    const auto before = s.data;
    CHECK_THROWS_AS(design::advance(s, outcomes(3, false, false)), InputError);
    std::vector<CohortOutcome> bad{{Binary::zero, Binary::zero}, {Binary::pending, Binary::zero}};
    CHECK_THROWS_AS(design::advance(s, bad), InputError);
    CHECK(s.data == before);
    CHECK(s.pending);
}

TEST_CASE("trials are reproducible from the seed") {
    auto run = [](std::uint64_t seed) {
        auto s = design::start_trial({}, quick_mcmc(), {}, seed);
        for (int c = 0; c < 4; ++c) design::advance(s, outcomes(2, c == 2, c % 2 == 0));
        return s;
    };
    const auto a = run(77);
    const auto b = run(77);
    CHECK(a.data == b.data);
    CHECK(a.pending == b.pending);
    CHECK(a.tox_median == b.tox_median);
}

TEST_CASE("pending efficacy can be resolved later") {
    auto s = design::start_trial({}, quick_mcmc(), {}, 5);
    std::vector<CohortOutcome> o{{Binary::zero, Binary::pending}, {Binary::zero, Binary::one}};
    design::advance(s, o);
    CHECK(s.data[0].e == Binary::pending);
    const std::vector<std::pair<int, Binary>> bad{{1, Binary::one}, {2, Binary::zero}};
    try {
        design::resolve_efficacy(s, bad);
        FAIL("expected InputError");
    } catch (const InputError& e) {
        CHECK(e.field() == "updates[1].index");
    }
    CHECK(s.data[0].e == Binary::pending);
    const std::vector<std::pair<int, Binary>> ok{{1, Binary::one}};
    design::resolve_efficacy(s, ok);
    CHECK(s.data[0].e == Binary::one);
}
