#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "doseplane/errors.hpp"
#include "doseplane/sim/metrics.hpp"
#include "doseplane/sim/report_io.hpp"
#include "doseplane/util/atomic_file.hpp"
#include "fixtures.hpp"

using namespace doseplane;
using sim::Hypothesis;

namespace {

inference::McmcConfig quick_mcmc() {
    inference::McmcConfig m;
    m.iterations = 1000;
    m.burn_in = 250;
    return m;
}

double brute_distance(model::DoseCombo p, const model::MtdCurve& c, int n = 100000) {
    double best = INFINITY;
    for (int i = 0; i <= n; ++i) {
        const double x = c.x_lo() + (c.x_hi() - c.x_lo()) * i / n;
        const auto q = c.point_at(x);
        best = std::min(best, std::hypot(q.x - p.x, q.y - p.y));
    }
    return best;
}

sim::TrialResult hand_result(design::Phase phase, int n, int dlts, std::vector<double> pi_e, std::vector<double> pi_z) {
    sim::TrialResult r;
    r.phase = phase;
    for (int i = 0; i < n; ++i) {
        r.data.append({0.1, 0.1}, model::from_bool(i < dlts), model::Binary::zero, i < 2 ? 1 : 2, 1);
    }
    r.true_pi_e = std::move(pi_e);
    r.true_pi_z = std::move(pi_z);
    return r;
}

}  // namespace

TEST_CASE("outcome simulation") {
    const auto s = sim::builtin_scenario(1, 1, Hypothesis::h1);
    util::Rng rng(9);
    for (int i = 0; i < 1000; ++i) CHECK_FALSE(sim::simulate_outcome(s, {0, 0}, rng).z);

    auto sure = s;
    sure.eff.beta = {40.0, 0, 0, 0, 0, 0};
    for (int i = 0; i < 1000; ++i) CHECK(sim::simulate_outcome(sure, {0.3, 0.3}, rng).e);

    const model::DoseCombo d{0.6, 0.4};
    int z = 0, e = 0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const auto o = sim::simulate_outcome(s, d, rng);
        z += o.z;
        e += o.e;
    }
    CHECK(std::abs(z / double(n) - model::prob_dlt(s.tox, d)) < 0.005);
    CHECK(std::abs(e / double(n) - model::prob_eff(s.eff, d)) < 0.005);
}

TEST_CASE("builtin scenarios peak at the hypothesized efficacy") {
    const auto all = sim::builtin_scenarios();
    REQUIRE(all.size() == 16);
    for (const auto& c : fixtures::kTrueCurveMax) {
        const auto s = sim::builtin_scenario(c.tox, c.eff, c.h1 ? Hypothesis::h1 : Hypothesis::h0);
        CAPTURE(s.name);
        CHECK_NOTHROW(s.validate());
        const auto curve = model::build_mtd_curve(s.tox, 0.33, 201);
        double best = 0.0;
        for (int i = 0; i <= 200000; ++i) {
            const double x = curve.x_lo() + (curve.x_hi() - curve.x_lo()) * i / 200000.0;
            best = std::max(best, model::prob_eff(s.eff, curve.point_at(x)));
        }
        CHECK(best == doctest::Approx(c.max_pi_e).epsilon(1e-9));
        CHECK(std::abs(best - (c.h1 ? 0.40 : 0.15)) <= 0.01);
    }
    CHECK_THROWS_AS(sim::builtin_scenario(3, 1, Hypothesis::h0), std::out_of_range);
}

TEST_CASE("scenario files") {
    const auto s = sim::builtin_scenario(2, 3, Hypothesis::h0);
    const auto back = sim::scenario_from_json(sim::to_json(s));
    CHECK(back.tox == s.tox);
    CHECK(back.eff == s.eff);
    CHECK(back.hypothesis == Hypothesis::h0);
    CHECK(back.name == s.name);

    auto j = sim::to_json(s);
    j["tox"].erase("rho00");
    try {
        sim::scenario_from_json(j);
        FAIL("expected InputError");
    } catch (const InputError& e) {
        CHECK(e.field() == "tox.rho00");
    }
    j = sim::to_json(s);
    j["eff"]["beta2"] = -1.0;
    CHECK_THROWS_AS(sim::scenario_from_json(j), InputError);
    CHECK_THROWS_AS(sim::load_scenario("/nonexistent/scenario.json"), InputError);
}

TEST_CASE("bundled scenario files match the built-in scenarios") {
    for (const auto& s : sim::builtin_scenarios()) {
        CAPTURE(s.name);
        const auto f = sim::load_scenario(std::string(DOSEPLANE_SOURCE_DIR) + "/scenarios/" + s.name + ".json");
        CHECK(f.tox == s.tox);
        CHECK(f.eff == s.eff);
        CHECK(f.hypothesis == s.hypothesis);
        CHECK(f.tox_label == s.tox_label);
        CHECK(f.eff_label == s.eff_label);
    }
}

TEST_CASE("signed distance against brute force") {
    std::mt19937_64 gen(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto truth = model::build_mtd_curve({0.05, 0.4, 0.35, 1.0}, 0.33, 201);
    const auto est = model::build_mtd_curve({0.03, 0.5, 0.3, 2.0}, 0.33, 201);
    REQUIRE_FALSE(est.empty());

    CHECK(sim::signed_distance(truth.grid()[50], truth) == doctest::Approx(0.0).epsilon(1e-12));
    for (int i = 0; i < 60; ++i) {
        const model::DoseCombo p{u(gen), u(gen)};
        const double d = sim::signed_distance(p, est);
        CHECK(std::abs(std::abs(d) - brute_distance(p, est)) < 1e-6);
        if (p.x >= est.x_lo() && p.x <= est.x_hi()) CHECK((d > 0) == (est.y_at(p.x) > p.y));
    }
    // outside the estimated domain the nearest endpoint decides the sign
    const auto inner = model::build_mtd_curve({0.05, 0.6, 0.2, 1.0}, 0.33, 201);
    REQUIRE(inner.x_lo() > 0.1);
    REQUIRE(inner.x_hi() < 0.7);
    CHECK(sim::signed_distance({0.0, 0.5}, inner) > 0.0);
    CHECK(sim::signed_distance({0.9, 0.2}, inner) < 0.0);
    CHECK(sim::signed_distance({0.9, 0.0}, inner) < 0.0);  // level with the endpoint: falls back to x
    CHECK(sim::signed_distance({0.0, 1.0}, inner) > 0.0);

    const auto point = model::build_mtd_curve({0.33, 0.6, 0.6, 1.0}, 0.33, 201);
    REQUIRE(point.size() == 1);
    CHECK(std::abs(sim::signed_distance({0.3, 0.4}, point)) == doctest::Approx(0.5));
    CHECK_THROWS_AS(sim::signed_distance({0, 0}, model::MtdCurve{}), std::invalid_argument);
}

TEST_CASE("bias and percent correct") {
    const auto truth = model::build_mtd_curve({0.05, 0.4, 0.35, 1.0}, 0.33, 101);
    const std::vector<const model::MtdCurve*> same{&truth, &truth, nullptr};
    const auto t = sim::distance_table(truth, same);
    CHECK(t.excluded == 1);
    for (double b : sim::pointwise_bias(t)) CHECK(std::abs(b) < 1e-9);
    for (double r : sim::percent_correct(t, 0.1)) CHECK(r == 1.0);

    sim::DistanceTable h;
    h.true_grid = {{0.3, 0.4}, {0.6, 0.8}};
    h.distances = {{0.05, -0.1}, {-0.05, 0.2}};  // radius at p = 0.1 is 0.05 and 0.1
    const auto pc = sim::percent_correct(h, 0.1);
    CHECK(pc[0] == 1.0);  // |d| equal to the radius counts
    CHECK(pc[1] == 0.5);
    const auto bias = sim::pointwise_bias(h);
    CHECK(bias[0] == doctest::Approx(0.0));
    CHECK(bias[1] == doctest::Approx(0.05));
    CHECK_THROWS_AS(sim::percent_correct(h, 1.0), std::invalid_argument);

    const auto thirds = sim::bias_by_thirds({1, -1, 0, 0, 0, 0, 2, 2, -2});
    CHECK(thirds.left == doctest::Approx(2.0 / 3.0));
    CHECK(thirds.central == 0.0);
    CHECK(thirds.right == 2.0);
}

TEST_CASE("summary of hand-built results") {
    const auto s = sim::builtin_scenario(1, 1, Hypothesis::h1);
    const model::DesignConfig cfg;
    std::vector<sim::TrialResult> rs;
    rs.push_back(hand_result(design::Phase::completed, 4, 2, {0.1, 0.2, 0.3, 0.05}, {0.3, 0.3, 0.5, 0.5}));
    rs.back().max_exceedance = 0.9;
    rs.back().recommended = model::DoseCombo{0.5, 0.5};
    rs.push_back(hand_result(design::Phase::completed, 4, 1, {0.1, 0.1, 0.16, 0.16}, {0.2, 0.2, 0.2, 0.2}));
    rs.back().max_exceedance = 0.7;
    rs.back().recommended = model::DoseCombo{0.0, 0.0};
    rs.push_back(hand_result(design::Phase::stopped_futility, 2, 0, {0.1, 0.1}, {0.1, 0.1}));
    rs.push_back(hand_result(design::Phase::stopped_safety, 2, 2, {0.1, 0.1}, {0.6, 0.6}));

    const auto r = sim::summarize_oc(rs, s, cfg, 0.8);
    CHECK(r.j == 4);
    CHECK(r.completed == 2);
    CHECK(r.futility_stop_rate == 0.25);
    CHECK(r.safety_stop_rate == 0.25);
    CHECK(r.avg_dlt_rate == doctest::Approx((0.5 + 0.25 + 0.0 + 1.0) / 4));
    CHECK(r.frac_dlt_above_limit == 0.5);
    CHECK(r.avg_expected_dlt_rate == doctest::Approx((0.4 + 0.2 + 0.1 + 0.6) / 4));
    CHECK(r.frac_expected_dlt_above_limit == 0.25);
    CHECK(r.rejection_rate == 0.25);
    CHECK(r.recommendations == 2);
    CHECK(r.frac_rec_effective == doctest::Approx(model::prob_eff(s.eff, {0.5, 0.5}) >= 0.15 ? 0.5 : 0.0));
    CHECK(r.stage2_patients == 4);
    CHECK(r.frac_stage2_effective == 0.75);  // 0.3, 0.16, 0.16 of 0.3, 0.05, 0.16, 0.16
    CHECK(r.curves_excluded == 4);  // hand results carry no final curves

    std::vector<sim::TrialResult> futile(3, hand_result(design::Phase::stopped_futility, 2, 0, {0, 0}, {0, 0}));
    const auto f = sim::summarize_oc(futile, s, cfg, 0.8);
    CHECK(f.rejection_rate == 0.0);
    CHECK(f.futility_stop_rate == 1.0);
}

TEST_CASE("calibration sweeps one batch") {
    std::vector<sim::TrialResult> rs(20);
    for (std::size_t i = 0; i < rs.size(); ++i) rs[i].max_exceedance = 0.5 + 0.025 * i;  // 0.5 .. 0.975
    const auto cands = sim::default_delta_u_candidates();
    CHECK(cands.size() == 50);
    const auto any = sim::calibrate_delta_u(rs, cands, 1.0);
    CHECK(any.delta_u == 0.5);
    const auto c = sim::calibrate_delta_u(rs, cands, 0.15);
    CHECK(c.met);
    CHECK(c.type1 <= 0.15);
    CHECK(sim::rejection_rate(rs, c.delta_u - 0.01) > 0.15);
    for (std::size_t k = 1; k < c.sweep.size(); ++k) CHECK(c.sweep[k].second <= c.sweep[k - 1].second);

    for (auto& r : rs) r.max_exceedance = 0.999;
    const auto none = sim::calibrate_delta_u(rs, cands, 0.15);
    CHECK_FALSE(none.met);
    CHECK_FALSE(none.warning.empty());
    CHECK(none.delta_u == 0.99);
    CHECK_THROWS_AS(sim::calibrate_delta_u(rs, {1.5}, 0.1), std::invalid_argument);
}

TEST_CASE("trials are reproducible and independent of the worker count") {
    const auto s = sim::builtin_scenario(1, 1, Hypothesis::h1);
    const model::DesignConfig cfg;
    const auto a = sim::run_trial(s, cfg, quick_mcmc(), 42);
    const auto b = sim::run_trial(s, cfg, quick_mcmc(), 42);
    CHECK(a == b);
    CHECK(a.data.size() <= 60);
    if (a.completed()) {
        CHECK(a.data.size() == 60);
        CHECK(a.final_curve.has_value());
    }
    const auto one = sim::run_study(s, cfg, quick_mcmc(), 3, 11, 1);
    const auto three = sim::run_study(s, cfg, quick_mcmc(), 3, 11, 3);
    CHECK(one.results == three.results);
    CHECK(sim::to_json(one.report).dump() == sim::to_json(three.report).dump());
    CHECK(one.results[2].seed == (11u ^ 2u));
}

TEST_CASE("a very toxic truth stops for safety in stage 1") {
    sim::Scenario s = sim::builtin_scenario(1, 1, Hypothesis::h1);
    s.tox = {0.9, 0.95, 0.95, 1.0};
    const auto rs = sim::run_trials(s, {}, quick_mcmc(), 12, 3, 1);
    int stops = 0;
    for (const auto& r : rs) stops += r.stop_reason == design::StopReason::safety_stage1;
    CHECK(stops >= 11);
}

TEST_CASE("report files are a pure function of the results") {
    const auto s = sim::builtin_scenario(1, 1, Hypothesis::h1);
    const auto st = sim::run_study(s, {}, quick_mcmc(), 2, 5, 1);
    const auto base = std::filesystem::temp_directory_path() / "doseplane_report_test";
    std::filesystem::remove_all(base);
    sim::write_report(base / "a", st.report, st.results);
    sim::write_report(base / "b", st.report, st.results);
    for (const auto& f : sim::kReportFiles) {
        CAPTURE(f);
        CHECK(util::read_file(base / "a" / f) == util::read_file(base / "b" / f));
    }
    const auto j = nlohmann::json::parse(util::read_file(base / "a" / "oc_report.json"));
    CHECK(j["true_grid"].size() == 201);
    CHECK(j["j"] == 2);
    std::filesystem::remove_all(base);
}
