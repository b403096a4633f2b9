#include <doctest.h>

#include <cmath>
#include <random>

#include "doseplane/errors.hpp"
#include "doseplane/model/design_config.hpp"
#include "doseplane/model/mtd_curve.hpp"
#include "doseplane/model/trial_data.hpp"
#include "doseplane/numeric/normal.hpp"
#include "fixtures.hpp"

using namespace doseplane;
using model::Binary;

namespace {

model::ToxicityParamsClinical random_tox(std::mt19937_64& gen) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    model::ToxicityParamsClinical p;
    do {
        p.rho10 = 0.01 + 0.98 * u(gen);
        p.rho01 = 0.01 + 0.98 * u(gen);
        p.rho00 = std::min(p.rho10, p.rho01) * (0.001 + 0.998 * u(gen));
        p.alpha3 = std::exp(8.0 * u(gen) - 5.0);
    } while (!p.valid());
    return p;
}

}  // namespace

TEST_CASE("clinical and natural parameters round trip") {
    std::mt19937_64 gen(5);
    for (int i = 0; i < 500; ++i) {
        const auto p = random_tox(gen);
        const auto q = model::to_clinical(model::to_natural(p));
        CHECK(q.rho00 == doctest::Approx(p.rho00).epsilon(1e-12));
        CHECK(q.rho10 == doctest::Approx(p.rho10).epsilon(1e-12));
        CHECK(q.rho01 == doctest::Approx(p.rho01).epsilon(1e-12));
        CHECK(q.alpha3 == p.alpha3);
        // corner probabilities are the clinical parameters
        CHECK(model::prob_dlt(p, {0, 0}) == doctest::Approx(p.rho00).epsilon(1e-12));
        CHECK(model::prob_dlt(p, {1, 0}) == doctest::Approx(p.rho10).epsilon(1e-12));
        CHECK(model::prob_dlt(p, {0, 1}) == doctest::Approx(p.rho01).epsilon(1e-12));
    }
}

TEST_CASE("parameter validation") {
    CHECK(model::ToxicityParamsClinical{0.1, 0.3, 0.2, 1.0}.valid());
    CHECK_FALSE(model::ToxicityParamsClinical{0.25, 0.3, 0.2, 1.0}.valid());
    CHECK_FALSE(model::ToxicityParamsClinical{0.1, 0.3, 0.2, -0.1}.valid());
    CHECK_FALSE(model::ToxicityParamsClinical{0.0, 0.3, 0.2, 1.0}.valid());
    CHECK_FALSE(model::ToxicityParamsClinical{0.1, 1.0, 0.2, 1.0}.valid());
    CHECK_THROWS_AS(model::ToxicityParamsClinical({0.25, 0.3, 0.2, 1.0}).validate(), InvariantError);
    CHECK_THROWS_AS(model::to_natural({0.25, 0.3, 0.2, 1.0}), InvariantError);

    model::EfficacyParams b{{-1.0, 0.5, 0.5, 0.5, 0.0, 0.0}};
    CHECK(b.valid());
    b.beta[3] = 0.0;
    CHECK_FALSE(b.valid());
}

TEST_CASE("every curve grid point sits on the target contour") {
    std::mt19937_64 gen(17);
    int nonempty = 0;
    for (int i = 0; i < 300; ++i) {
        const auto p = random_tox(gen);
        const auto c = model::build_mtd_curve(p, 0.33, 201);
        if (c.empty()) continue;
        ++nonempty;
        for (const auto& d : c.grid()) {
            CHECK(model::in_unit_square(d));
            CHECK(std::abs(model::prob_dlt(p, d) - 0.33) < 1e-9);
        }
        // y decreasing in x
        for (std::size_t k = 1; k < c.size(); ++k) CHECK(c.grid()[k].y <= c.grid()[k - 1].y);
    }
    CHECK(nonempty > 100);
}

TEST_CASE("empty and degenerate curves") {
    const auto supra = model::build_mtd_curve({0.4, 0.6, 0.6, 1.0}, 0.33, 201);
    CHECK(supra.empty());
    CHECK(supra.emptiness() == model::CurveEmptiness::supra_toxic);

    const auto sub = model::build_mtd_curve({0.01, 0.05, 0.05, 0.0}, 0.33, 201);
    CHECK(sub.empty());
    CHECK(sub.emptiness() == model::CurveEmptiness::sub_toxic);

    // rho00 exactly on target: the contour touches the square only at the origin
    const auto touch = model::build_mtd_curve({0.33, 0.6, 0.6, 1.0}, 0.33, 201);
    REQUIRE(touch.size() == 1);
    CHECK(touch.grid()[0].x == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(touch.grid()[0].y == doctest::Approx(0.0));

    CHECK_THROWS_AS(model::build_mtd_curve({0.1, 0.3, 0.3, 1.0}, 0.33, 1), std::invalid_argument);
}

TEST_CASE("scenario curves have the scanned domain") {
    const auto c1 = model::build_mtd_curve({1e-7, 0.3, 0.3, 2.0}, 0.33, 201);
    REQUIRE(c1.size() == 201);
    CHECK(c1.x_lo() == doctest::Approx(fixtures::kTrueCurveMax[0].x_lo).epsilon(1e-9));
    CHECK(c1.x_hi() == 1.0);
    const auto c2 = model::build_mtd_curve({1e-5, 0.005, 0.01, 9.0}, 0.33, 201);
    REQUIRE(c2.size() == 201);
    CHECK(c2.x_lo() == doctest::Approx(fixtures::kTrueCurveMax[8].x_lo).epsilon(1e-9));
    CHECK(c2.x_hi() == 1.0);
}

TEST_CASE("mtd_y_given_x matches the curve") {
    const model::ToxicityParamsClinical p{0.05, 0.4, 0.3, 1.5};
    const auto c = model::build_mtd_curve(p, 0.33, 51);
    for (const auto& d : c.grid()) {
        const auto m = model::mtd_y_given_x(p, 0.33, d.x);
        CHECK(m.y == doctest::Approx(d.y).epsilon(1e-12));
    }
    CHECK_FALSE(model::mtd_y_given_x(p, 0.33, 0.0).in_range);  // y(0) > 1 here
}

TEST_CASE("dose standardization") {
    const auto w = model::DoseWindow::cisplatin_cabazitaxel();
    const auto d = model::standardize({75.0, 10.0}, w);
    CHECK(d.x == doctest::Approx(0.5));
    CHECK(d.y == 0.0);
    const auto r = model::destandardize({1.0, 0.2}, w);
    CHECK(r.x == doctest::Approx(100.0));
    CHECK(r.y == doctest::Approx(13.0));
    CHECK_THROWS_AS(model::standardize({49.0, 10.0}, w), DomainError);
    CHECK_THROWS_AS(model::DoseWindow({100.0, 50.0, 10.0, 25.0}).validate(), InputError);
}

TEST_CASE("trial data bookkeeping") {
    model::TrialData t;
    t.append({0, 0}, Binary::zero, Binary::one, 1, 1);
    t.append({0, 0}, Binary::one, Binary::pending, 1, 1);
    CHECK(t.size() == 2);
    CHECK(t[1].index == 2);
    CHECK(t.dlt_count() == 1);
    CHECK(t.dlt_resolved() == 2);
    CHECK_THROWS_AS(t.append({1.2, 0}, Binary::zero, Binary::zero, 1, 2), InputError);
    t.append({0.5, 0.5}, Binary::zero, Binary::zero, 2, 1);
    CHECK_THROWS_AS(t.append({0.5, 0.5}, Binary::zero, Binary::zero, 1, 16), InputError);

    t.resolve_efficacy(2, Binary::one);
    CHECK(t[1].e == Binary::one);
    CHECK_THROWS_AS(t.resolve_efficacy(2, Binary::zero), InputError);
    CHECK_THROWS_AS(t.resolve_efficacy(9, Binary::zero), InputError);
}

TEST_CASE("design config validation names the field") {
    model::DesignConfig c;
    CHECK_NOTHROW(c.validate());
    CHECK(c.stage1_cohorts() == 15);
    CHECK(c.stage2_cohorts() == 6);
    c.theta_z = 1.2;
    try {
        c.validate();
        FAIL("expected InputError");
    } catch (const InputError& e) {
        CHECK(e.field() == "theta_z");
    }
    c = {};
    c.m1 = 3;
    CHECK_THROWS_AS(c.validate(), InputError);
}
