#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "billiard/errors.hpp"
#include "billiard/experiment.hpp"
#include "billiard/rate.hpp"
#include "support/fixtures.hpp"

using namespace billiard;

namespace {
constexpr double kPi = 3.14159265358979323846;

ExperimentConfig small_config() {
    ExperimentConfig c;
    c.table = testing::fh1_shared();
    c.lambda = 0.37;
    c.epsilon = 0.004;
    c.xi = 0.05;
    c.T = 1.2;
    c.trials = 64;
    c.master_seed = 2024;
    return c;
}
} // namespace

TEST_CASE("mu sampling: positions outside scatterers, symmetric angles") {
    const auto t = testing::fh1_table();
    Rng rng(1, 0);
    double sc = 0.0, ss = 0.0;
    const long n = 100000;
    for (long i = 0; i < n; ++i) {
        const auto s = sample_state(t, rng);
        CHECK(t.clearance(s.pos) >= 0.0);
        sc += std::cos(s.angle);
        ss += std::sin(s.angle);
    }
    const double sigma = std::sqrt(0.5 / n);
    CHECK(std::fabs(sc / n) <= 3.0 * sigma);
    CHECK(std::fabs(ss / n) <= 3.0 * sigma);
}

TEST_CASE("rejection stall fires on a degenerate table") {
    BilliardTable t = testing::fh1_table();
    // fabricate an (invalid) table whose scatterers cover the torus
    t.scatterers.clear();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            t.scatterers.push_back({{i / 3.0, j / 3.0}, 0.34});
    Rng rng(2, 0);
    CHECK_THROWS_AS(sample_state(t, rng), RejectionStall);
}

TEST_CASE("run_trial is deterministic in (config, trial_index)") {
    const auto c = small_config();
    for (long idx : {0L, 7L, 63L}) {
        const auto a = run_trial(c, idx);
        const auto b = run_trial(c, idx);
        CHECK(a.first_approach_time == b.first_approach_time);
        CHECK(a.first_good_time == b.first_good_time);
        CHECK(a.skipped_approaches == b.skipped_approaches);
        CHECK(a.good_count_total == b.good_count_total);
        CHECK(a.visit_count == b.visit_count);
        CHECK(a.grazing_flagged == b.grazing_flagged);
        CHECK(!a.faulted);
    }
}

TEST_CASE("scaled times respect the definitions") {
    const auto c = small_config();
    for (long idx = 0; idx < 32; ++idx) {
        const auto o = run_trial(c, idx);
        if (o.first_good_time) {
            REQUIRE(o.scaled_time.has_value());
            CHECK(*o.scaled_time == doctest::Approx(*o.first_good_time * c.epsilon));
            CHECK(*o.scaled_time <= c.T + 1e-12);
            REQUIRE(o.first_approach_time.has_value());
            CHECK(*o.first_approach_time <= *o.first_good_time + 1e-12);
        }
        if (o.first_approach_time && o.first_good_time)
            CHECK(o.skipped_approaches >= 0);
    }
}

TEST_CASE("ensemble is independent of the worker count") {
    const auto c = small_config();
    const auto r1 = run_ensemble(c, 1);
    const auto r2 = run_ensemble(c, 2);
    const auto r3 = run_ensemble(c, 3);
    REQUIRE(r1.outcomes.size() == r2.outcomes.size());
    for (std::size_t i = 0; i < r1.outcomes.size(); ++i) {
        CHECK(r1.outcomes[i].scaled_approach_time == r2.outcomes[i].scaled_approach_time);
        CHECK(r1.outcomes[i].scaled_time == r3.outcomes[i].scaled_time);
        CHECK(r1.outcomes[i].visit_count == r3.outcomes[i].visit_count);
    }
    CHECK(r1.summary.approach.ks_full == r2.summary.approach.ks_full);
    CHECK(r1.summary.good.ks_full == r3.summary.good.ks_full);
}

TEST_CASE("single-trial ensemble") {
    auto c = small_config();
    c.trials = 1;
    const auto r = run_ensemble(c, 1);
    CHECK(r.approach_dist.trials == 1);
    CHECK(r.approach_dist.times.size() + r.approach_dist.censored == 1);
}

TEST_CASE("horizon zero censors everything") {
    auto c = small_config();
    c.T = 0.0;
    c.trials = 16;
    const auto r = run_ensemble(c, 1);
    CHECK(r.approach_dist.censored == 16);
    CHECK(r.good_dist.censored == 16);
}

TEST_CASE("config validation") {
    auto c = small_config();
    c.epsilon = 0.03;  // violates the geometric bound epsilon <= xi/2
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = small_config();
    c.epsilon = 0.02;  // admissible geometrically, rejected by the statistics path
    CHECK_THROWS_AS(run_ensemble(c, 1), ConfigError);
    c = small_config();
    c.lambda = 1.5;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = small_config();
    c.xi = 0.2;  // violates xi < tau_min/4 ~ 0.039
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = small_config();
    c.trials = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = small_config();
    auto uncertified = std::make_shared<BilliardTable>(testing::fh1_table(false));
    c.table = uncertified;
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("first-encounter law smoke: exponential with rate 2 rho") {
    // The pair collision cross-section in 2D is 2 epsilon (the epsilon-tube
    // around the crossing surface has two sides), so the scaled
    // first-encounter time is Exp(2 rho) with rho the angular mean relative
    // speed over 2 pi |D|.  Kac's flux computation gives the same constant
    // at lambda = 0.  The acceptance suite carries the full-size version.
    auto c = small_config();
    c.trials = 400;
    c.T = 3.0 / rho_closed_form(c.lambda, c.table->domain_area).rho;
    const auto r = run_ensemble(c, 2);
    CHECK(r.summary.rho == doctest::Approx(1.0345284349656816 / c.table->domain_area));
    CHECK(r.summary.approach.mle_rate
          == doctest::Approx(2.0 * r.summary.rho).epsilon(0.15));
    const auto ks2 = ks_statistic(r.approach_dist, [&](double t) {
        return exponential_cdf(2.0 * r.summary.rho, t);
    });
    CHECK(ks2.full < 0.1);
    CHECK(r.summary.faults == 0);
}

TEST_CASE("micro encounter probability: precondition and smoke estimate") {
    auto c = small_config();
    c.epsilon = 0.002;
    CHECK_THROWS_AS(
        micro_encounter_probability({0.5, 0.09}, 0.0, c, 0.02, 100),
        ConfigError);  // clearance 0.01 < 2 xi

    // lambda = 0: band uses rho(0) = 1/|D|
    auto c0 = c;
    c0.lambda = 0.0;
    const TorusPoint base{0.72, 0.0};
    REQUIRE(c0.table->clearance(base) > 2.0 * c0.xi);
    const auto e = micro_encounter_probability(base, 0.3, c0, 0.04, 40000);
    CHECK(e.target == doctest::Approx(0.04 * c0.epsilon / c0.table->domain_area));
    CHECK(std::fabs(e.estimate - e.target) <= std::max(3.0 * e.ci95, 0.5 * e.target));
}

TEST_CASE("reencounter stats are internally consistent") {
    auto c = small_config();
    c.trials = 200;
    c.epsilon = 0.02 / 10.0;  // keep epsilon < xi/10
    c.T = 2.0;
    const auto r = reencounter_fraction(c, 1.0, 2);
    CHECK(r.trials == 200);
    CHECK(r.fraction_reencounter >= 0.0);
    CHECK(r.fraction_reencounter <= r.fraction_any_good);
    if (r.fraction_reencounter > 0.0) CHECK(r.min_good_gap > 0.0);
}
