#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "billiard/errors.hpp"
#include "billiard/rate.hpp"
#include "billiard/rng.hpp"
#include "billiard/stats.hpp"

using namespace billiard;

TEST_CASE("one-point sample at the model median gives KS = 1/2") {
    const double rho = 2.0;
    const double median = std::log(2.0) / rho;
    const auto emp = make_empirical({median}, 0, 10.0);
    const auto ks = ks_statistic(emp, [&](double t) { return exponential_cdf(rho, t); });
    CHECK(ks.full == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("quantile-grid sample has KS <= 1/(N+1) plus slack") {
    const double rho = 1.3;
    const long n = 500;
    std::vector<double> times;
    for (long i = 1; i <= n; ++i) {
        const double u = static_cast<double>(i) / (n + 1);
        times.push_back(-std::log1p(-u) / rho);
    }
    const auto emp = make_empirical(std::move(times), 0, 1e9);
    const auto ks = ks_statistic(emp, [&](double t) { return exponential_cdf(rho, t); });
    CHECK(ks.full <= 1.0 / (n + 1) + 1e-9);
}

TEST_CASE("KS agrees with a brute-force scan on random censored inputs") {
    Rng rng(5, 0);
    for (int trial = 0; trial < 50; ++trial) {
        const double rho = 0.5 + 2.0 * rng.uniform();
        const double T = 1.0 + 2.0 * rng.uniform();
        std::vector<double> times;
        long censored = 0;
        const long n = 200;
        for (long i = 0; i < n; ++i) {
            const double x = -std::log(1.0 - rng.uniform()) / rho;
            if (x <= T)
                times.push_back(x);
            else
                ++censored;
        }
        const auto emp = make_empirical(times, censored, T);
        const auto cdf = [&](double t) { return exponential_cdf(rho, t); };
        const auto ks = ks_statistic(emp, cdf);

        // brute force over [0, T): censored observations are "> T", so the
        // empirical mass below the horizon is the comparison target; the
        // endpoint term compares F(T) with the uncensored fraction
        double brute = std::fabs(cdf(T) - static_cast<double>(emp.times.size()) / emp.trials);
        std::vector<double> pts(emp.times);
        for (int k = 0; k < 2000; ++k) pts.push_back(T * k / 2000.0);
        for (double t : pts) {
            if (t >= T) continue;
            brute = std::max(brute, std::fabs(cdf(t) - emp.cdf(t)));
            if (t > 0.0) brute = std::max(brute, std::fabs(cdf(t) - emp.cdf(t - 1e-12)));
        }
        CHECK(ks.full == doctest::Approx(brute).epsilon(1e-9));
        CHECK(ks.full >= brute - 1e-12);
    }
}

TEST_CASE("censoring identity") {
    const auto emp = make_empirical({0.1, 0.2, 0.7}, 7, 1.0);
    CHECK(emp.cdf(1.0 - 1e-12) + static_cast<double>(emp.censored) / emp.trials
          == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(emp.cdf(emp.horizon) == 1.0);
    CHECK(emp.trials == 10);
}

TEST_CASE("hazard: all-censored data has zero hazard") {
    const auto emp = make_empirical({}, 100, 2.0);
    const auto bins = hazard_estimate(emp, 0.1);
    for (const auto& b : bins) {
        CHECK(b.hazard == 0.0);
        CHECK(b.deaths == 0);
        CHECK(b.at_risk == 100);
    }
}

TEST_CASE("hazard on synthetic exponential data is flat near rho") {
    Rng rng(17, 0);
    const double rho = 1.7, T = 3.0 / rho;
    std::vector<double> times;
    long censored = 0;
    const long n = 100000;
    for (long i = 0; i < n; ++i) {
        const double x = -std::log(1.0 - rng.uniform()) / rho;
        if (x <= T)
            times.push_back(x);
        else
            ++censored;
    }
    const auto emp = make_empirical(times, censored, T);
    const auto bins = hazard_estimate(emp, T / 60.0);
    long low_conf = 0;
    for (const auto& b : bins) {
        if (b.low_confidence) {
            ++low_conf;
            continue;
        }
        // 5-sigma binomial band around the discrete-bin hazard
        const double p = 1.0 - std::exp(-rho * (b.t_hi - b.t_lo));
        const double expect = p / (b.t_hi - b.t_lo);
        const double sigma = std::sqrt(p * (1.0 - p) / b.at_risk) / (b.t_hi - b.t_lo);
        CHECK(std::fabs(b.hazard - expect) <= 5.0 * sigma + 1e-12);
    }
    CHECK(low_conf == 0);
    // statistics-path validation: the pipeline reproduces the injected rate
    // within 2% at N = 1e5 (discrete-bin bias ~1.2% at this width)
    CHECK(mean_hazard(bins) == doctest::Approx(rho).epsilon(0.02));
}

TEST_CASE("synthetic exponential passes the 99% KS band") {
    Rng rng(23, 0);
    const double rho = 2.2, T = 10.0 / rho;
    std::vector<double> times;
    long censored = 0;
    const long n = 20000;
    for (long i = 0; i < n; ++i) {
        const double x = -std::log(1.0 - rng.uniform()) / rho;
        if (x <= T)
            times.push_back(x);
        else
            ++censored;
    }
    const auto emp = make_empirical(times, censored, T);
    const auto ks = ks_statistic(emp, [&](double t) { return exponential_cdf(rho, t); });
    CHECK(ks.full <= ks_critical_99(n));
}

TEST_CASE("line fit recovers exact lines and flags noisy slopes") {
    std::vector<double> x, y;
    for (int i = 0; i < 20; ++i) {
        x.push_back(i);
        y.push_back(3.0 - 0.5 * i);
    }
    const auto f = fit_line(x, y);
    CHECK(f.slope == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(f.intercept == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(f.r2 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f.slope_se <= 1e-12);

    Rng rng(31, 0);
    std::vector<double> noise;
    for (int i = 0; i < 20; ++i) noise.push_back(2.0 * rng.uniform() - 1.0);
    std::vector<double> yn;
    for (int i = 0; i < 20; ++i) yn.push_back(1.0 + noise[i]);
    const auto g = fit_line(x, yn);
    CHECK(std::fabs(g.slope) <= 4.0 * g.slope_se);  // flat data: slope ~ 0
}

TEST_CASE("chi-squared helpers") {
    CHECK(chi2_quantile(0.99, 1) == doctest::Approx(6.6349).epsilon(1e-3));
    CHECK(chi2_quantile(0.99, 10) == doctest::Approx(23.209).epsilon(1e-3));
    CHECK(student_t_quantile(0.975, 1000) == doctest::Approx(1.962).epsilon(1e-3));
    const std::vector<long> obs{10, 10, 10};
    const std::vector<double> exp_counts{10.0, 10.0, 10.0};
    CHECK(chi2_statistic(obs, exp_counts) == 0.0);
}

TEST_CASE("empty sample throws") {
    CHECK_THROWS_AS(make_empirical({}, 0, 1.0), EmptySample);
}
