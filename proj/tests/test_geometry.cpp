#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "billiard/errors.hpp"
#include "billiard/geometry.hpp"
#include "billiard/rng.hpp"
#include "support/fixtures.hpp"

using namespace billiard;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("torus distance basics") {
    CHECK(torus_distance({0.05, 0.0}, {0.95, 0.0}) == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(torus_distance({0.3, 0.7}, {0.3, 0.7}) == 0.0);
    CHECK(torus_distance({0.25, 0.25}, {0.75, 0.75})
          == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-14));
}

TEST_CASE("torus distance triangle inequality, randomized") {
    Rng rng(42, 0);
    for (int i = 0; i < 20000; ++i) {
        const TorusPoint p{rng.uniform(), rng.uniform()};
        const TorusPoint q{rng.uniform(), rng.uniform()};
        const TorusPoint r{rng.uniform(), rng.uniform()};
        CHECK(torus_distance(p, q)
              <= torus_distance(p, r) + torus_distance(r, q) + 1e-12);
        CHECK(torus_distance(p, q) == doctest::Approx(torus_distance(q, p)).epsilon(1e-15));
        CHECK(torus_distance(p, q) <= std::sqrt(2.0) / 2.0 + 1e-15);
    }
}

TEST_CASE("point wrapping is idempotent") {
    const TorusPoint p = make_torus_point(-1.25, 3.5);
    CHECK(p.x == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(p.y == doctest::Approx(0.5).epsilon(1e-15));
    const TorusPoint q = make_torus_point(p.x, p.y);
    CHECK(q.x == p.x);
    CHECK(q.y == p.y);
}

TEST_CASE("build_table derived constants") {
    const auto t = build_table({{{0.5, 0.5}, 0.2}});
    CHECK(t.domain_area == doctest::Approx(1.0 - 0.04 * kPi).epsilon(1e-15));
    CHECK(t.boundary_length == doctest::Approx(0.4 * kPi).epsilon(1e-15));
    CHECK(t.tau_min == doctest::Approx(1.0 - 0.4).epsilon(1e-12));
}

TEST_CASE("build_table rejects overlaps and bad radii") {
    CHECK_THROWS_AS(build_table({{{0.0, 0.0}, 0.3}, {{0.4, 0.4}, 0.3}}), OverlapError);
    CHECK_THROWS_AS(build_table({{{0.5, 0.5}, 0.6}}), RadiusError);
    CHECK_THROWS_AS(build_table({{{0.5, 0.5}, 0.5}}), RadiusError);
    CHECK_THROWS_AS(build_table({{{0.5, 0.5}, -0.1}}), RadiusError);
    CHECK_THROWS_AS(build_table({}), RadiusError);
}

TEST_CASE("area identity is exact") {
    const auto t = testing::fh1_table(false);
    double s = t.domain_area;
    for (const auto& sc : t.scatterers) s += kPi * sc.radius * sc.radius;
    CHECK(std::fabs(s - 1.0) <= 1e-15);
}

TEST_CASE("single disk has an open axis corridor") {
    auto t = build_table({{{0.5, 0.5}, 0.3}});
    const auto cert = check_finite_horizon(t, 10);
    CHECK(!cert.finite);
    CHECK(cert.corridor_p == 1);
    CHECK(cert.corridor_q == 0);
    CHECK(cert.corridor_width == doctest::Approx(1.0 - 0.6).epsilon(1e-12));
    CHECK(!t.tau_max.has_value());
}

TEST_CASE("aligned diagonal pair leaves the (1,1) corridor open") {
    auto t = build_table({{{0.0, 0.0}, 0.3}, {{0.5, 0.5}, 0.3}});
    const auto cert = check_finite_horizon(t, 10);
    CHECK(!cert.finite);
    CHECK(cert.corridor_p == 1);
    CHECK(cert.corridor_q == 1);
    // both disks project to the same transverse point: width = period - 2r
    CHECK(cert.corridor_width
          == doctest::Approx(1.0 / std::sqrt(2.0) - 0.6).epsilon(1e-12));
}

TEST_CASE("FH-1 is certified finite with margin >= 0.02") {
    auto t = testing::fh1_table(false);
    const auto cert = check_finite_horizon(t, 60);
    REQUIRE(cert.finite);
    CHECK(t.tau_max.has_value());
    CHECK(*t.tau_max == cert.tau_max);
    CHECK(cert.tau_max > 0.0);
    for (const auto& d : cert.cover) CHECK(d.margin >= 0.02);
    // tau_min = diagonal gap between the two disks
    CHECK(t.tau_min
          == doctest::Approx(std::sqrt(0.5) - 0.55).epsilon(1e-12));
}

TEST_CASE("FH-2 is certified finite") {
    auto t = testing::fh2_table(false);
    const auto cert = check_finite_horizon(t, 60);
    REQUIRE(cert.finite);
    CHECK(cert.tau_max > 0.0);
}

TEST_CASE("cutoff too small is reported, larger cutoff resolves") {
    auto t = testing::fh1_table(false);
    CHECK_THROWS_AS(check_finite_horizon(t, 2), CutoffTooSmall);
    CHECK_THROWS_AS(check_finite_horizon(t, 0), CutoffTooSmall);
    const auto cert = check_finite_horizon(t, 60);
    CHECK(cert.finite);
}

TEST_CASE("mean free path formula") {
    const auto t = build_table({{{0.5, 0.5}, 0.2}});
    CHECK(mean_free_path(t)
          == doctest::Approx(kPi * (1.0 - 0.04 * kPi) / (0.4 * kPi)).epsilon(1e-14));

    BilliardTable unit;  // hypothetical |D| = 1, |dD| = pi
    unit.domain_area = 1.0;
    unit.boundary_length = kPi;
    CHECK(mean_free_path(unit) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("clearance sign") {
    const auto t = testing::fh1_table(false);
    CHECK(t.clearance({0.5, 0.5}) < 0.0);       // inside the big disk
    CHECK(t.clearance({0.5, 0.04}) > 0.0);      // in the channel
    CHECK(t.contains({0.5, 0.04}));
    CHECK(!t.contains({0.02, 0.02}));           // inside the small disk
}
