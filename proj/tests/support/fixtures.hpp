#ifndef BILLIARD_TESTS_FIXTURES_HPP
#define BILLIARD_TESTS_FIXTURES_HPP

#include <memory>

#include "billiard/geometry.hpp"

namespace billiard::testing {

// FH-1: the finite-horizon fixture used throughout the tests.  A large disk
// blocks every corridor of norm >= sqrt(2) on its own (2r = 0.8 exceeds the
// transverse periods), and the small corner disk closes the two axis
// corridors.  Found with the corridor-scan oracle; see fixtures/fh1_scene.json.
inline BilliardTable fh1_table(bool certify = true) {
    std::vector<Scatterer> s{
        {{0.5, 0.5}, 0.4},
        {{0.0, 0.0}, 0.15},
    };
    BilliardTable t = build_table(std::move(s));
    if (certify) check_finite_horizon(t, 60);
    return t;
}

inline std::shared_ptr<const BilliardTable> fh1_shared() {
    return std::make_shared<const BilliardTable>(fh1_table());
}

// A second certified fixture for cross-table properties: three mid-size
// disks (the big one again blocks all diagonals; the two smaller ones split
// the axis coverage differently).
inline BilliardTable fh2_table(bool certify = true) {
    std::vector<Scatterer> s{
        {{0.25, 0.25}, 0.38},
        {{0.72, 0.85}, 0.13},
        {{0.9, 0.675}, 0.1},
    };
    BilliardTable t = build_table(std::move(s));
    if (certify) check_finite_horizon(t, 60);
    return t;
}

} // namespace billiard::testing

#endif
