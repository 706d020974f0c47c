#ifndef BILLIARD_DIAGNOSTICS_HPP
#define BILLIARD_DIAGNOSTICS_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "billiard/geometry.hpp"
#include "billiard/tangent.hpp"

namespace billiard {

// Transports random in-cone vectors through a fixed number of collisions and
// checks cone membership after every kick.  Grazing-flagged events are
// discarded, not counted as violations.
struct ConeInvarianceReport {
    long vectors{};
    int collisions_each{};
    long checks{};
    long violations{};
    long grazing_discarded{};
    double worst_margin{};  // most negative distance to the cone (0 if none)
};
ConeInvarianceReport cone_invariance_scan(const BilliardTable& table, long n_vectors,
                                          int collisions_each, std::uint64_t seed);

// Expansion of random in-cone vectors under n steps of the time-s map.
struct ExpansionReport {
    long samples{};
    int n{};
    double min_factor{};
    double min_per_step{};       // min over samples of factor^(1/n)
    double mean_log_per_time{};  // crude Lyapunov-rate estimate
    long discarded_grazing{};
};
ExpansionReport expansion_scan(const BilliardTable& table, long samples, int n,
                               std::uint64_t seed);

// Itinerary complexity of short unstable curves: counts for lengths 1..n_max
// maximized over `curves` random base points, plus the quadratic fit
// K_n ~ L n^2 over the window [n_fit_min, n_max].
struct ComplexityReport {
    std::vector<long> counts;
    int n_max{};
    int n_fit_min{4};
    double l_hat{};            // max over the window of K_n / n^2
    double growth_exponent{};  // slope of log K_n vs log n
    double growth_r2{};
    long samples_per_curve{};
    long curves{};
    double halfwidth{};
};
ComplexityReport complexity_scan(const BilliardTable& table, int n_max, double halfwidth,
                                 int samples_per_curve, int curves, std::uint64_t seed);

// Distortion of backward time-s iterates along admissible homogeneous
// curves; fits the constant of the |W(Y,Z)|/|W|^(2/3) bound.
struct DistortionReport {
    long attempted{};
    long admissible{};
    double c_d_hat{};
    double max_abs_log_ratio{};
};
DistortionReport distortion_scan(const BilliardTable& table, long target_admissible,
                                 std::uint64_t seed);

// Autocorrelation of cos(2 pi x) cos(2 pi y) along the flow, normalized to
// C(0) = 1; a qualitative decay-of-correlations curve.
std::vector<std::pair<double, double>> mixing_curve(const BilliardTable& table,
                                                    double max_lag, double dlag,
                                                    long samples, std::uint64_t seed);

} // namespace billiard

#endif
