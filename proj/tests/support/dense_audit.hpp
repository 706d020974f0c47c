#ifndef BILLIARD_TESTS_DENSE_AUDIT_HPP
#define BILLIARD_TESTS_DENSE_AUDIT_HPP

// Brute-force oracle for the encounter sweep: sample the configuration
// distance on a fine time grid and extract the visited intervals.  Slow and
// simple on purpose; shares no code with the exact sweep.

#include <cmath>
#include <vector>

#include "billiard/encounter.hpp"
#include "billiard/flow.hpp"
#include "billiard/geometry.hpp"

namespace billiard::testing {

class SampledPath {
public:
    // speed: path position at time s is the flow at proper time speed*s
    SampledPath(const ParticleState& s, double speed, double horizon,
                const BilliardTable& table)
        : speed_(speed) {
        if (speed_ > 0.0)
            segs_ = flow_segments(s, speed * horizon * (1.0 + 1e-12) + 1e-9, table).segments;
        else
            frozen_ = s.pos;
    }

    TorusPoint at(double s) {
        if (speed_ <= 0.0) return frozen_;
        const double t = s * speed_;
        while (idx_ + 1 < segs_.size()
               && segs_[idx_].start_time + segs_[idx_].duration < t)
            ++idx_;
        const auto& seg = segs_[idx_];
        const double dt = t - seg.start_time;
        return make_torus_point(seg.start.x + dt * std::cos(seg.angle),
                                seg.start.y + dt * std::sin(seg.angle));
    }

private:
    double speed_;
    std::vector<FlightSegment> segs_;
    std::size_t idx_ = 0;
    TorusPoint frozen_;
};

struct DenseVisit {
    double s_first{}, s_last{};
    long samples{};
};

// Samples at multiples of `step` (monotone in s, so the cursors walk).
inline std::vector<DenseVisit> dense_visits(const JointState& joint, double epsilon,
                                            double horizon, const BilliardTable& table,
                                            double step) {
    SampledPath p1(joint.p1, 1.0, horizon, table);
    SampledPath p2(joint.p2, joint.lambda, horizon, table);
    std::vector<DenseVisit> visits;
    bool inside = false;
    const long n = static_cast<long>(std::floor(horizon / step));
    for (long k = 0; k <= n; ++k) {
        const double s = k * step;
        const double d = torus_distance(p1.at(s), p2.at(s));
        if (d <= epsilon) {
            if (!inside) {
                visits.push_back({s, s, 0});
                inside = true;
            }
            visits.back().s_last = s;
            ++visits.back().samples;
        } else {
            inside = false;
        }
    }
    return visits;
}

} // namespace billiard::testing

#endif
