#include "billiard/encounter.hpp"

#include <algorithm>
#include <cmath>

#include "billiard/errors.hpp"

namespace billiard {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kMaxWindow = 0.25;   // keeps the relative lift within [-1,1]^2
constexpr double kStaticLambda = 1e-12;

double fold_angle_mod_pi(double a1, double a2) {
    double d = std::fabs(a1 - a2);
    d = std::fmod(d, kPi);
    return std::min(d, kPi - d);
}

// Solutions of |d0 + sigma v|^2 <= eps^2 clipped to [0, len].
struct Interval {
    double lo, hi;
};

bool quad_interval(Vec2d d0, Vec2d v, double eps2, double len, Interval* out) {
    const double a = norm2(v);
    const double c = norm2(d0) - eps2;
    if (a < 1e-30) {
        if (c <= 0.0) {
            *out = {0.0, len};
            return true;
        }
        return false;
    }
    const double b = 2.0 * dot(d0, v);
    const double disc = b * b - 4.0 * a * c;
    if (disc <= 0.0) return false;  // tangent touches do not count as visits
    const double sq = std::sqrt(disc);
    const double q = -0.5 * (b + std::copysign(sq, b));
    double r1 = q / a;
    double r2 = (q != 0.0) ? c / q : -b / (2.0 * a);
    if (r1 > r2) std::swap(r1, r2);
    if (r2 < 0.0 || r1 > len) return false;
    *out = {std::max(r1, 0.0), std::min(r2, len)};
    return true;
}

// Positions of particle 2: either a live orbit cursor re-parametrized to
// particle-1 time, or a frozen point when lambda ~ 0.
struct SecondParticle {
    const BilliardTable* table;
    double lambda;
    bool moving;
    std::optional<OrbitCursor> cursor;
    TorusPoint frozen;
    double frozen_angle{};

    SecondParticle(const ParticleState& s, double lam, const BilliardTable& tbl)
        : table(&tbl), lambda(lam), moving(lam > kStaticLambda) {
        if (moving) {
            cursor.emplace(s, tbl);
        } else {
            frozen = s.pos;
            frozen_angle = s.angle;
        }
    }

    // End of the current leg in particle-1 time.
    double leg_end_s() const {
        if (!moving) return std::numeric_limits<double>::infinity();
        const auto& leg = cursor->leg();
        return (leg.t0 + leg.flight) / lambda;
    }

    void advance() { cursor->advance(); }

    TorusPoint pos_at(double s) const {
        if (!moving) return frozen;
        const auto& leg = cursor->leg();
        const double dt = s * lambda - leg.t0;
        return make_torus_point(leg.start.x + dt * leg.dir.x,
                                leg.start.y + dt * leg.dir.y);
    }

    double angle() const { return moving ? cursor->leg().angle : frozen_angle; }
    Vec2d dir() const { return moving ? cursor->leg().dir : Vec2d{0.0, 0.0}; }
    bool grazing() const { return moving && cursor->grazing_flagged(); }
    long collisions() const { return moving ? cursor->collisions() : 0; }
};

} // namespace

ClosestApproach relative_min_distance(const FlightSegment& seg1, const FlightSegment& seg2,
                                      double lambda, double w0, double w1) {
    if (!(w1 >= w0)) throw EmptyWindow("window is empty");
    const double s1a = seg1.start_time, s1b = seg1.start_time + seg1.duration;
    if (w0 < s1a - 1e-12 || w1 > s1b + 1e-12)
        throw EmptyWindow("window not contained in segment 1 span");
    const bool moving = lambda > kStaticLambda;
    if (moving) {
        const double s2a = seg2.start_time / lambda;
        const double s2b = (seg2.start_time + seg2.duration) / lambda;
        if (w0 < s2a - 1e-12 || w1 > s2b + 1e-12)
            throw EmptyWindow("window not contained in segment 2 span");
    }

    const Vec2d u{std::cos(seg1.angle), std::sin(seg1.angle)};
    const Vec2d w{std::cos(seg2.angle), std::sin(seg2.angle)};
    const Vec2d a0{seg1.start.x + (w0 - s1a) * u.x, seg1.start.y + (w0 - s1a) * u.y};
    Vec2d b0{seg2.start.x, seg2.start.y};
    if (moving) {
        const double dt2 = w0 * lambda - seg2.start_time;
        b0 = {seg2.start.x + dt2 * w.x, seg2.start.y + dt2 * w.y};
    }
    const Vec2d d0{wrap_half(a0.x - b0.x), wrap_half(a0.y - b0.y)};
    const Vec2d v = moving ? Vec2d{u.x - lambda * w.x, u.y - lambda * w.y} : u;

    ClosestApproach best{w0, std::numeric_limits<double>::infinity()};
    const double len = w1 - w0;
    // over a long window the relative lift can leave [-1,1]^2, so widen the
    // image range to keep the per-instant nearest image in the set
    const int gmax = 1 + static_cast<int>(std::floor(0.5 + len * norm(v)));
    for (int gx = -gmax; gx <= gmax; ++gx) {
        for (int gy = -gmax; gy <= gmax; ++gy) {
            const Vec2d d{d0.x - gx, d0.y - gy};
            const double a = norm2(v);
            double t = 0.0;
            if (a > 1e-30) t = std::clamp(-dot(d, v) / a, 0.0, len);
            const Vec2d at{d.x + t * v.x, d.y + t * v.y};
            const double dist = norm(at);
            if (dist < best.d_star) best = {w0 + t, dist};
        }
    }
    return best;
}

SweepStats sweep_encounters(const JointState& joint, double epsilon, double xi,
                            double horizon, const BilliardTable& table,
                            const std::function<bool(const EncounterVisit&)>& sink) {
    if (!(epsilon > 0.0 && epsilon < 1.0)) throw Error("sweep: epsilon out of range");
    if (!(horizon >= 0.0)) throw Error("sweep: negative horizon");

    OrbitCursor c1(joint.p1, table);
    SecondParticle c2(joint.p2, joint.lambda, table);

    const double eps2 = epsilon * epsilon;
    const int gmax = epsilon < kMaxWindow ? 1 : 2;

    SweepStats stats;
    bool inside = false;
    bool stopped = false;
    EncounterVisit visit;

    auto make_event = [&](double s) {
        EncounterEvent e;
        e.time = s;
        e.pos1 = c1.state_at(s).pos;
        e.pos2 = c2.pos_at(s);
        e.distance = torus_distance(e.pos1, e.pos2);
        e.rel_angle_mod_pi = fold_angle_mod_pi(c1.leg().angle, c2.angle());
        e.boundary_clearance = table.clearance(e.pos1);
        e.xi = xi;
        e.good = e.boundary_clearance > xi && e.rel_angle_mod_pi > xi;
        return e;
    };
    auto close_visit = [&](double s_exit, bool open) {
        visit.s_exit = s_exit;
        visit.open_at_horizon = open;
        inside = false;
        ++stats.visits;
        if (!sink(visit)) stopped = true;
    };

    double s = 0.0;
    while (s < horizon && !stopped) {
        // advance legs that ended at or before s
        while (c1.leg().t0 + c1.leg().flight <= s) c1.advance();
        while (c2.moving && c2.leg_end_s() <= s) c2.advance();

        const double w_end = std::min({horizon, s + kMaxWindow,
                                       c1.leg().t0 + c1.leg().flight, c2.leg_end_s()});
        const double len = w_end - s;
        if (!(len > 0.0)) {  // guards against zero-length windows at leg seams
            s = std::nextafter(w_end, horizon);
            continue;
        }

        const TorusPoint a0 = c1.state_at(s).pos;
        const TorusPoint b0 = c2.pos_at(s);
        const Vec2d d0{wrap_half(a0.x - b0.x), wrap_half(a0.y - b0.y)};
        const Vec2d u = c1.leg().dir;
        const Vec2d v = c2.moving
                            ? Vec2d{u.x - joint.lambda * c2.dir().x,
                                    u.y - joint.lambda * c2.dir().y}
                            : u;
        const double reach = epsilon + len * (norm(v) + 1e-15);

        Interval raw[25];
        int n_raw = 0;
        for (int gx = -gmax; gx <= gmax; ++gx) {
            for (int gy = -gmax; gy <= gmax; ++gy) {
                const Vec2d d{d0.x - gx, d0.y - gy};
                if (std::fabs(d.x) > reach || std::fabs(d.y) > reach) continue;
                Interval iv;
                if (quad_interval(d, v, eps2, len, &iv)) raw[n_raw++] = iv;
            }
        }
        std::sort(raw, raw + n_raw,
                  [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
        // distinct images are >= 1 apart so for epsilon < 1/4 these are
        // disjoint; for the degenerate large-epsilon case merge overlaps
        Interval found[25];
        int n_found = 0;
        for (int i = 0; i < n_raw; ++i) {
            if (n_found > 0 && raw[i].lo <= found[n_found - 1].hi) {
                found[n_found - 1].hi = std::max(found[n_found - 1].hi, raw[i].hi);
            } else {
                found[n_found++] = raw[i];
            }
        }

        double cursor = 0.0;  // window-relative time up to which state is resolved
        for (int i = 0; i < n_found && !stopped; ++i) {
            const Interval& iv = found[i];
            if (inside && iv.lo > cursor + 1e-12 * std::max(1.0, s)) {
                // the pair left the neighbourhood before this interval
                close_visit(s + cursor, false);
            }
            if (!inside) {
                visit = EncounterVisit{};
                visit.entry = make_event(s + iv.lo);
                inside = true;
            }
            cursor = iv.hi;
            if (iv.hi < len && !stopped) {
                close_visit(s + iv.hi, false);
            }
        }
        if (inside && n_found == 0) {
            close_visit(s, false);  // exited exactly at the previous window edge
        } else if (inside && cursor < len) {
            close_visit(s + cursor, false);
        }
        s = w_end;
    }
    if (inside && !stopped) close_visit(horizon, true);

    stats.grazing_flagged = c1.grazing_flagged() || c2.grazing();
    stats.collisions1 = c1.collisions();
    stats.collisions2 = c2.collisions();
    return stats;
}

FirstEncounterResult first_encounter(const JointState& joint, double epsilon, double xi,
                                     double horizon, const BilliardTable& table) {
    FirstEncounterResult res;
    auto stats = sweep_encounters(joint, epsilon, xi, horizon, table,
                                  [&](const EncounterVisit& v) {
                                      if (v.entry.good) {
                                          res.event = v.entry;
                                          return false;
                                      }
                                      ++res.skipped_approaches;
                                      return true;
                                  });
    res.grazing_flagged = stats.grazing_flagged;
    return res;
}

std::vector<EncounterVisit> all_encounters(const JointState& joint, double epsilon,
                                           double xi, double horizon,
                                           const BilliardTable& table) {
    std::vector<EncounterVisit> out;
    sweep_encounters(joint, epsilon, xi, horizon, table, [&](const EncounterVisit& v) {
        out.push_back(v);
        return true;
    });
    return out;
}

} // namespace billiard
