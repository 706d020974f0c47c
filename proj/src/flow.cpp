#include "billiard/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "billiard/errors.hpp"
#include "billiard/flow_core.hpp"

namespace billiard {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kGrazingCos = 1e-12;
// Search cap for tables without a horizon certificate (unit tests, scans).
constexpr double kFallbackCap = 1e3;

double wrap_angle(double a) {
    a = std::fmod(a, kTwoPi);
    if (a < 0.0) a += kTwoPi;
    return a;
}

} // namespace

ParticleState make_state(double x, double y, double angle) {
    return {make_torus_point(x, y), wrap_angle(angle)};
}

void validate_state(const ParticleState& s, const BilliardTable& table) {
    if (table.clearance(s.pos) < -1e-12)
        throw Error("particle state inside a scatterer");
}

Collision next_collision(const ParticleState& s, const BilliardTable& table) {
    const Vec2d p{s.pos.x, s.pos.y};
    const Vec2d u{std::cos(s.angle), std::sin(s.angle)};
    const double cap = table.tau_max ? *table.tau_max + 1.0 : kFallbackCap;

    struct Best {
        bool found = false;
        double t = 0.0;
        int id = -1;
        Vec2d center;
    } best;

    // Tests all scatterer images whose center lies in cell (cx,cy).  Any
    // circle met by the ray inside a cell has its center within one cell of
    // it (radius < 1/2), so scanning the 3x3 neighbourhood of every cell the
    // ray passes through is exhaustive.
    auto test_center_cell = [&](int cx, int cy) {
        for (std::size_t j = 0; j < table.scatterers.size(); ++j) {
            const auto& sc = table.scatterers[j];
            const Vec2d center{sc.center.x + cx, sc.center.y + cy};
            const auto h = ray_circle_first<double>(p, u, center, sc.radius);
            if (h.hit && (!best.found || h.t < best.t)) {
                best = {true, h.t, static_cast<int>(j), center};
            }
        }
    };

    for (int dx = -1; dx <= 1; ++dx)
        for (int dy = -1; dy <= 1; ++dy) test_center_cell(dx, dy);

    // Amanatides-Woo walk over the unfolded cell lattice.
    int cx = 0, cy = 0;
    const int step_x = u.x > 0.0 ? 1 : (u.x < 0.0 ? -1 : 0);
    const int step_y = u.y > 0.0 ? 1 : (u.y < 0.0 ? -1 : 0);
    const double inf = std::numeric_limits<double>::infinity();
    double t_max_x = step_x > 0 ? (1.0 - p.x) / u.x : (step_x < 0 ? p.x / -u.x : inf);
    double t_max_y = step_y > 0 ? (1.0 - p.y) / u.y : (step_y < 0 ? p.y / -u.y : inf);
    const double t_delta_x = step_x ? 1.0 / std::fabs(u.x) : inf;
    const double t_delta_y = step_y ? 1.0 / std::fabs(u.y) : inf;

    for (;;) {
        const double t_entry = std::min(t_max_x, t_max_y);
        if (best.found && best.t <= t_entry) break;
        if (t_entry > cap) {
            if (best.found) break;
            throw HorizonViolation("no collision within the horizon cap; bad certificate?");
        }
        if (t_max_x < t_max_y) {
            cx += step_x;
            t_max_x += t_delta_x;
            for (int dy = -1; dy <= 1; ++dy) test_center_cell(cx + step_x, cy + dy);
        } else {
            cy += step_y;
            t_max_y += t_delta_y;
            for (int dx = -1; dx <= 1; ++dx) test_center_cell(cx + dx, cy + step_y);
        }
    }
    if (!best.found)
        throw HorizonViolation("no collision found within the search cap");

    Collision col;
    col.flight = best.t;
    col.scatterer = best.id;
    Vec2d q = p + best.t * u;
    Vec2d n = q - best.center;
    const double len = norm(n);
    n = (1.0 / len) * n;
    q = best.center + table.scatterers[best.id].radius * n;  // re-project
    col.point = make_torus_point(q.x, q.y);
    col.normal = n;
    col.cos_incidence = std::fabs(dot(u, n));
    return col;
}

double reflect(double angle, Vec2d normal) {
    const Vec2d v{std::cos(angle), std::sin(angle)};
    const Vec2d r = reflect_dir(v, normal);
    return wrap_angle(std::atan2(r.y, r.x));
}

namespace {

// Signed incidence angle of an outgoing direction: positive toward the
// oriented tangent perp(n).
double incidence_of(double out_angle, Vec2d n) {
    const Vec2d v{std::cos(out_angle), std::sin(out_angle)};
    return std::atan2(dot(v, perp(n)), dot(v, n));
}

TorusPoint advance_point(TorusPoint p, double angle, double dt) {
    return make_torus_point(p.x + dt * std::cos(angle), p.y + dt * std::sin(angle));
}

} // namespace

OrbitCursor::OrbitCursor(ParticleState s, const BilliardTable& table) : table_(&table) {
    leg_.start = s.pos;
    leg_.angle = s.angle;
    leg_.dir = {std::cos(s.angle), std::sin(s.angle)};
    leg_.t0 = 0.0;
    leg_.hit = next_collision(s, table);
    leg_.flight = leg_.hit.flight;
}

void OrbitCursor::advance() {
    const Collision& c = leg_.hit;
    prev_flight_ = leg_.flight;
    last_cos_ = c.cos_incidence;
    last_curvature_ = 1.0 / table_->scatterers[c.scatterer].radius;
    if (c.cos_incidence < kGrazingCos) grazing_ = true;
    ++collisions_;

    const double out = reflect(leg_.angle, c.normal);
    last_phi_ = incidence_of(out, c.normal);
    leg_.t0 += leg_.flight;
    leg_.start = c.point;
    leg_.angle = out;
    leg_.dir = {std::cos(out), std::sin(out)};
    leg_.hit = next_collision({c.point, out}, *table_);
    leg_.flight = leg_.hit.flight;
}

ParticleState OrbitCursor::state_at(double t) const {
    const double dt = t - leg_.t0;
    return {advance_point(leg_.start, leg_.angle, dt), leg_.angle};
}

FlowResult flow_segments(const ParticleState& s, double t, const BilliardTable& table) {
    if (t < 0.0) throw Error("flow_segments: negative time");
    FlowResult out;
    out.end_state = s;
    if (t == 0.0) return out;

    OrbitCursor cur(s, table);
    double remaining = t;
    double clock = 0.0;
    for (;;) {
        const auto& leg = cur.leg();
        if (leg.flight < remaining) {
            FlightSegment seg;
            seg.start_time = clock;
            seg.duration = leg.flight;
            seg.start = leg.start;
            seg.angle = leg.angle;
            seg.end = SegmentEnd::ScattererHit;
            seg.hit_id = leg.hit.scatterer;
            seg.hit_point = leg.hit.point;
            clock += leg.flight;
            remaining -= leg.flight;
            cur.advance();
            seg.incidence_angle = cur.last_incidence_angle();
            out.segments.push_back(seg);
        } else {
            FlightSegment seg;
            seg.start_time = clock;
            seg.duration = remaining;
            seg.start = leg.start;
            seg.angle = leg.angle;
            seg.end = SegmentEnd::TimeCap;
            out.segments.push_back(seg);
            out.end_state = {advance_point(leg.start, leg.angle, remaining), leg.angle};
            break;
        }
    }
    out.collisions = cur.collisions();
    out.grazing_flagged = cur.grazing_flagged();
    return out;
}

ParticleState time_s_map(const ParticleState& s, const BilliardTable& table) {
    return flow_segments(s, table.s_step(), table).end_state;
}

ParticleState boundary_to_state(const BoundaryState& b, const BilliardTable& table) {
    auto it = std::upper_bound(table.arc_offset.begin(), table.arc_offset.end(),
                               b.arc_coordinate);
    const std::size_t j = static_cast<std::size_t>(it - table.arc_offset.begin()) - 1;
    const auto& sc = table.scatterers[j];
    const double theta = (b.arc_coordinate - table.arc_offset[j]) / sc.radius;
    const Vec2d n{std::cos(theta), std::sin(theta)};
    const Vec2d t_hat = perp(n);
    const double cphi = std::cos(b.incidence_angle), sphi = std::sin(b.incidence_angle);
    const Vec2d v = cphi * n + sphi * t_hat;
    TorusPoint pos = make_torus_point(sc.center.x + sc.radius * n.x,
                                      sc.center.y + sc.radius * n.y);
    return {pos, wrap_angle(std::atan2(v.y, v.x))};
}

BoundaryState boundary_state_at(int scatterer, TorusPoint point, double out_angle,
                                const BilliardTable& table) {
    const auto& sc = table.scatterers[scatterer];
    const double dx = wrap_half(point.x - sc.center.x);
    const double dy = wrap_half(point.y - sc.center.y);
    double theta = std::atan2(dy, dx);
    if (theta < 0.0) theta += kTwoPi;
    const Vec2d n{std::cos(theta), std::sin(theta)};
    BoundaryState b;
    b.arc_coordinate = table.arc_offset[scatterer] + sc.radius * theta;
    b.incidence_angle = incidence_of(out_angle, n);
    return b;
}

BoundaryState billiard_map(const BoundaryState& b, const BilliardTable& table) {
    const ParticleState s = boundary_to_state(b, table);
    const Collision c = next_collision(s, table);
    const double out = reflect(s.angle, c.normal);
    return boundary_state_at(c.scatterer, c.point, out, table);
}

} // namespace billiard
