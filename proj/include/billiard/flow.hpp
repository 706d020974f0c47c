#ifndef BILLIARD_FLOW_HPP
#define BILLIARD_FLOW_HPP

#include <vector>

#include "billiard/geometry.hpp"
#include "billiard/vec2.hpp"

namespace billiard {

// Point of the flow phase space Omega = D x S^1: configuration plus the
// direction angle of the unit velocity.
struct ParticleState {
    TorusPoint pos;
    double angle{};  // in [0, 2pi)
};

ParticleState make_state(double x, double y, double angle);

// Throws if the position is inside a scatterer beyond the 1e-12 band.
void validate_state(const ParticleState& s, const BilliardTable& table);

struct Collision {
    double flight{};         // time to impact
    int scatterer{-1};
    TorusPoint point;        // impact point, on the scatterer circle
    Vec2d normal;            // unit normal pointing into D
    double cos_incidence{};  // |<v,n>| at impact
};

// Minimal positive flight to a scatterer, walking the unfolded lattice.
// Throws HorizonViolation if nothing is hit within tau_max + margin (the
// table must carry a finite-horizon certificate).
Collision next_collision(const ParticleState& s, const BilliardTable& table);

// Specular reflection of a direction angle at a wall with inward normal n.
// Tangential incidence returns the angle unchanged.
double reflect(double angle, Vec2d normal);

enum class SegmentEnd { ScattererHit, TimeCap };

struct FlightSegment {
    double start_time{};
    double duration{};
    TorusPoint start;
    double angle{};
    SegmentEnd end{SegmentEnd::TimeCap};
    int hit_id{-1};
    TorusPoint hit_point;        // valid for ScattererHit
    double incidence_angle{};    // signed, post-collision, in [-pi/2, pi/2]
};

struct FlowResult {
    std::vector<FlightSegment> segments;
    ParticleState end_state;
    long collisions{};
    bool grazing_flagged{};  // some reflection had cos(phi) < 1e-12
};

// The flow Phi^t as a list of maximal free-flight segments partitioning [0,t].
FlowResult flow_segments(const ParticleState& s, double t, const BilliardTable& table);

// The time-s map with s = tau_min / 2.
ParticleState time_s_map(const ParticleState& s, const BilliardTable& table);

// Collision-map phase point: arclength along the concatenated scatterer
// boundaries plus the signed incidence angle of the outgoing velocity.
struct BoundaryState {
    double arc_coordinate{};   // in [0, |dD|)
    double incidence_angle{};  // in [-pi/2, pi/2], measured from the inward normal
};

// Outgoing particle state for a boundary phase point.
ParticleState boundary_to_state(const BoundaryState& b, const BilliardTable& table);

// Boundary coordinates of the post-collision state at a given impact.
BoundaryState boundary_state_at(int scatterer, TorusPoint point, double out_angle,
                                const BilliardTable& table);

// One step of the collision map F.
BoundaryState billiard_map(const BoundaryState& b, const BilliardTable& table);

// Streaming interface over the free-flight legs of one orbit; used by the
// encounter sweep and the tangent transport, which do not want to
// materialize segment vectors.
class OrbitCursor {
public:
    struct Leg {
        TorusPoint start;
        double angle{};
        Vec2d dir;
        double t0{};        // absolute start time of the leg
        double flight{};    // full free flight ending at `hit`
        Collision hit;
    };

    OrbitCursor(ParticleState s, const BilliardTable& table);

    const Leg& leg() const { return leg_; }
    // Reflect at the current leg's collision and solve the next one.
    void advance();

    // State at absolute time t; t must lie within [t0, t0 + flight].
    ParticleState state_at(double t) const;

    bool grazing_flagged() const { return grazing_; }
    long collisions() const { return collisions_; }
    // Flight time into the collision that started the current leg (the
    // previous leg's flight); <0 while on the first leg.
    double prev_flight() const { return prev_flight_; }
    // Incidence data of the collision that started the current leg.
    double last_cos_incidence() const { return last_cos_; }
    double last_curvature() const { return last_curvature_; }
    double last_incidence_angle() const { return last_phi_; }

private:
    const BilliardTable* table_;
    Leg leg_;
    bool grazing_{};
    long collisions_{};
    double prev_flight_{-1.0};
    double last_cos_{1.0};
    double last_curvature_{};
    double last_phi_{};
};

} // namespace billiard

#endif
