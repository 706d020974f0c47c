#ifndef BILLIARD_ENCOUNTER_HPP
#define BILLIARD_ENCOUNTER_HPP

#include <functional>
#include <optional>
#include <vector>

#include "billiard/flow.hpp"
#include "billiard/geometry.hpp"

namespace billiard {

// Two independent particles on the same table.  Particle 1 moves with unit
// speed; particle 2 moves along its own billiard orbit with speed lambda, so
// at particle-1 time s it sits at Phi^{lambda s} of its initial state.
struct JointState {
    ParticleState p1;
    ParticleState p2;
    double lambda{};  // in [0,1]
};

// An epsilon-approach event, evaluated at the entry crossing.
struct EncounterEvent {
    double time{};                // s, particle-1 time
    TorusPoint pos1, pos2;
    double distance{};            // torus distance at the event, <= epsilon
    double rel_angle_mod_pi{};    // velocity angle difference mod pi, in [0, pi/2]
    double boundary_clearance{};  // distance of pos1 to the scatterer boundary
    bool good{};                  // clearance > xi and transversality > xi
    double xi{};                  // threshold the flag was evaluated with
};

// A maximal interval of time during which the configuration distance stays
// <= epsilon.  `entry` carries the event data at the first instant.
struct EncounterVisit {
    EncounterEvent entry;
    double s_exit{};
    bool open_at_horizon{};
};

// Closest approach of two free-flight segments over a window of particle-1
// time, minimized over the 9 nearest lattice images of the relative
// displacement.  seg2 times are particle-2 proper times (scaled by 1/lambda);
// lambda = 0 treats particle 2 as frozen at its segment position.
// Throws EmptyWindow if [w0,w1] is empty or not contained in both spans.
struct ClosestApproach {
    double t_star{};
    double d_star{};
};
ClosestApproach relative_min_distance(const FlightSegment& seg1, const FlightSegment& seg2,
                                      double lambda, double w0, double w1);

// Streams every epsilon-visit in [0, horizon] in time order to the sink;
// return false from the sink to stop early.  Exact per-window quadratics, no
// time discretization.
struct SweepStats {
    long visits{};
    bool grazing_flagged{};
    long collisions1{};
    long collisions2{};
};
SweepStats sweep_encounters(const JointState& joint, double epsilon, double xi,
                            double horizon, const BilliardTable& table,
                            const std::function<bool(const EncounterVisit&)>& sink);

// First visit whose entry satisfies the goodness constraints; visits that
// enter non-good are skipped whole (the pair must leave the epsilon
// neighbourhood and re-enter).  Also reports the number of skipped
// approaches before the returned one.
struct FirstEncounterResult {
    std::optional<EncounterEvent> event;
    long skipped_approaches{};
    bool grazing_flagged{};
};
FirstEncounterResult first_encounter(const JointState& joint, double epsilon, double xi,
                                     double horizon, const BilliardTable& table);

// Every visit in [0, horizon], annotated good / not good.
std::vector<EncounterVisit> all_encounters(const JointState& joint, double epsilon,
                                           double xi, double horizon,
                                           const BilliardTable& table);

} // namespace billiard

#endif
