#ifndef BILLIARD_TANGENT_HPP
#define BILLIARD_TANGENT_HPP

#include <vector>

#include "billiard/flow.hpp"
#include "billiard/geometry.hpp"

namespace billiard {

// Jacobi coordinates of a flow tangent vector at (q, phi): d_eta along the
// velocity, d_xi transverse, d_omega = d(phi).  Free flight for time tau maps
// d_xi -> d_xi + tau d_omega; a collision with curvature K at incidence phi
// maps (d_eta, d_xi, d_omega) -> (d_eta, -d_xi, -(d_omega + (2K/cos phi) d_xi)).
struct TangentVector {
    double d_eta{}, d_xi{}, d_omega{};
};

// Data of the last collision on the backward orbit of a point, enough to
// evaluate the unstable cone pulled back from the collision map.
struct ConeCheckContext {
    double curvature{};   // K at the footpoint
    double cos_phi{};     // cos of the incidence angle there
    double t_since{};     // time from the collision to the point (pullback)
    double t_prev{};      // flight time into the collision (cone width 1/t)
    double c_f{10.0};     // d_eta/d_xi bound of the flow cone
};

// Backward-solves the orbit of `state` for the cone context (two collision
// solves).  Always defined under finite horizon.
ConeCheckContext cone_context(const ParticleState& state, const BilliardTable& table,
                              double c_f = 10.0);

// Elementary transport steps (exposed for the scan diagnostics).
void tangent_free_flight(TangentVector& v, double tau);
// Throws GrazingDerivative below the incidence tolerance.
void tangent_collision_kick(TangentVector& v, double curvature, double cos_phi);

struct TransportResult {
    TangentVector v;
    ConeCheckContext ctx;  // at the transported point
    long collisions{};
};

// Transports v along the orbit of `state` for time t.  Throws
// GrazingDerivative when a collision with cos(phi) < 1e-12 is crossed.
TransportResult transport_tangent(const ParticleState& state, const TangentVector& v,
                                  double t, const BilliardTable& table, double c_f = 10.0);

// Membership in the flow unstable cone: the vector pulled back to the last
// collision has map slope d(phi)/dr in [K, K + cos(phi)/t_prev] (inclusive)
// and |d_eta/d_xi| < c_f.  Throws UndefinedCone if ctx.t_prev <= 0.
bool cone_contains(const ConeCheckContext& ctx, const TangentVector& v);

// The map slope of the pulled-back vector (for diagnostics).
double cone_slope(const ConeCheckContext& ctx, const TangentVector& v);

// Norm growth of the transverse part (d_xi, d_omega) under n steps of the
// time-s map.  n = 0 gives 1.
double expansion_factor(const ParticleState& state, const TangentVector& v, int n,
                        const BilliardTable& table);

// Homogeneity domains: G when the last collision is further back than the
// time step s; otherwise the strip H_k of the last collision's incidence
// angle, with boundaries pi/2 - 1/k^2 for |k| >= k0 and the central strip
// H_0 = {|phi| < pi/2 - 1/k0^2}.
struct HomogeneityLabel {
    bool is_g{};
    int k{};  // valid when !is_g; signed by the side of the strip
};

HomogeneityLabel homogeneity_label(const ParticleState& state, int k0,
                                   const BilliardTable& table);

// Strip index of an incidence angle: 0 for |phi| < pi/2 - 1/k0^2, otherwise
// the k >= k0 with pi/2 - 1/k^2 <= |phi| < pi/2 - 1/(k+1)^2, signed by phi.
int strip_index(double phi, int k0);

// A short curve through `center` whose tangent sits mid-cone; parametrized
// by arclength of the transverse components.
struct UnstableCurve {
    ParticleState center;
    double d_xi{}, d_omega{};  // unit tangent
    double halfwidth{};

    ParticleState point(double alpha) const;
};

UnstableCurve make_unstable_curve(const ParticleState& center, double halfwidth,
                                  const BilliardTable& table);

// Number of distinct {H,G} itineraries of length 1..n_max realized by
// `samples` points of the curve under the time-s map (prefix counts).
std::vector<long> itinerary_counts(const UnstableCurve& curve, int n_max, int samples,
                                   const BilliardTable& table);

long count_itineraries(const ParticleState& center, double curve_halfwidth, int n,
                       int samples, const BilliardTable& table);

// Ratio of the backward time-s-map Jacobians along the curve at the two
// points, by central finite differences with Richardson extrapolation.
// Throws NotHomogeneous when the backward images up to n-1 steps do not stay
// in one homogeneity domain.
double distortion_ratio(const UnstableCurve& curve, double alpha_y, double alpha_z,
                        int n, const BilliardTable& table);

} // namespace billiard

#endif
