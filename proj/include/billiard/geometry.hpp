#ifndef BILLIARD_GEOMETRY_HPP
#define BILLIARD_GEOMETRY_HPP

#include <optional>
#include <string>
#include <vector>

#include "billiard/vec2.hpp"

namespace billiard {

// Configuration point on the unit torus.  Coordinates live in [0,1).
struct TorusPoint {
    double x{}, y{};
};

TorusPoint make_torus_point(double x, double y);

// Distance on T^2 = R^2/Z^2: Euclidean distance to the nearest lattice
// image.  Wrapping each coordinate difference to [-1/2,1/2) is exactly the
// minimum over the 9 neighbouring translates.  Bounded by sqrt(2)/2.
double torus_distance(TorusPoint a, TorusPoint b);

struct Scatterer {
    TorusPoint center;
    double radius{};  // in (0, 1/2); curvature is 1/radius
};

// One primitive lattice direction examined by the corridor scan.
// `margin` is the covering depth of the scatterer shadows on the transverse
// period: positive means the direction is blocked, negative means an open
// corridor of width -2*margin.
struct DirectionRecord {
    int p{}, q{};
    double norm{};          // sqrt(p^2+q^2)
    double period{};        // transverse lattice period = 1/norm
    double margin{};
    double wedge_half_angle{};  // atan(margin/norm) when blocked
    double flight_bound{};      // sqrt(norm^2 + margin^2) when blocked
};

// Result of the corridor scan.  When `finite`, any free flight in any
// direction is bounded by tau_max: every direction of motion lies in the
// wedge of some blocked primitive direction (p,q), and within that wedge a
// segment longer than sqrt(norm^2+margin^2) must cross a scatterer column.
struct HorizonCertificate {
    bool finite{};
    int cutoff{};
    std::size_t directions_checked{};
    double tau_max{};              // meaningful when finite
    double max_needed_norm{};      // largest norm used by the wedge cover
    std::vector<DirectionRecord> cover;  // wedges forming the cover
    // when infinite:
    int corridor_p{}, corridor_q{};
    double corridor_width{};
    std::string tail_criterion;
};

struct BilliardTable {
    std::vector<Scatterer> scatterers;
    double domain_area{};      // |D| = 1 - sum pi r^2
    double boundary_length{};  // |dD| = sum 2 pi r
    double tau_min{};          // minimal boundary-to-boundary gap
    double max_radius{};
    std::optional<double> tau_max;  // set by check_finite_horizon
    std::optional<HorizonCertificate> horizon_certificate;
    std::vector<double> arc_offset;  // start of each scatterer's arc range

    // Half the minimal flight time; the time step of the time-s map.
    double s_step() const { return tau_min / 2.0; }

    // Signed distance from q to the nearest scatterer boundary, positive
    // inside the billiard domain D.
    double clearance(TorusPoint q) const;
    bool contains(TorusPoint q) const { return clearance(q) >= 0.0; }
};

// Validates the scatterer list and computes the derived constants.
// Throws RadiusError / OverlapError.  tau_max stays unset.
BilliardTable build_table(std::vector<Scatterer> scatterers);

// Corridor scan over all primitive lattice directions with
// max(|p|,|q|) <= cutoff.  On success stores the certificate and tau_max in
// the table and returns the certificate.  If an open corridor exists within
// the cutoff, returns a certificate with finite=false (and records the
// corridor).  Throws CutoffTooSmall when every checked direction is blocked
// but the wedges do not yet cover the full circle of directions.
HorizonCertificate check_finite_horizon(BilliardTable& table, int direction_cutoff);

// Mean flight time between collisions, pi |D| / |dD|.
double mean_free_path(const BilliardTable& table);

} // namespace billiard

#endif
