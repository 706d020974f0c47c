#include "billiard/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "billiard/errors.hpp"

namespace billiard {

namespace {

constexpr double kPi = 3.14159265358979323846;

int gcd_int(int a, int b) { return std::gcd(a, b); }

// Cyclic distance on a circle of circumference `period`.
double cyclic_dist(double a, double b, double period) {
    double d = std::fabs(a - b);
    d -= period * std::floor(d / period);
    return std::min(d, period - d);
}

} // namespace

TorusPoint make_torus_point(double x, double y) {
    return {wrap01(x), wrap01(y)};
}

double torus_distance(TorusPoint a, TorusPoint b) {
    const double dx = wrap_half(a.x - b.x);
    const double dy = wrap_half(a.y - b.y);
    return std::sqrt(dx * dx + dy * dy);
}

double BilliardTable::clearance(TorusPoint q) const {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& s : scatterers)
        best = std::min(best, torus_distance(q, s.center) - s.radius);
    return best;
}

BilliardTable build_table(std::vector<Scatterer> scatterers) {
    if (scatterers.empty())
        throw RadiusError("table needs at least one scatterer");

    for (auto& s : scatterers) {
        if (!std::isfinite(s.radius) || s.radius <= 0.0)
            throw RadiusError("scatterer radius must be positive");
        if (s.radius >= 0.5)
            throw RadiusError("scatterer radius must be < 1/2 (overlaps its own translate)");
        s.center = make_torus_point(s.center.x, s.center.y);
    }

    // Disjointness over lattice translates, and the minimal boundary gap.
    // A 5x5 translate block suffices: all gaps of interest are < 1.
    double tau_min = std::numeric_limits<double>::infinity();
    const int J = static_cast<int>(scatterers.size());
    for (int i = 0; i < J; ++i) {
        for (int j = i; j < J; ++j) {
            for (int a = -2; a <= 2; ++a) {
                for (int b = -2; b <= 2; ++b) {
                    if (i == j && a == 0 && b == 0) continue;
                    const double dx = scatterers[j].center.x + a - scatterers[i].center.x;
                    const double dy = scatterers[j].center.y + b - scatterers[i].center.y;
                    const double gap = std::sqrt(dx * dx + dy * dy)
                                       - scatterers[i].radius - scatterers[j].radius;
                    if (gap <= 0.0)
                        throw OverlapError("scatterers " + std::to_string(i) + " and "
                                           + std::to_string(j) + " intersect (translate ("
                                           + std::to_string(a) + "," + std::to_string(b) + "))");
                    tau_min = std::min(tau_min, gap);
                }
            }
        }
    }

    BilliardTable t;
    t.scatterers = std::move(scatterers);
    double area = 1.0, boundary = 0.0, rmax = 0.0;
    t.arc_offset.reserve(t.scatterers.size());
    for (const auto& s : t.scatterers) {
        t.arc_offset.push_back(boundary);
        area -= kPi * s.radius * s.radius;
        boundary += 2.0 * kPi * s.radius;
        rmax = std::max(rmax, s.radius);
    }
    if (area <= 0.0)
        throw OverlapError("scatterers fill the torus (|D| <= 0)");
    t.domain_area = area;
    t.boundary_length = boundary;
    t.tau_min = tau_min;
    t.max_radius = rmax;
    return t;
}

namespace {

// Shadow-coverage margin of one direction: the minimum over the transverse
// period circle of the deepest shadow.  The envelope of the tent functions
// r_j - dist(u, u_j) is piecewise linear, so the minimum is attained at a
// tent edge or at a crossing of two tents; we evaluate all candidates.
double coverage_margin(const std::vector<Scatterer>& scatterers,
                       double nx, double ny, double period) {
    const std::size_t J = scatterers.size();
    std::vector<double> u(J), r(J);
    for (std::size_t j = 0; j < J; ++j) {
        double proj = scatterers[j].center.x * nx + scatterers[j].center.y * ny;
        u[j] = proj - period * std::floor(proj / period);
        r[j] = scatterers[j].radius;
    }
    auto depth = [&](double x) {
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < J; ++j)
            best = std::max(best, r[j] - cyclic_dist(x, u[j], period));
        return best;
    };

    std::vector<double> candidates;
    for (std::size_t i = 0; i < J; ++i) {
        candidates.push_back(u[i]);
        candidates.push_back(u[i] + r[i]);
        candidates.push_back(u[i] - r[i]);
        for (std::size_t j = 0; j < J; ++j) {
            // crossing of the descending slope of tent i with the ascending
            // slope of tent j, over the three relevant period shifts
            for (int k = -1; k <= 1; ++k) {
                const double uj = u[j] + k * period;
                candidates.push_back(0.5 * (u[i] + uj + r[i] - r[j]));
            }
        }
    }
    double m = std::numeric_limits<double>::infinity();
    for (double c : candidates) m = std::min(m, depth(c));
    return m;
}

struct Wedge {
    double lo{}, hi{};  // interval of directions mod pi
    double bound{};
    double norm{};
};

// Do the wedges whose flight bound is <= `cap` cover the circle [0, pi)?
bool wedges_cover(const std::vector<Wedge>& wedges, double cap, double* gap_at = nullptr) {
    std::vector<std::pair<double, double>> iv;
    for (const auto& w : wedges) {
        if (w.bound > cap) continue;
        double lo = w.lo, hi = w.hi;
        // normalize lo into [0, pi)
        double shift = kPi * std::floor(lo / kPi);
        lo -= shift;
        hi -= shift;
        if (hi > kPi) {
            iv.emplace_back(lo, kPi);
            iv.emplace_back(0.0, hi - kPi);
        } else {
            iv.emplace_back(lo, hi);
        }
    }
    if (iv.empty()) return false;
    std::sort(iv.begin(), iv.end());
    if (iv.front().first > 0.0) {
        if (gap_at) *gap_at = 0.0;
        return false;
    }
    double reach = iv.front().second;
    for (const auto& [lo, hi] : iv) {
        if (lo > reach) {
            if (gap_at) *gap_at = reach;
            return false;
        }
        reach = std::max(reach, hi);
    }
    if (reach < kPi) {
        if (gap_at) *gap_at = reach;
        return false;
    }
    return true;
}

} // namespace

HorizonCertificate check_finite_horizon(BilliardTable& table, int direction_cutoff) {
    if (direction_cutoff < 1)
        throw CutoffTooSmall("direction cutoff must be >= 1");

    // Primitive directions with angle in [0, pi): (1,0) plus all (p,q),
    // q >= 1, gcd(|p|,q) = 1, |p| <= cutoff, q <= cutoff.
    std::vector<DirectionRecord> dirs;
    auto add_dir = [&](int p, int q) {
        DirectionRecord d;
        d.p = p;
        d.q = q;
        d.norm = std::hypot(static_cast<double>(p), static_cast<double>(q));
        d.period = 1.0 / d.norm;
        dirs.push_back(d);
    };
    add_dir(1, 0);
    for (int q = 1; q <= direction_cutoff; ++q)
        for (int p = -direction_cutoff; p <= direction_cutoff; ++p)
            if (gcd_int(std::abs(p), q) == 1) add_dir(p, q);
    std::sort(dirs.begin(), dirs.end(), [](const DirectionRecord& a, const DirectionRecord& b) {
        if (a.norm != b.norm) return a.norm < b.norm;
        return std::atan2(a.q, a.p) < std::atan2(b.q, b.p);
    });

    HorizonCertificate cert;
    cert.cutoff = direction_cutoff;
    cert.directions_checked = dirs.size();

    std::vector<Wedge> wedges;
    wedges.reserve(dirs.size());
    for (auto& d : dirs) {
        // transverse axis of the (p,q) corridor lattice
        const double nx = -d.q / d.norm, ny = d.p / d.norm;
        d.margin = coverage_margin(table.scatterers, nx, ny, d.period);
        if (d.margin <= 0.0) {
            cert.finite = false;
            cert.corridor_p = d.p;
            cert.corridor_q = d.q;
            cert.corridor_width = -2.0 * d.margin;
            cert.cover.clear();
            cert.cover.push_back(d);
            cert.tail_criterion = "open corridor found within cutoff";
            table.horizon_certificate = cert;
            table.tau_max.reset();
            return cert;
        }
        d.wedge_half_angle = std::atan(d.margin / d.norm);
        d.flight_bound = std::sqrt(d.norm * d.norm + d.margin * d.margin);
        const double theta = std::atan2(static_cast<double>(d.q), static_cast<double>(d.p));
        const double t0 = theta < 0.0 ? theta + kPi : theta;  // mod pi
        wedges.push_back({t0 - d.wedge_half_angle, t0 + d.wedge_half_angle,
                          d.flight_bound, d.norm});
    }

    if (!wedges_cover(wedges, std::numeric_limits<double>::infinity()))
        throw CutoffTooSmall(
            "all checked directions are blocked but their wedges do not cover "
            "the direction circle; raise the cutoff");

    // Smallest flight bound whose wedge set still covers all directions.
    std::vector<double> bounds;
    for (const auto& w : wedges) bounds.push_back(w.bound);
    std::sort(bounds.begin(), bounds.end());
    bounds.erase(std::unique(bounds.begin(), bounds.end()), bounds.end());
    std::size_t lo = 0, hi = bounds.size() - 1;
    while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (wedges_cover(wedges, bounds[mid]))
            hi = mid;
        else
            lo = mid + 1;
    }
    const double cap = bounds[lo];

    cert.finite = true;
    cert.tau_max = cap;
    for (const auto& d : dirs) {
        if (d.margin > 0.0 && d.flight_bound <= cap) {
            cert.cover.push_back(d);
            cert.max_needed_norm = std::max(cert.max_needed_norm, d.norm);
        }
    }
    cert.tail_criterion =
        "directions not listed (including all beyond the cutoff) lie inside the "
        "wedge |theta - theta_pq| <= atan(margin/norm) of a listed blocked "
        "direction; within a wedge any free segment longer than "
        "sqrt(norm^2+margin^2) crosses a scatterer column";
    table.horizon_certificate = cert;
    table.tau_max = cap;
    return cert;
}

double mean_free_path(const BilliardTable& table) {
    return kPi * table.domain_area / table.boundary_length;
}

} // namespace billiard
