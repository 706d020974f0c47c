#include "billiard/tangent.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "billiard/errors.hpp"

namespace billiard {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kGrazingCos = 1e-12;

ParticleState reversed(const ParticleState& s) {
    return {s.pos, std::fmod(s.angle + kPi, 2.0 * kPi)};
}

struct BackwardHit {
    double t_back{};       // time to the last collision
    double curvature{};
    double cos_phi{};
    double phi{};          // signed incidence of the forward outgoing ray
    ParticleState at;      // outgoing state at the collision (forward sense)
};

BackwardHit last_collision(const ParticleState& s, const BilliardTable& table) {
    const ParticleState rev = reversed(s);
    const Collision c = next_collision(rev, table);
    BackwardHit h;
    h.t_back = c.flight;
    h.curvature = 1.0 / table.scatterers[c.scatterer].radius;
    h.cos_phi = c.cos_incidence;
    // the forward orbit leaves the collision point in direction s.angle
    const Vec2d v{std::cos(s.angle), std::sin(s.angle)};
    h.phi = std::atan2(dot(v, perp(c.normal)), dot(v, c.normal));
    h.at = {c.point, s.angle};
    return h;
}

} // namespace

void tangent_free_flight(TangentVector& v, double tau) { v.d_xi += tau * v.d_omega; }

void tangent_collision_kick(TangentVector& v, double curvature, double cos_phi) {
    if (cos_phi < kGrazingCos)
        throw GrazingDerivative("tangent transport through a grazing collision");
    const double kick = 2.0 * curvature / cos_phi;
    const double xi = v.d_xi;
    v.d_xi = -xi;
    v.d_omega = -(v.d_omega + kick * xi);
}

ConeCheckContext cone_context(const ParticleState& state, const BilliardTable& table,
                              double c_f) {
    // First backward solve: the collision the orbit last left.
    const ParticleState rev = reversed(state);
    const Collision c1 = next_collision(rev, table);

    ConeCheckContext ctx;
    ctx.curvature = 1.0 / table.scatterers[c1.scatterer].radius;
    ctx.cos_phi = c1.cos_incidence;
    ctx.t_since = c1.flight;
    ctx.c_f = c_f;

    // Second backward solve for the flight into that collision.  The forward
    // orbit left the footpoint with the state's direction v; it arrived with
    // v_in = reflect(v) (reflection is an involution), so continuing the
    // backward orbit means specularly reflecting the backward ray.
    const Vec2d v{std::cos(state.angle), std::sin(state.angle)};
    const double vn = dot(v, c1.normal);
    const Vec2d v_in{v.x - 2.0 * vn * c1.normal.x, v.y - 2.0 * vn * c1.normal.y};
    const ParticleState back{c1.point, std::atan2(-v_in.y, -v_in.x)};
    ctx.t_prev = next_collision(back, table).flight;
    return ctx;
}

bool cone_contains(const ConeCheckContext& ctx, const TangentVector& v) {
    if (!(ctx.t_prev > 0.0)) throw UndefinedCone("no prior collision in the lookback");
    const double slope = cone_slope(ctx, v);
    if (!std::isfinite(slope)) return false;
    const double lo = ctx.curvature;
    const double hi = ctx.curvature + ctx.cos_phi / ctx.t_prev;
    const double tol = 1e-12 * (std::fabs(lo) + std::fabs(hi) + 1.0);  // inclusive edges
    if (slope < lo - tol || slope > hi + tol) return false;
    if (v.d_xi == 0.0) return false;
    return std::fabs(v.d_eta / v.d_xi) < ctx.c_f;
}

double cone_slope(const ConeCheckContext& ctx, const TangentVector& v) {
    // pull back by the free flight, then to map coordinates (dr, dphi)
    const double xi0 = v.d_xi - ctx.t_since * v.d_omega;
    const double w0 = v.d_omega;
    if (xi0 == 0.0) return std::numeric_limits<double>::infinity();
    return ctx.cos_phi * (w0 / xi0) - ctx.curvature;
}

TransportResult transport_tangent(const ParticleState& state, const TangentVector& v,
                                  double t, const BilliardTable& table, double c_f) {
    if (t < 0.0) throw Error("transport_tangent: negative time");
    TransportResult res;
    res.v = v;

    const BackwardHit h0 = last_collision(state, table);
    double last_K = h0.curvature, last_cos = h0.cos_phi;
    double t_prev = -1.0;  // flight into the last collision (unknown until one happens)
    double t_last_collision = -h0.t_back;

    OrbitCursor cur(state, table);
    double s = 0.0;
    while (true) {
        const auto& leg = cur.leg();
        const double leg_end = leg.t0 + leg.flight;
        if (leg_end < t) {
            tangent_free_flight(res.v, leg_end - s);
            s = leg_end;
            const double K = 1.0 / table.scatterers[leg.hit.scatterer].radius;
            const double cphi = leg.hit.cos_incidence;
            tangent_collision_kick(res.v, K, cphi);
            // flight into this collision; for the first leg it includes the
            // backward stub from the start point to its last collision
            t_prev = (res.collisions == 0) ? h0.t_back + leg.flight : leg.flight;
            last_K = K;
            last_cos = cphi;
            t_last_collision = leg_end;
            ++res.collisions;
            cur.advance();
        } else {
            tangent_free_flight(res.v, t - s);
            break;
        }
    }

    res.ctx.curvature = last_K;
    res.ctx.cos_phi = last_cos;
    res.ctx.t_since = t - t_last_collision;
    res.ctx.c_f = c_f;
    if (t_prev > 0.0) {
        res.ctx.t_prev = t_prev;
    } else {
        // no collision crossed: reuse the backward context of the start
        res.ctx.t_prev = cone_context(state, table, c_f).t_prev;
    }
    return res;
}

double expansion_factor(const ParticleState& state, const TangentVector& v, int n,
                        const BilliardTable& table) {
    if (n < 0) throw Error("expansion_factor: negative n");
    if (n == 0) return 1.0;
    const double n0 = std::hypot(v.d_xi, v.d_omega);
    if (!(n0 > 0.0)) throw Error("expansion_factor: zero transverse part");
    const auto res = transport_tangent(state, v, n * table.s_step(), table);
    return std::hypot(res.v.d_xi, res.v.d_omega) / n0;
}

int strip_index(double phi, int k0) {
    const double g = kPi / 2.0 - std::fabs(phi);
    const double central = 1.0 / (static_cast<double>(k0) * k0);
    if (g > central) return 0;
    if (g <= 0.0) return phi >= 0.0 ? 1000000000 : -1000000000;
    long k = static_cast<long>(std::floor(1.0 / std::sqrt(g)));
    k = std::min<long>(k, 1000000000);
    return static_cast<int>(phi >= 0.0 ? k : -k);
}

HomogeneityLabel homogeneity_label(const ParticleState& state, int k0,
                                   const BilliardTable& table) {
    const BackwardHit h = last_collision(state, table);
    HomogeneityLabel lab;
    if (h.t_back >= table.s_step()) {
        lab.is_g = true;
        return lab;
    }
    lab.is_g = false;
    lab.k = strip_index(h.phi, k0);
    return lab;
}

ParticleState UnstableCurve::point(double alpha) const {
    const Vec2d j{-std::sin(center.angle), std::cos(center.angle)};
    return make_state(center.pos.x + alpha * d_xi * j.x,
                      center.pos.y + alpha * d_xi * j.y,
                      center.angle + alpha * d_omega);
}

UnstableCurve make_unstable_curve(const ParticleState& center, double halfwidth,
                                  const BilliardTable& table) {
    const ConeCheckContext ctx = cone_context(center, table);
    // mid-cone map slope, pushed forward to the point through the free flight
    const double slope_mid = ctx.curvature + ctx.cos_phi / (2.0 * ctx.t_prev);
    const double w_over_xi0 = (slope_mid + ctx.curvature) / ctx.cos_phi;
    double xi = 1.0 + ctx.t_since * w_over_xi0;
    double om = w_over_xi0;
    const double n = std::hypot(xi, om);
    UnstableCurve c;
    c.center = center;
    c.d_xi = xi / n;
    c.d_omega = om / n;
    c.halfwidth = halfwidth;
    return c;
}

std::vector<long> itinerary_counts(const UnstableCurve& curve, int n_max, int samples,
                                   const BilliardTable& table) {
    if (n_max < 1 || n_max > 62) throw Error("itinerary_counts: n_max out of range");
    if (samples < 2) throw Error("itinerary_counts: need at least 2 samples");
    const double s_step = table.s_step();

    std::vector<std::uint64_t> masks;
    masks.reserve(samples);
    for (int i = 0; i < samples; ++i) {
        const double alpha = -curve.halfwidth
                             + 2.0 * curve.halfwidth * (static_cast<double>(i) / (samples - 1));
        const ParticleState p = curve.point(alpha);
        const BackwardHit h0 = last_collision(p, table);
        double t_last = -h0.t_back;

        std::uint64_t mask = 0;
        OrbitCursor cur(p, table);
        for (int j = 1; j <= n_max; ++j) {
            const double tj = j * s_step;
            while (cur.leg().t0 + cur.leg().flight < tj) {
                cur.advance();
                t_last = cur.leg().t0;
            }
            const bool is_g = (tj - t_last) >= s_step;
            if (is_g) mask |= (std::uint64_t{1} << (j - 1));
        }
        masks.push_back(mask);
    }

    std::vector<long> counts(n_max);
    std::sort(masks.begin(), masks.end());
    for (int j = 1; j <= n_max; ++j) {
        const std::uint64_t pref = (j == 64) ? ~std::uint64_t{0}
                                             : ((std::uint64_t{1} << j) - 1);
        long distinct = 0;
        std::uint64_t prev = 0;
        bool first = true;
        for (auto m : masks) {
            const std::uint64_t key = m & pref;
            if (first || key != prev) ++distinct;
            prev = key;
            first = false;
        }
        counts[j - 1] = distinct;
    }
    return counts;
}

long count_itineraries(const ParticleState& center, double curve_halfwidth, int n,
                       int samples, const BilliardTable& table) {
    if (n == 0) return 1;
    const auto curve = make_unstable_curve(center, curve_halfwidth, table);
    return itinerary_counts(curve, n, samples, table)[n - 1];
}

namespace {

ParticleState backward_map_n(const ParticleState& p, int n, const BilliardTable& table) {
    ParticleState r = reversed(p);
    for (int i = 0; i < n; ++i) r = time_s_map(r, table);
    return reversed(r);
}

bool same_label(const HomogeneityLabel& a, const HomogeneityLabel& b) {
    if (a.is_g != b.is_g) return false;
    return a.is_g || a.k == b.k;
}

// Transverse-norm derivative of Phi^{-n s} along the curve at alpha.
double backward_jacobian(const UnstableCurve& curve, double alpha, int n, double h,
                         const BilliardTable& table) {
    auto arc = [&](double a1, double a2) {
        const ParticleState q1 = backward_map_n(curve.point(a1), n, table);
        const ParticleState q2 = backward_map_n(curve.point(a2), n, table);
        const Vec2d j{-std::sin(q1.angle), std::cos(q1.angle)};
        const double dxi = wrap_half(q2.pos.x - q1.pos.x) * j.x
                         + wrap_half(q2.pos.y - q1.pos.y) * j.y;
        double dom = q2.angle - q1.angle;
        dom = std::remainder(dom, 2.0 * kPi);
        return std::hypot(dxi, dom);
    };
    const double j1 = arc(alpha - h, alpha + h) / (2.0 * h);
    const double j2 = arc(alpha - h / 2.0, alpha + h / 2.0) / h;
    return (4.0 * j2 - j1) / 3.0;  // Richardson
}

} // namespace

double distortion_ratio(const UnstableCurve& curve, double alpha_y, double alpha_z,
                        int n, const BilliardTable& table) {
    if (n < 1) throw Error("distortion_ratio: n must be >= 1");
    // weak homogeneity of the backward images up to n-1 steps, probed at the
    // endpoints and the midpoint
    const double probes[3] = {alpha_y, alpha_z, 0.5 * (alpha_y + alpha_z)};
    for (int i = 0; i < n; ++i) {
        HomogeneityLabel ref;
        for (int p = 0; p < 3; ++p) {
            const ParticleState q = backward_map_n(curve.point(probes[p]), i, table);
            const HomogeneityLabel lab = homogeneity_label(q, 10, table);
            if (p == 0)
                ref = lab;
            else if (!same_label(ref, lab))
                throw NotHomogeneous("backward image " + std::to_string(i)
                                     + " spans two homogeneity domains");
        }
    }
    const double h = std::max(1e-8 * curve.halfwidth, 1e-12);
    const double jy = backward_jacobian(curve, alpha_y, n, h, table);
    const double jz = backward_jacobian(curve, alpha_z, n, h, table);
    return jy / jz;
}

} // namespace billiard
