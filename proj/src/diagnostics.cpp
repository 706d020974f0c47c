#include "billiard/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "billiard/errors.hpp"
#include "billiard/experiment.hpp"
#include "billiard/flow.hpp"
#include "billiard/rng.hpp"
#include "billiard/stats.hpp"

namespace billiard {

namespace {

// A vector drawn uniformly from the interior of the flow cone at `state`.
TangentVector random_cone_vector(const ParticleState& state, const ConeCheckContext& ctx,
                                 Rng& rng) {
    // map slope strictly inside [K, K + cos(phi)/t_prev]
    const double u = 0.05 + 0.9 * rng.uniform();
    const double slope = ctx.curvature + u * ctx.cos_phi / ctx.t_prev;
    const double w_over_xi = (slope + ctx.curvature) / ctx.cos_phi;
    TangentVector v;
    const double xi0 = 1.0;
    const double om0 = w_over_xi;
    // push forward through the free flight to the state
    v.d_xi = xi0 + ctx.t_since * om0;
    v.d_omega = om0;
    v.d_eta = (2.0 * rng.uniform() - 1.0) * 0.5 * ctx.c_f * v.d_xi;
    (void)state;
    return v;
}

} // namespace

ConeInvarianceReport cone_invariance_scan(const BilliardTable& table, long n_vectors,
                                          int collisions_each, std::uint64_t seed) {
    ConeInvarianceReport rep;
    rep.vectors = n_vectors;
    rep.collisions_each = collisions_each;
    for (long i = 0; i < n_vectors; ++i) {
        Rng rng(seed, static_cast<std::uint64_t>(i));
        const ParticleState s0 = sample_state(table, rng);
        const ConeCheckContext ctx0 = cone_context(s0, table);
        TangentVector v = random_cone_vector(s0, ctx0, rng);

        OrbitCursor cur(s0, table);
        bool discarded = false;
        for (int c = 0; c < collisions_each && !discarded; ++c) {
            const auto& leg = cur.leg();
            tangent_free_flight(v, leg.flight);
            const double k = 1.0 / table.scatterers[leg.hit.scatterer].radius;
            const double cphi = leg.hit.cos_incidence;
            const double flight_in = (c == 0) ? ctx0.t_since + leg.flight : leg.flight;
            if (cphi < 1e-9) {  // close to grazing: derivative unreliable, discard
                ++rep.grazing_discarded;
                discarded = true;
                break;
            }
            tangent_collision_kick(v, k, cphi);
            ConeCheckContext ctx;
            ctx.curvature = k;
            ctx.cos_phi = cphi;
            ctx.t_since = 0.0;
            ctx.t_prev = flight_in;
            ctx.c_f = ctx0.c_f;
            ++rep.checks;
            if (!cone_contains(ctx, v)) {
                ++rep.violations;
                const double slope = cone_slope(ctx, v);
                const double lo = ctx.curvature, hi = ctx.curvature + cphi / flight_in;
                const double margin = slope < lo ? slope - lo : slope - hi;
                rep.worst_margin = std::min(rep.worst_margin, margin);
            }
            cur.advance();
        }
    }
    return rep;
}

ExpansionReport expansion_scan(const BilliardTable& table, long samples, int n,
                               std::uint64_t seed) {
    ExpansionReport rep;
    rep.n = n;
    rep.min_factor = std::numeric_limits<double>::infinity();
    double sum_log = 0.0;
    long used = 0;
    for (long i = 0; i < samples; ++i) {
        Rng rng(seed, static_cast<std::uint64_t>(i) + 0x657870ULL);
        const ParticleState s0 = sample_state(table, rng);
        const ConeCheckContext ctx = cone_context(s0, table);
        const TangentVector v = random_cone_vector(s0, ctx, rng);
        try {
            const double f = expansion_factor(s0, v, n, table);
            rep.min_factor = std::min(rep.min_factor, f);
            sum_log += std::log(f);
            ++used;
        } catch (const GrazingDerivative&) {
            ++rep.discarded_grazing;
        }
    }
    rep.samples = used;
    rep.min_per_step = std::pow(rep.min_factor, 1.0 / n);
    rep.mean_log_per_time = used > 0 ? sum_log / used / (n * table.s_step()) : 0.0;
    return rep;
}

ComplexityReport complexity_scan(const BilliardTable& table, int n_max, double halfwidth,
                                 int samples_per_curve, int curves, std::uint64_t seed) {
    ComplexityReport rep;
    rep.n_max = n_max;
    rep.halfwidth = halfwidth;
    rep.samples_per_curve = samples_per_curve;
    rep.curves = curves;
    rep.counts.assign(n_max, 1);
    for (int c = 0; c < curves; ++c) {
        Rng rng(seed, static_cast<std::uint64_t>(c) + 0x636FULL);
        ParticleState center;
        for (;;) {
            center = sample_state(table, rng);
            if (table.clearance(center.pos) > 4.0 * halfwidth) break;
        }
        const auto curve = make_unstable_curve(center, halfwidth, table);
        const auto counts = itinerary_counts(curve, n_max, samples_per_curve, table);
        for (int j = 0; j < n_max; ++j)
            rep.counts[j] = std::max(rep.counts[j], counts[j]);
    }
    std::vector<double> lx, ly;
    for (int j = rep.n_fit_min; j <= n_max; ++j) {
        rep.l_hat = std::max(rep.l_hat,
                             static_cast<double>(rep.counts[j - 1]) / (static_cast<double>(j) * j));
        lx.push_back(std::log(static_cast<double>(j)));
        ly.push_back(std::log(static_cast<double>(rep.counts[j - 1])));
    }
    const auto fit = fit_line(lx, ly);
    rep.growth_exponent = fit.slope;
    rep.growth_r2 = fit.r2;
    return rep;
}

DistortionReport distortion_scan(const BilliardTable& table, long target_admissible,
                                 std::uint64_t seed) {
    DistortionReport rep;
    const double hw = 1e-5;
    std::uint64_t k = 0;
    while (rep.admissible < target_admissible && rep.attempted < 200 * target_admissible) {
        Rng rng(seed, 0x64697374ULL + k++);
        ++rep.attempted;
        ParticleState center = sample_state(table, rng);
        if (table.clearance(center.pos) < 4.0 * hw) continue;
        const int n = 1 + static_cast<int>(rng.uniform_index(3));
        try {
            const auto curve = make_unstable_curve(center, hw, table);
            const double ay = -hw + 2.0 * hw * rng.uniform();
            const double az = -hw + 2.0 * hw * rng.uniform();
            if (std::fabs(ay - az) < 0.1 * hw) continue;
            const double ratio = distortion_ratio(curve, ay, az, n, table);
            const double lr = std::fabs(std::log(ratio));
            rep.max_abs_log_ratio = std::max(rep.max_abs_log_ratio, lr);
            const double scale = std::fabs(ay - az) / std::pow(2.0 * hw, 2.0 / 3.0);
            rep.c_d_hat = std::max(rep.c_d_hat, lr / scale);
            ++rep.admissible;
        } catch (const NotHomogeneous&) {
        } catch (const GrazingDerivative&) {
        }
    }
    return rep;
}

std::vector<std::pair<double, double>> mixing_curve(const BilliardTable& table,
                                                    double max_lag, double dlag,
                                                    long samples, std::uint64_t seed) {
    const auto f = [](const ParticleState& s) {
        return std::cos(2.0 * 3.14159265358979323846 * s.pos.x)
               * std::cos(2.0 * 3.14159265358979323846 * s.pos.y);
    };
    const int n_lags = static_cast<int>(std::floor(max_lag / dlag)) + 1;
    std::vector<double> sum_fg(n_lags, 0.0), sum_g(n_lags, 0.0);
    double sum_f0 = 0.0;
    for (long i = 0; i < samples; ++i) {
        Rng rng(seed, static_cast<std::uint64_t>(i) + 0x6D6978ULL);
        ParticleState s = sample_state(table, rng);
        const double f0 = f(s);
        sum_f0 += f0;
        for (int l = 0; l < n_lags; ++l) {
            const double g = f(s);
            sum_fg[l] += f0 * g;
            sum_g[l] += g;
            if (l + 1 < n_lags) s = flow_segments(s, dlag, table).end_state;
        }
    }
    const double mean_f0 = sum_f0 / samples;
    std::vector<std::pair<double, double>> out;
    double c0 = 1.0;
    for (int l = 0; l < n_lags; ++l) {
        const double cov = sum_fg[l] / samples - mean_f0 * (sum_g[l] / samples);
        if (l == 0) c0 = cov > 0.0 ? cov : 1.0;
        out.emplace_back(l * dlag, cov / c0);
    }
    return out;
}

} // namespace billiard
