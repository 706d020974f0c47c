#ifndef BILLIARD_TESTS_REVERSIBILITY_HPP
#define BILLIARD_TESTS_REVERSIBILITY_HPP

// Time-reversibility oracle.  Roundoff in the collision solver is amplified
// by exp(2 * lyapunov * t) over a there-and-back orbit — about 10^170 for
// t = 100 on the test fixture — so the check runs the templated kernel on a
// 400-digit float (headroom ~10^60 below the 1e-9 tolerance).

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "billiard/flow.hpp"
#include "billiard/flow_core.hpp"
#include "billiard/geometry.hpp"

namespace billiard::testing {

using BigFloat =
    boost::multiprecision::number<boost::multiprecision::cpp_bin_float<400>>;

struct ReversalDefect {
    double position{};
    double direction{};
};

namespace detail {

template <typename Real>
std::vector<UnfoldedCircle<Real>> circles_of(const BilliardTable& table) {
    std::vector<UnfoldedCircle<Real>> out;
    for (std::size_t j = 0; j < table.scatterers.size(); ++j) {
        const auto& s = table.scatterers[j];
        out.push_back({{Real(s.center.x), Real(s.center.y)}, Real(s.radius),
                       static_cast<int>(j)});
    }
    return out;
}

// Flow for time t; positions are re-wrapped into [0,1)^2 after every
// collision so coordinates stay small.
template <typename Real>
void flow_exact(Vec2<Real>& p, Vec2<Real>& u, Real t,
                const std::vector<UnfoldedCircle<Real>>& circles) {
    Real remaining = t;
    while (remaining > 0) {
        const auto hit = next_collision_bruteforce<Real>(p, u, circles, 3);
        if (!hit.found || hit.flight >= remaining) {
            p = p + remaining * u;
            p.x = wrap01(p.x);
            p.y = wrap01(p.y);
            return;
        }
        p = hit.point;
        p.x = wrap01(p.x);
        p.y = wrap01(p.y);
        u = reflect_dir(u, hit.normal);
        remaining -= hit.flight;
    }
}

} // namespace detail

inline ReversalDefect reversibility_defect(const BilliardTable& table,
                                           const ParticleState& s0, double t) {
    using std::cos;
    using std::sin;
    const auto circles = detail::circles_of<BigFloat>(table);
    Vec2<BigFloat> p{BigFloat(s0.pos.x), BigFloat(s0.pos.y)};
    Vec2<BigFloat> u{cos(BigFloat(s0.angle)), sin(BigFloat(s0.angle))};
    const Vec2<BigFloat> p0 = p, u0 = u;

    detail::flow_exact(p, u, BigFloat(t), circles);
    u = {-u.x, -u.y};
    detail::flow_exact(p, u, BigFloat(t), circles);
    u = {-u.x, -u.y};

    const BigFloat dx = wrap_half(p.x - p0.x);
    const BigFloat dy = wrap_half(p.y - p0.y);
    const BigFloat du_x = u.x - u0.x, du_y = u.y - u0.y;
    ReversalDefect d;
    d.position = sqrt(dx * dx + dy * dy).template convert_to<double>();
    d.direction = sqrt(du_x * du_x + du_y * du_y).template convert_to<double>();
    return d;
}

} // namespace billiard::testing

#endif
