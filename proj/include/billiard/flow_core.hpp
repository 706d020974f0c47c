#ifndef BILLIARD_FLOW_CORE_HPP
#define BILLIARD_FLOW_CORE_HPP

#include <cstddef>
#include <vector>

#include "billiard/vec2.hpp"

namespace billiard {

// Ray / circle kernel, templated so the same collision rules run in double
// (production) and in multiprecision (reversibility oracle).
//
// Tolerance policy:
//  - tangencies with discriminant < 1e-24 are treated as misses (the ray
//    passes; penetration depth is below 1e-23/r, within the state band);
//  - a start point within 1e-12 of a circle is snapped onto it: outgoing or
//    tangential rays miss, ingoing rays hit at t = 0.
template <typename Real>
struct RayHit {
    bool hit{};
    Real t{};
};

template <typename Real>
RayHit<Real> ray_circle_first(Vec2<Real> p, Vec2<Real> u, Vec2<Real> center, Real radius) {
    using std::sqrt;
    const Vec2<Real> d = center - p;
    const Real b = dot(d, u);                    // midpoint of the two roots
    Real c = dot(d, d) - radius * radius;        // signed "outsideness"
    const Real band = Real(2e-12) * radius;
    if (c < band && c > -band) {
        // start on the boundary
        if (b > Real(1e-12)) return {true, Real(0)};
        return {false, Real(0)};
    }
    if (c < Real(0)) return {false, Real(0)};    // interior start: invalid, no hit
    if (b <= Real(0)) return {false, Real(0)};   // circle behind
    const Real disc = b * b - c;
    if (disc < Real(1e-24)) return {false, Real(0)};
    return {true, c / (b + sqrt(disc))};         // stable small root
}

// Circle data in the unfolded plane lattice: centers of the base cell.
template <typename Real>
struct UnfoldedCircle {
    Vec2<Real> center;
    Real radius;
    int id;
};

template <typename Real>
struct KernelCollision {
    Real flight{};
    int id{-1};
    Vec2<Real> point;   // unfolded coordinates relative to the start cell
    Vec2<Real> normal;  // unit, pointing away from the scatterer
    bool found{};
};

// Brute-force next collision: tests every translate image within the given
// lattice range.  Complete whenever the true flight is < range - 1.  Used by
// the multiprecision oracle and as a cross-check of the grid walk.
template <typename Real>
KernelCollision<Real> next_collision_bruteforce(Vec2<Real> p, Vec2<Real> u,
                                                const std::vector<UnfoldedCircle<Real>>& circles,
                                                int range) {
    KernelCollision<Real> best;
    for (int a = -range; a <= range; ++a) {
        for (int b = -range; b <= range; ++b) {
            for (const auto& c : circles) {
                const Vec2<Real> center{c.center.x + Real(a), c.center.y + Real(b)};
                const auto h = ray_circle_first(p, u, center, c.radius);
                if (h.hit && (!best.found || h.t < best.flight)) {
                    best.found = true;
                    best.flight = h.t;
                    best.id = c.id;
                    // re-project onto the exact circle to kill drift
                    Vec2<Real> q = p + h.t * u;
                    Vec2<Real> n = q - center;
                    const Real len = norm(n);
                    n = (Real(1) / len) * n;
                    best.point = center + c.radius * n;
                    best.normal = n;
                }
            }
        }
    }
    return best;
}

// Specular reflection of a direction vector: v' = v - 2 <v,n> n.
template <typename Real>
Vec2<Real> reflect_dir(Vec2<Real> v, Vec2<Real> n) {
    const Real vn = dot(v, n);
    if (vn >= Real(0)) return v;  // tangential or outgoing: unchanged
    return v - (Real(2) * vn) * n;
}

} // namespace billiard

#endif
