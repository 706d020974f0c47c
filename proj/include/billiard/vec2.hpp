#ifndef BILLIARD_VEC2_HPP
#define BILLIARD_VEC2_HPP

#include <cmath>

namespace billiard {

// Minimal 2-vector, templated so the collision kernel can run in double or
// in multiprecision (used by the reversibility oracle).
template <typename Real>
struct Vec2 {
    Real x{}, y{};

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(Real s, Vec2 a) { return {s * a.x, s * a.y}; }
    friend Vec2 operator*(Vec2 a, Real s) { return {s * a.x, s * a.y}; }
    Vec2& operator+=(Vec2 b) { x += b.x; y += b.y; return *this; }
    Vec2& operator-=(Vec2 b) { x -= b.x; y -= b.y; return *this; }
};

template <typename Real>
inline Real dot(Vec2<Real> a, Vec2<Real> b) { return a.x * b.x + a.y * b.y; }

template <typename Real>
inline Real norm2(Vec2<Real> a) { return dot(a, a); }

template <typename Real>
inline Real norm(Vec2<Real> a) {
    using std::sqrt;
    return sqrt(norm2(a));
}

// Rotate by +90 degrees.
template <typename Real>
inline Vec2<Real> perp(Vec2<Real> a) { return {-a.y, a.x}; }

// Reduce a coordinate to [0,1).  Idempotent, exact for values already there.
template <typename Real>
inline Real wrap01(Real v) {
    using std::floor;
    Real w = v - floor(v);
    if (w >= Real(1)) w -= Real(1);  // floor rounding at the seam
    if (w < Real(0)) w += Real(1);
    return w;
}

// Signed representative of v mod 1 in [-1/2, 1/2).
template <typename Real>
inline Real wrap_half(Real v) {
    Real w = wrap01(v);
    if (w >= Real(0.5)) w -= Real(1);
    return w;
}

using Vec2d = Vec2<double>;

} // namespace billiard

#endif
