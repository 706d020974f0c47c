#include "billiard/rate.hpp"

#include <cmath>
#include <functional>

#include "billiard/errors.hpp"

namespace billiard {

namespace {

constexpr double kPi = 3.14159265358979323846;

void require_args(double lambda, double domain_area) {
    if (!(lambda >= 0.0 && lambda <= 1.0))
        throw OutOfRangeLambda("lambda must be in [0,1]");
    if (!(domain_area > 0.0)) throw Error("domain area must be positive");
}

// Adaptive Simpson with absolute tolerance.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double fa, double fm, double fb, double whole, double tol,
                        int depth, double* err) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) {
        *err += std::fabs(delta) / 15.0;
        return left + right + delta / 15.0;
    }
    return adaptive_simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1, err)
         + adaptive_simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1, err);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol,
                 double* err) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48, err);
}

} // namespace

double elliptic_e_agm(double k) {
    if (k == 1.0) return 1.0;
    // Abramowitz & Stegun 17.6: a_0 = 1, b_0 = k', c_0 = k;
    // K = pi/(2 a_inf), E = K (1 - sum 2^{n-1} c_n^2).
    double a = 1.0;
    double b = std::sqrt((1.0 - k) * (1.0 + k));
    double c = k;
    double sum = 0.5 * c * c;
    double pow2 = 0.5;
    for (int n = 0; n < 64 && std::fabs(c) > 1e-17; ++n) {
        c = 0.5 * (a - b);
        const double an = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = an;
        pow2 *= 2.0;
        sum += pow2 * c * c;
    }
    const double big_k = kPi / (2.0 * a);
    return big_k * (1.0 - sum);
}

RateResult rho_quadrature(double lambda, double domain_area) {
    require_args(lambda, domain_area);
    auto f = [lambda](double phi) {
        return std::sqrt(1.0 - 2.0 * lambda * std::cos(phi) + lambda * lambda);
    };
    double err1 = 0.0, err2 = 0.0;
    const double tol = 0.5e-13;
    const double integral = integrate(f, 0.0, kPi, tol, &err1)
                          + integrate(f, kPi, 2.0 * kPi, tol, &err2);
    RateResult r;
    r.lambda = lambda;
    r.domain_area = domain_area;
    r.method = RateMethod::Quadrature;
    r.rho = integral / (2.0 * kPi * domain_area);
    r.abs_err_estimate = (err1 + err2) / (2.0 * kPi * domain_area) + 1e-14 * r.rho;
    return r;
}

RateResult rho_closed_form(double lambda, double domain_area) {
    require_args(lambda, domain_area);
    const double k = 2.0 * std::sqrt(lambda) / (1.0 + lambda);
    const double integral = 4.0 * (1.0 + lambda) * elliptic_e_agm(k);
    RateResult r;
    r.lambda = lambda;
    r.domain_area = domain_area;
    r.method = RateMethod::ClosedForm;
    r.rho = integral / (2.0 * kPi * domain_area);
    r.abs_err_estimate = 1e-14 * r.rho;
    return r;
}

double exponential_cdf(double rho, double t) {
    if (!(rho > 0.0)) throw Error("exponential_cdf: rate must be positive");
    if (t < 0.0) throw Error("exponential_cdf: negative time");
    return -std::expm1(-rho * t);
}

} // namespace billiard
