#ifndef BILLIARD_RATE_HPP
#define BILLIARD_RATE_HPP

namespace billiard {

enum class RateMethod { Quadrature, ClosedForm };

struct RateResult {
    double lambda{};
    double domain_area{};
    double rho{};
    RateMethod method{};
    double abs_err_estimate{};
};

// rho(lambda) = 1/(2 pi |D|) * integral_0^{2pi} sqrt(1 - 2 lambda cos(phi)
// + lambda^2) dphi, by adaptive quadrature.  The integrand has a |sin|-type
// kink at phi = 0 when lambda = 1; the interval is split at pi so the kink
// sits at the panel edges.
RateResult rho_quadrature(double lambda, double domain_area);

// Same integral via the reduction to the complete elliptic integral of the
// second kind: integral = 4 (1+lambda) E(2 sqrt(lambda)/(1+lambda)), with E
// evaluated by the AGM iteration.
RateResult rho_closed_form(double lambda, double domain_area);

// Complete elliptic integral of the second kind, modulus k in [0,1].
double elliptic_e_agm(double k);

// 1 - exp(-rho t).
double exponential_cdf(double rho, double t);

} // namespace billiard

#endif
