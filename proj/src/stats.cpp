#include "billiard/stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "billiard/errors.hpp"

namespace billiard {

double EmpiricalDistribution::cdf(double t) const {
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    double mass = static_cast<double>(it - times.begin());
    if (t >= horizon) mass += static_cast<double>(censored);
    return mass / static_cast<double>(trials);
}

EmpiricalDistribution make_empirical(std::vector<double> uncensored, long censored,
                                     double horizon) {
    std::sort(uncensored.begin(), uncensored.end());
    EmpiricalDistribution e;
    e.trials = static_cast<long>(uncensored.size()) + censored;
    e.times = std::move(uncensored);
    e.censored = censored;
    e.horizon = horizon;
    if (e.trials == 0) throw EmptySample("empirical distribution with zero trials");
    return e;
}

KsResult ks_statistic(const EmpiricalDistribution& emp,
                      const std::function<double(double)>& cdf) {
    const long n = emp.trials;
    const long m = static_cast<long>(emp.times.size());
    if (n == 0) throw EmptySample("ks_statistic on empty sample");

    KsResult r;
    const double ft = cdf(emp.horizon);
    for (long i = 0; i < m; ++i) {
        const double f = cdf(emp.times[i]);
        r.full = std::max(r.full, std::max(f - static_cast<double>(i) / n,
                                           static_cast<double>(i + 1) / n - f));
        if (m > 0 && ft > 0.0) {
            const double fc = f / ft;
            r.conditional = std::max(r.conditional,
                                     std::max(fc - static_cast<double>(i) / m,
                                              static_cast<double>(i + 1) / m - fc));
        }
    }
    // endpoint gap at the horizon: empirical mass below T vs the model
    r.full = std::max(r.full, std::fabs(ft - static_cast<double>(m) / n));
    return r;
}

double ks_critical_99(long n) {
    return 1.628 / std::sqrt(static_cast<double>(n));  // Kolmogorov c(0.01)
}

std::vector<HazardBin> hazard_estimate(const EmpiricalDistribution& emp, double bin_width) {
    if (!(bin_width > 0.0 && bin_width < emp.horizon))
        throw Error("hazard_estimate: bin width must be in (0, T)");
    const long n_bins = static_cast<long>(std::ceil(emp.horizon / bin_width - 1e-9));
    std::vector<HazardBin> bins(n_bins);
    std::size_t idx = 0;
    long dead = 0;
    for (long k = 0; k < n_bins; ++k) {
        HazardBin& b = bins[k];
        b.t_lo = k * bin_width;
        b.t_hi = std::min((k + 1) * bin_width, emp.horizon);
        b.at_risk = emp.trials - dead;
        while (idx < emp.times.size() && emp.times[idx] < b.t_hi) {
            ++b.deaths;
            ++idx;
        }
        dead += b.deaths;
        const double width = b.t_hi - b.t_lo;
        b.hazard = b.at_risk > 0
                       ? static_cast<double>(b.deaths) / (static_cast<double>(b.at_risk) * width)
                       : 0.0;
        b.low_confidence = b.at_risk < 50;
    }
    return bins;
}

double mean_hazard(const std::vector<HazardBin>& bins) {
    double deaths = 0.0, exposure = 0.0;
    for (const auto& b : bins) {
        if (b.low_confidence) continue;
        deaths += static_cast<double>(b.deaths);
        exposure += static_cast<double>(b.at_risk) * (b.t_hi - b.t_lo);
    }
    return exposure > 0.0 ? deaths / exposure : 0.0;
}

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const long n = static_cast<long>(x.size());
    if (n < 3 || y.size() != x.size()) throw Error("fit_line: need >= 3 points");
    double sx = 0.0, sy = 0.0;
    for (long i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (long i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    LineFit f;
    f.n = n;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double sse = 0.0;
    for (long i = 0; i < n; ++i) {
        const double r = y[i] - (f.intercept + f.slope * x[i]);
        sse += r * r;
    }
    f.slope_se = std::sqrt(sse / (n - 2) / sxx);
    f.r2 = syy > 0.0 ? 1.0 - sse / syy : 1.0;
    return f;
}

double chi2_statistic(const std::vector<long>& observed,
                      const std::vector<double>& expected_counts) {
    if (observed.size() != expected_counts.size())
        throw Error("chi2_statistic: size mismatch");
    double stat = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const double e = expected_counts[i];
        if (!(e > 0.0)) throw Error("chi2_statistic: nonpositive expected count");
        const double d = static_cast<double>(observed[i]) - e;
        stat += d * d / e;
    }
    return stat;
}

double chi2_quantile(double p, int dof) {
    return boost::math::quantile(boost::math::chi_squared_distribution<double>(dof), p);
}

double student_t_quantile(double p, int dof) {
    return boost::math::quantile(boost::math::students_t_distribution<double>(dof), p);
}

} // namespace billiard
