#ifndef BILLIARD_STATS_HPP
#define BILLIARD_STATS_HPP

#include <functional>
#include <vector>

namespace billiard {

// Scaled first-encounter times censored at the horizon T.  `times` holds the
// uncensored observations, sorted ascending; censored trials carry mass at T.
struct EmpiricalDistribution {
    std::vector<double> times;
    long trials{};
    long censored{};
    double horizon{};

    // Right-continuous empirical CDF (censored mass excluded below T).
    double cdf(double t) const;
};

EmpiricalDistribution make_empirical(std::vector<double> uncensored, long censored,
                                     double horizon);

// Exact sup-distance between the empirical step function and a continuous
// CDF over [0, T].  `full` treats censored mass as sitting at T (the
// comparison the limit theorem prescribes at the horizon endpoint);
// `conditional` compares the law conditioned on {time <= T}.
struct KsResult {
    double full{};
    double conditional{};
};
KsResult ks_statistic(const EmpiricalDistribution& emp,
                      const std::function<double(double)>& cdf);

// 99% band of the one-sample Kolmogorov statistic.
double ks_critical_99(long n);

struct HazardBin {
    double t_lo{}, t_hi{};
    long at_risk{};
    long deaths{};
    double hazard{};
    bool low_confidence{};  // fewer than 50 survivors at the bin start
};

// Per-bin conditional exit probability divided by the bin width.
std::vector<HazardBin> hazard_estimate(const EmpiricalDistribution& emp, double bin_width);

// Exposure-weighted mean over high-confidence bins (the censored-data MLE of
// the rate when the bins partition [0,T]).
double mean_hazard(const std::vector<HazardBin>& bins);

struct LineFit {
    double intercept{}, slope{};
    double slope_se{};
    double r2{};
    long n{};
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Pearson statistic sum (O-E)^2/E; expected counts from probabilities.
double chi2_statistic(const std::vector<long>& observed,
                      const std::vector<double>& expected_counts);
double chi2_quantile(double p, int dof);
double student_t_quantile(double p, int dof);

} // namespace billiard

#endif
