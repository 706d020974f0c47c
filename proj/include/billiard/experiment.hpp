#ifndef BILLIARD_EXPERIMENT_HPP
#define BILLIARD_EXPERIMENT_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "billiard/encounter.hpp"
#include "billiard/flow.hpp"
#include "billiard/geometry.hpp"
#include "billiard/rng.hpp"
#include "billiard/stats.hpp"

namespace billiard {

struct ExperimentConfig {
    std::shared_ptr<const BilliardTable> table;
    double lambda{};
    double epsilon{};
    double xi{};
    double T{};  // macroscopic horizon; trials simulate to T/epsilon
    long trials{};
    std::uint64_t master_seed{};

    void validate() const;  // throws ConfigError
    double horizon() const { return T / epsilon; }
};

struct TrialOutcome {
    long trial_index{};
    // first epsilon-approach regardless of goodness (the Theorem-1 statistic)
    std::optional<double> first_approach_time;  // s, unscaled
    std::optional<double> scaled_approach_time; // epsilon * s
    // first good encounter (xi-transversal, xi-clear of the boundary)
    std::optional<double> first_good_time;
    std::optional<double> scaled_time;
    long skipped_approaches{};  // non-good visits before the first good one
    long good_count_total{};    // good visits over the whole horizon
    long visit_count{};
    bool grazing_flagged{};
    bool faulted{};
    std::string fault;
};

// Exact mu-sample: position uniform on D by rejection, angle uniform.
ParticleState sample_state(const BilliardTable& table, Rng& rng);

// Deterministic function of (config, trial_index): the per-trial stream is
// keyed by (master_seed, trial_index).
TrialOutcome run_trial(const ExperimentConfig& config, long trial_index);

// Summary of one censored first-passage law against Exp(rho).
struct LawSummary {
    double ks_full{};
    double ks_conditional{};
    double censored_fraction{};
    double predicted_censored{};  // exp(-rho T)
    double mle_rate{};            // deaths / exposure on [0, T]
    std::vector<HazardBin> hazard;
    double hazard_mean{};
    double hazard_slope{};
    double hazard_slope_se{};
};

struct EnsembleSummary {
    double rho{};  // rate module value for (lambda, |D|)
    long faults{};
    long grazing_flagged{};
    double mean_collisions_per_trial{};
    LawSummary approach;  // plain first epsilon-approach
    LawSummary good;      // first good encounter
};

struct EnsembleResult {
    std::vector<TrialOutcome> outcomes;
    EmpiricalDistribution approach_dist;
    EmpiricalDistribution good_dist;
    EnsembleSummary summary;
};

// Runs the trials on `workers` threads; the merge is in trial-index order so
// the result is a pure function of the config.  Throws EnsembleFault if more
// than 0.1% of trials fault.
EnsembleResult run_ensemble(const ExperimentConfig& config, int workers = 0);

// Builds the two law summaries for an already-collected outcome vector.
EnsembleResult summarize_outcomes(const ExperimentConfig& config,
                                  std::vector<TrialOutcome> outcomes);

// Monte Carlo estimate of mu(q2, phi2 : good collision with the orbit of
// (q1, phi1) within flow time delta), against the band rho * delta * epsilon.
struct MicroEstimate {
    double estimate{};
    double ci95{};       // 1.96 * binomial standard error
    double target{};     // rho * delta * epsilon
    long hits{};
    long samples{};
};
MicroEstimate micro_encounter_probability(TorusPoint q1, double phi1,
                                          const ExperimentConfig& config, double delta,
                                          long samples, std::uint64_t stream_id = 0);

// Fraction of trials with >= 2 good encounters separated by <= window
// (particle-1 time), plus the fraction with >= 1 good encounter.
struct ReencounterStats {
    double fraction_reencounter{};
    double fraction_any_good{};
    double min_good_gap{};  // smallest observed gap between consecutive goods
    long trials{};
};
ReencounterStats reencounter_fraction(const ExperimentConfig& config, double window,
                                      int workers = 0);

// Utility used by the harness and the diagnostics: static-block parallel map
// over [0, n) with deterministic output placement.
void parallel_for_indexed(long n, int workers, const std::function<void(long)>& fn);

} // namespace billiard

#endif
