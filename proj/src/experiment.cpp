#include "billiard/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "billiard/errors.hpp"
#include "billiard/rate.hpp"

namespace billiard {

void ExperimentConfig::validate() const {
    if (!table) throw ConfigError("config has no table");
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw ConfigError("lambda must be in [0,1]");
    if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
    if (!(epsilon <= xi / 2.0)) throw ConfigError("epsilon must be <= xi/2");
    if (!(xi < table->tau_min / 2.0)) throw ConfigError("xi must be < tau_min/2");
    if (!(T >= 0.0)) throw ConfigError("T must be nonnegative");
    if (trials < 1) throw ConfigError("need at least one trial");
    if (!table->tau_max) throw ConfigError("table has no finite-horizon certificate");
}

ParticleState sample_state(const BilliardTable& table, Rng& rng) {
    long attempts = 0, accepted = 0;
    for (;;) {
        ++attempts;
        const double x = rng.uniform();
        const double y = rng.uniform();
        if (table.clearance({x, y}) > 0.0) {
            ++accepted;
            const double phi = rng.uniform() * 2.0 * 3.14159265358979323846;
            return make_state(x, y, phi);
        }
        if (attempts >= 10000 && accepted * 10 < attempts)
            throw RejectionStall("mu-sampling acceptance below 10% over 10^4 proposals");
    }
}

TrialOutcome run_trial(const ExperimentConfig& config, long trial_index) {
    TrialOutcome out;
    out.trial_index = trial_index;
    try {
        Rng rng(config.master_seed, static_cast<std::uint64_t>(trial_index));
        JointState joint;
        joint.p1 = sample_state(*config.table, rng);
        joint.p2 = sample_state(*config.table, rng);
        joint.lambda = config.lambda;

        const double horizon = config.horizon();
        bool before_first_good = true;
        auto stats = sweep_encounters(
            joint, config.epsilon, config.xi, horizon, *config.table,
            [&](const EncounterVisit& v) {
                ++out.visit_count;
                if (!out.first_approach_time) out.first_approach_time = v.entry.time;
                if (v.entry.good) {
                    ++out.good_count_total;
                    if (!out.first_good_time) {
                        out.first_good_time = v.entry.time;
                        before_first_good = false;
                    }
                } else if (before_first_good) {
                    ++out.skipped_approaches;
                }
                return true;  // full horizon: re-encounter stats need all visits
            });
        out.grazing_flagged = stats.grazing_flagged;
        if (out.first_approach_time)
            out.scaled_approach_time = *out.first_approach_time * config.epsilon;
        if (out.first_good_time)
            out.scaled_time = *out.first_good_time * config.epsilon;
    } catch (const std::exception& e) {
        out.faulted = true;
        out.fault = e.what();
    }
    return out;
}

void parallel_for_indexed(long n, int workers, const std::function<void(long)>& fn) {
    if (workers <= 0)
        workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
    workers = static_cast<int>(std::min<long>(workers, n));
    if (workers <= 1) {
        for (long i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([=, &fn]() {
            for (long i = w; i < n; i += workers) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

namespace {

LawSummary summarize_law(const EmpiricalDistribution& dist, double rho, double T) {
    LawSummary s;
    const auto ks = ks_statistic(dist, [rho](double t) { return exponential_cdf(rho, t); });
    s.ks_full = ks.full;
    s.ks_conditional = ks.conditional;
    s.censored_fraction = static_cast<double>(dist.censored) / dist.trials;
    s.predicted_censored = std::exp(-rho * T);
    double exposure = 0.0;
    for (double t : dist.times) exposure += t;
    exposure += static_cast<double>(dist.censored) * T;
    s.mle_rate = exposure > 0.0 ? static_cast<double>(dist.times.size()) / exposure : 0.0;
    if (T <= 0.0) return s;  // degenerate horizon: no hazard table
    s.hazard = hazard_estimate(dist, T / 60.0);
    s.hazard_mean = mean_hazard(s.hazard);
    std::vector<double> xs, ys;
    for (const auto& b : s.hazard) {
        if (b.low_confidence) continue;
        xs.push_back(0.5 * (b.t_lo + b.t_hi));
        ys.push_back(b.hazard);
    }
    if (xs.size() >= 3) {
        const auto fit = fit_line(xs, ys);
        s.hazard_slope = fit.slope;
        s.hazard_slope_se = fit.slope_se;
    }
    return s;
}

} // namespace

EnsembleResult summarize_outcomes(const ExperimentConfig& config,
                                  std::vector<TrialOutcome> outcomes) {
    EnsembleResult res;
    long faults = 0, grazing = 0;
    std::vector<double> approach, good;
    approach.reserve(outcomes.size());
    good.reserve(outcomes.size());
    long approach_censored = 0, good_censored = 0;
    double collisions = 0.0;
    for (const auto& o : outcomes) {
        if (o.faulted) {
            ++faults;
            continue;
        }
        if (o.grazing_flagged) ++grazing;
        if (o.scaled_approach_time)
            approach.push_back(*o.scaled_approach_time);
        else
            ++approach_censored;
        if (o.scaled_time)
            good.push_back(*o.scaled_time);
        else
            ++good_censored;
        collisions += static_cast<double>(o.visit_count);
    }
    const long n_ok = static_cast<long>(outcomes.size()) - faults;
    if (faults * 1000 > static_cast<long>(outcomes.size()))
        throw EnsembleFault("more than 0.1% of trials faulted");
    if (n_ok == 0) throw EnsembleFault("all trials faulted");

    res.summary.rho = rho_closed_form(config.lambda, config.table->domain_area).rho;
    res.summary.faults = faults;
    res.summary.grazing_flagged = grazing;
    res.summary.mean_collisions_per_trial = collisions / n_ok;
    res.approach_dist = make_empirical(std::move(approach), approach_censored, config.T);
    res.good_dist = make_empirical(std::move(good), good_censored, config.T);
    res.summary.approach = summarize_law(res.approach_dist, res.summary.rho, config.T);
    res.summary.good = summarize_law(res.good_dist, res.summary.rho, config.T);
    res.outcomes = std::move(outcomes);
    return res;
}

EnsembleResult run_ensemble(const ExperimentConfig& config, int workers) {
    config.validate();
    // the first-passage statistics additionally need epsilon << xi
    if (!(config.epsilon <= config.xi / 10.0))
        throw ConfigError("ensemble statistics need epsilon <= xi/10");
    std::vector<TrialOutcome> outcomes(config.trials);
    parallel_for_indexed(config.trials, workers,
                         [&](long i) { outcomes[i] = run_trial(config, i); });
    return summarize_outcomes(config, std::move(outcomes));
}

MicroEstimate micro_encounter_probability(TorusPoint q1, double phi1,
                                          const ExperimentConfig& config, double delta,
                                          long samples, std::uint64_t stream_id) {
    if (!(config.table->clearance(q1) > 2.0 * config.xi))
        throw ConfigError("micro_encounter_probability: base point clearance must exceed 2 xi");
    if (!(delta > 0.0 && delta < config.xi))
        throw ConfigError("micro_encounter_probability: need 0 < delta < xi");

    Rng rng(config.master_seed, 0x6D6963726FULL + stream_id);
    long hits = 0;
    for (long i = 0; i < samples; ++i) {
        JointState joint;
        joint.p1 = {q1, phi1};
        joint.p2 = sample_state(*config.table, rng);
        joint.lambda = config.lambda;
        const auto first = first_encounter(joint, config.epsilon, config.xi, delta,
                                           *config.table);
        if (first.event) ++hits;
    }
    MicroEstimate e;
    e.hits = hits;
    e.samples = samples;
    e.estimate = static_cast<double>(hits) / static_cast<double>(samples);
    e.ci95 = 1.96 * std::sqrt(std::max(e.estimate * (1.0 - e.estimate), 1e-300)
                              / static_cast<double>(samples));
    e.target = rho_closed_form(config.lambda, config.table->domain_area).rho * delta
               * config.epsilon;
    return e;
}

ReencounterStats reencounter_fraction(const ExperimentConfig& config, double window,
                                      int workers) {
    config.validate();
    if (!(window > config.xi && window <= 100.0))
        throw ConfigError("reencounter window must be in (xi, 100]");

    std::vector<char> has_pair(config.trials, 0), has_any(config.trials, 0);
    std::vector<double> min_gap(config.trials, std::numeric_limits<double>::infinity());
    parallel_for_indexed(config.trials, workers, [&](long i) {
        Rng rng(config.master_seed, static_cast<std::uint64_t>(i));
        JointState joint;
        joint.p1 = sample_state(*config.table, rng);
        joint.p2 = sample_state(*config.table, rng);
        joint.lambda = config.lambda;
        double last_good = -1.0;
        sweep_encounters(joint, config.epsilon, config.xi, config.horizon(), *config.table,
                         [&](const EncounterVisit& v) {
                             if (!v.entry.good) return true;
                             has_any[i] = 1;
                             if (last_good >= 0.0) {
                                 const double gap = v.entry.time - last_good;
                                 min_gap[i] = std::min(min_gap[i], gap);
                                 if (gap <= window) has_pair[i] = 1;
                             }
                             last_good = v.entry.time;
                             return true;
                         });
    });
    ReencounterStats r;
    r.trials = config.trials;
    r.fraction_reencounter = static_cast<double>(std::count(has_pair.begin(), has_pair.end(), 1))
                             / config.trials;
    r.fraction_any_good = static_cast<double>(std::count(has_any.begin(), has_any.end(), 1))
                          / config.trials;
    r.min_good_gap = *std::min_element(min_gap.begin(), min_gap.end());
    return r;
}

} // namespace billiard
