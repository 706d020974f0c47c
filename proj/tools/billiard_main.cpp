// Command-line front end: table validation, rate evaluation, orbit dumps,
// the encounter experiment, and the hyperbolicity diagnostics.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "billiard/diagnostics.hpp"
#include "billiard/encounter.hpp"
#include "billiard/errors.hpp"
#include "billiard/experiment.hpp"
#include "billiard/flow.hpp"
#include "billiard/io.hpp"
#include "billiard/rate.hpp"

namespace {

enum ExitCode { kOk = 0, kDomainVerdict = 2, kInvalidModel = 3, kIoError = 4 };

int log_level() {
    const char* v = std::getenv("BILLIARD_LOG");
    if (!v) return 1;
    const std::string s(v);
    if (s == "quiet") return 0;
    if (s == "debug") return 2;
    return 1;
}

void info(const std::string& msg) {
    if (log_level() >= 1) std::cerr << "[billiard] " << msg << "\n";
}

int cmd_validate_table(const std::string& scene_path, int cutoff,
                       const std::string& out_path) {
    billiard::BilliardTable table = billiard::io::load_scene(scene_path);
    billiard::HorizonCertificate cert;
    try {
        cert = billiard::check_finite_horizon(table, cutoff);
    } catch (const billiard::CutoffTooSmall& e) {
        std::cerr << "inconclusive: " << e.what() << "\n";
        return kDomainVerdict;
    }
    const auto j = billiard::io::certificate_to_json(cert);
    if (!out_path.empty()) billiard::io::write_text(out_path, j.dump(2) + "\n");
    std::cout << j.dump(2) << "\n";
    if (!cert.finite) {
        info("infinite horizon: corridor along (" + std::to_string(cert.corridor_p) + ","
             + std::to_string(cert.corridor_q) + ")");
        return kDomainVerdict;
    }
    info("finite horizon, tau_max <= " + billiard::io::format_double(cert.tau_max));
    return kOk;
}

int cmd_rate(double lambda, const std::string& scene_path, double area) {
    double domain_area = area;
    if (!scene_path.empty())
        domain_area = billiard::io::load_scene(scene_path).domain_area;
    const auto q = billiard::rho_quadrature(lambda, domain_area);
    const auto c = billiard::rho_closed_form(lambda, domain_area);
    std::cout << "rho_quadrature  = " << billiard::io::format_double(q.rho)
              << "  (abs err est " << billiard::io::format_double(q.abs_err_estimate) << ")\n";
    std::cout << "rho_closed_form = " << billiard::io::format_double(c.rho)
              << "  (abs err est " << billiard::io::format_double(c.abs_err_estimate) << ")\n";
    std::cout << "|D| = " << billiard::io::format_double(domain_area) << "\n";
    return kOk;
}

int cmd_simulate(const std::string& scene_path, double x, double y, double phi, double t,
                 const std::string& out_path) {
    auto table = billiard::io::load_scene(scene_path);
    billiard::check_finite_horizon(table, 60);
    if (table.horizon_certificate && !table.horizon_certificate->finite) {
        std::cerr << "scene has an open corridor; refusing to simulate\n";
        return kDomainVerdict;
    }
    const auto state = billiard::make_state(x, y, phi);
    billiard::validate_state(state, table);
    const auto orbit = billiard::flow_segments(state, t, table);
    std::ostringstream csv;
    csv << "t_start,duration,x,y,phi,hit_id\n";
    for (const auto& s : orbit.segments) {
        csv << billiard::io::format_double(s.start_time) << ','
            << billiard::io::format_double(s.duration) << ','
            << billiard::io::format_double(s.start.x) << ','
            << billiard::io::format_double(s.start.y) << ','
            << billiard::io::format_double(s.angle) << ','
            << (s.end == billiard::SegmentEnd::ScattererHit ? s.hit_id : -1) << '\n';
    }
    billiard::io::write_text(out_path, csv.str());
    info("wrote " + out_path + " (" + std::to_string(orbit.segments.size()) + " segments)");
    return kOk;
}

int cmd_experiment(const std::string& config_path, const std::string& out_dir, int workers,
                   long dump_events_trial) {
    namespace fs = std::filesystem;
    const auto spec = billiard::io::load_experiment_config(config_path);
    auto table = std::make_shared<billiard::BilliardTable>(
        billiard::io::load_scene(spec.scene_path));
    billiard::check_finite_horizon(*table, 60);
    if (!table->tau_max) {
        std::cerr << "scene has an open corridor\n";
        return kDomainVerdict;
    }

    billiard::ExperimentConfig config;
    config.table = table;
    config.lambda = spec.lambda;
    config.epsilon = spec.epsilon;
    config.xi = spec.xi;
    config.T = spec.T_in_units_of_rho
                   ? spec.T_factor
                         / billiard::rho_closed_form(spec.lambda, table->domain_area).rho
                   : spec.T;
    config.trials = spec.trials;
    config.master_seed = spec.seed;
    config.validate();

    info("running " + std::to_string(config.trials) + " trials, horizon "
         + billiard::io::format_double(config.horizon()));
    const auto result = billiard::run_ensemble(config, workers);

    fs::create_directories(out_dir);
    const auto manifest = billiard::io::make_manifest(config_path, spec.scene_path);
    const auto results = billiard::io::results_to_json(config, result, manifest);
    billiard::io::write_text((fs::path(out_dir) / "results.json").string(),
                             results.dump(2) + "\n");
    billiard::io::write_times_csv((fs::path(out_dir) / "times.csv").string(), result);
    billiard::io::write_cdf_csv((fs::path(out_dir) / "cdf.csv").string(), result,
                                result.summary.rho);
    billiard::io::write_hazard_csv((fs::path(out_dir) / "hazard.csv").string(), result);
    if (dump_events_trial >= 0 && dump_events_trial < config.trials) {
        billiard::Rng rng(config.master_seed,
                          static_cast<std::uint64_t>(dump_events_trial));
        billiard::JointState joint;
        joint.p1 = billiard::sample_state(*config.table, rng);
        joint.p2 = billiard::sample_state(*config.table, rng);
        joint.lambda = config.lambda;
        const auto visits = billiard::all_encounters(joint, config.epsilon, config.xi,
                                                     config.horizon(), *config.table);
        billiard::io::write_events_csv((fs::path(out_dir) / "events.csv").string(),
                                       visits);
    }
    std::cout << "KS(first encounter)      = "
              << billiard::io::format_double(result.summary.approach.ks_full) << "\n"
              << "KS(first good encounter) = "
              << billiard::io::format_double(result.summary.good.ks_full) << "\n"
              << "censored fraction        = "
              << billiard::io::format_double(result.summary.approach.censored_fraction)
              << " (predicted "
              << billiard::io::format_double(result.summary.approach.predicted_censored)
              << ")\n";
    return kOk;
}

std::shared_ptr<billiard::BilliardTable> load_certified(const std::string& scene_path) {
    auto table = std::make_shared<billiard::BilliardTable>(
        billiard::io::load_scene(scene_path));
    billiard::check_finite_horizon(*table, 60);
    if (!table->tau_max) throw billiard::Error("scene has an open corridor");
    return table;
}

int cmd_diagnose(const std::string& what, const std::string& scene_path,
                 const std::string& out_dir, std::uint64_t seed, int n, int samples) {
    namespace fs = std::filesystem;
    auto table = load_certified(scene_path);
    fs::create_directories(out_dir);
    billiard::io::json j;
    std::string name = what;

    if (what == "cones") {
        const auto rep = billiard::cone_invariance_scan(*table, samples, n, seed);
        j = {{"vectors", rep.vectors},
             {"collisions_each", rep.collisions_each},
             {"checks", rep.checks},
             {"violations", rep.violations},
             {"grazing_discarded", rep.grazing_discarded},
             {"worst_margin", rep.worst_margin}};
    } else if (what == "expansion") {
        const auto rep = billiard::expansion_scan(*table, samples, n, seed);
        j = {{"samples", rep.samples},
             {"n", rep.n},
             {"min_factor", rep.min_factor},
             {"min_per_step", rep.min_per_step},
             {"mean_log_per_time", rep.mean_log_per_time},
             {"discarded_grazing", rep.discarded_grazing}};
    } else if (what == "complexity") {
        const auto rep = billiard::complexity_scan(*table, n, 1e-6, samples, 24, seed);
        j = {{"n_max", rep.n_max},
             {"counts", rep.counts},
             {"L_hat", rep.l_hat},
             {"growth_exponent", rep.growth_exponent},
             {"growth_r2", rep.growth_r2},
             {"samples_per_curve", rep.samples_per_curve},
             {"curves", rep.curves},
             {"halfwidth", rep.halfwidth}};
        std::ostringstream csv;
        csv << "n,count\n";
        for (std::size_t i = 0; i < rep.counts.size(); ++i)
            csv << (i + 1) << ',' << rep.counts[i] << '\n';
        billiard::io::write_text((fs::path(out_dir) / "complexity.csv").string(), csv.str());
    } else if (what == "distortion") {
        const auto rep = billiard::distortion_scan(*table, samples, seed);
        j = {{"attempted", rep.attempted},
             {"admissible", rep.admissible},
             {"C_d_hat", rep.c_d_hat},
             {"max_abs_log_ratio", rep.max_abs_log_ratio}};
    } else if (what == "mixing-curve") {
        const auto curve = billiard::mixing_curve(*table, 12.0, 0.25, samples, seed);
        std::ostringstream csv;
        csv << "lag,autocorrelation\n";
        for (const auto& [lag, c] : curve)
            csv << billiard::io::format_double(lag) << ',' << billiard::io::format_double(c)
                << '\n';
        billiard::io::write_text((fs::path(out_dir) / "mixing_curve.csv").string(), csv.str());
        j = {{"max_lag", 12.0}, {"dlag", 0.25}, {"samples", samples}};
        name = "mixing_curve";
    } else {
        std::cerr << "unknown diagnostic: " << what << "\n";
        return kIoError;
    }
    const std::string path = (fs::path(out_dir) / (name + ".json")).string();
    billiard::io::write_text(path, j.dump(2) + "\n");
    std::cout << j.dump(2) << "\n";
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact two-particle Sinai billiard simulator and statistics harness"};
    app.require_subcommand(1);

    std::string scene_path, config_path, out_path, what;
    double lambda = 0.0, area = 1.0, x = 0.1, y = 0.1, phi = 0.0, t = 10.0;
    int cutoff = 60, workers = 0, n = 20, samples = 1000;
    long dump_events_trial = -1;
    std::uint64_t seed = 1;

    auto* validate = app.add_subcommand("validate-table", "corridor scan / horizon certificate");
    validate->add_option("--scene", scene_path)->required();
    validate->add_option("--cutoff", cutoff);
    validate->add_option("--out", out_path);

    auto* rate = app.add_subcommand("rate", "rate function rho(lambda)");
    rate->add_option("--lambda", lambda)->required();
    rate->add_option("--table,--scene", scene_path);
    rate->add_option("--area", area);

    auto* simulate = app.add_subcommand("simulate", "single-orbit CSV dump");
    simulate->add_option("--scene", scene_path)->required();
    simulate->add_option("--x", x);
    simulate->add_option("--y", y);
    simulate->add_option("--phi", phi);
    simulate->add_option("--t", t);
    simulate->add_option("--out", out_path)->required();

    auto* experiment = app.add_subcommand("experiment", "Monte Carlo encounter experiment");
    experiment->add_option("--config", config_path)->required();
    experiment->add_option("--out", out_path)->required();
    experiment->add_option("--workers", workers);
    experiment->add_option("--dump-events", dump_events_trial,
                           "write events.csv for this trial index");

    auto* diagnose = app.add_subcommand("diagnose", "hyperbolicity diagnostics");
    diagnose->add_option("what", what)
        ->required()
        ->check(CLI::IsMember({"cones", "expansion", "complexity", "distortion",
                               "mixing-curve"}));
    diagnose->add_option("--scene", scene_path)->required();
    diagnose->add_option("--out", out_path)->required();
    diagnose->add_option("--seed", seed);
    diagnose->add_option("--n", n);
    diagnose->add_option("--samples", samples);

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) return cmd_validate_table(scene_path, cutoff, out_path);
        if (rate->parsed()) return cmd_rate(lambda, scene_path, area);
        if (simulate->parsed()) return cmd_simulate(scene_path, x, y, phi, t, out_path);
        if (experiment->parsed())
            return cmd_experiment(config_path, out_path, workers, dump_events_trial);
        if (diagnose->parsed()) return cmd_diagnose(what, scene_path, out_path, seed, n, samples);
    } catch (const billiard::SceneFormatError& e) {
        std::cerr << "scene error: " << e.what() << "\n";
        return kIoError;
    } catch (const billiard::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kIoError;
    } catch (const billiard::RadiusError& e) {
        std::cerr << "invalid table: " << e.what() << "\n";
        return kInvalidModel;
    } catch (const billiard::OverlapError& e) {
        std::cerr << "invalid table: " << e.what() << "\n";
        return kInvalidModel;
    } catch (const billiard::OutOfRangeLambda& e) {
        std::cerr << "invalid parameter: " << e.what() << "\n";
        return kInvalidModel;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kIoError;
    }
    return kOk;
}
