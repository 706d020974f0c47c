#include "billiard/io.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "billiard/errors.hpp"

#ifndef BILLIARD_GIT_REV
#define BILLIARD_GIT_REV "unknown"
#endif

namespace billiard::io {

namespace {

constexpr const char* kToolVersion = "1.0.0";

double finite_number(const json& j, const char* what) {
    if (!j.is_number())
        throw SceneFormatError(std::string(what) + " must be a number");
    const double v = j.get<double>();
    if (!std::isfinite(v))
        throw SceneFormatError(std::string(what) + " must be finite");
    return v;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

BilliardTable scene_from_json(const json& j) {
    if (!j.is_object() || !j.contains("scatterers") || !j["scatterers"].is_array()
        || j["scatterers"].empty())
        throw SceneFormatError("scene needs a non-empty 'scatterers' array");
    std::vector<Scatterer> scatterers;
    for (const auto& s : j["scatterers"]) {
        if (!s.is_object() || !s.contains("center") || !s.contains("radius")
            || !s["center"].is_array() || s["center"].size() != 2)
            throw SceneFormatError("scatterer needs 'center': [x,y] and 'radius'");
        Scatterer sc;
        sc.center.x = finite_number(s["center"][0], "center.x");
        sc.center.y = finite_number(s["center"][1], "center.y");
        sc.radius = finite_number(s["radius"], "radius");
        scatterers.push_back(sc);
    }
    return build_table(std::move(scatterers));
}

BilliardTable load_scene(const std::string& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw SceneFormatError("scene parse error: " + std::string(e.what()));
    }
    return scene_from_json(j);
}

json scene_to_json(const BilliardTable& table) {
    json arr = json::array();
    for (const auto& s : table.scatterers)
        arr.push_back({{"center", {s.center.x, s.center.y}}, {"radius", s.radius}});
    return json{{"scatterers", arr}};
}

json certificate_to_json(const HorizonCertificate& cert) {
    json j;
    j["finite"] = cert.finite;
    j["cutoff"] = cert.cutoff;
    j["directions_checked"] = cert.directions_checked;
    j["tail_criterion"] = cert.tail_criterion;
    if (cert.finite) {
        j["tau_max"] = cert.tau_max;
        j["max_needed_norm"] = cert.max_needed_norm;
        json cover = json::array();
        for (const auto& d : cert.cover) {
            cover.push_back({{"p", d.p},
                             {"q", d.q},
                             {"period", d.period},
                             {"margin", d.margin},
                             {"wedge_half_angle", d.wedge_half_angle},
                             {"flight_bound", d.flight_bound}});
        }
        j["cover"] = cover;
    } else {
        j["corridor"] = {{"p", cert.corridor_p},
                         {"q", cert.corridor_q},
                         {"width", cert.corridor_width}};
    }
    return j;
}

ExperimentSpec load_experiment_config(const std::string& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw ConfigError("config parse error: " + std::string(e.what()));
    }
    ExperimentSpec spec;
    try {
        spec.scene_path = j.at("scene").get<std::string>();
        spec.lambda = finite_number(j.at("lambda"), "lambda");
        spec.epsilon = finite_number(j.at("epsilon"), "epsilon");
        spec.xi = finite_number(j.at("xi"), "xi");
        if (j.at("T").is_string()) {
            // "<factor>/rho" pins T to factor / rho(lambda)
            const std::string t = j.at("T").get<std::string>();
            const auto slash = t.find("/rho");
            if (slash == std::string::npos)
                throw ConfigError("string T must look like '3/rho'");
            spec.T_in_units_of_rho = true;
            spec.T_factor = std::stod(t.substr(0, slash));
        } else {
            spec.T = finite_number(j.at("T"), "T");
        }
        spec.trials = j.at("trials").get<long>();
        spec.seed = j.at("seed").get<std::uint64_t>();
    } catch (const json::exception& e) {
        throw ConfigError("config schema error: " + std::string(e.what()));
    }
    return spec;
}

std::string file_hash_hex(const std::string& path) {
    const std::string bytes = read_file(path);
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

RunManifest make_manifest(const std::string& config_path, const std::string& scene_path) {
    RunManifest m;
    m.tool_version = kToolVersion;
    m.git_revision = BILLIARD_GIT_REV;
    m.config_hash = config_path.empty() ? "" : file_hash_hex(config_path);
    m.scene_hash = scene_path.empty() ? "" : file_hash_hex(scene_path);
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&tt));
    m.created_utc = buf;
    return m;
}

json manifest_to_json(const RunManifest& m) {
    return json{{"tool_version", m.tool_version},
                {"git_revision", m.git_revision},
                {"config_hash", m.config_hash},
                {"scene_hash", m.scene_hash},
                {"created_utc", m.created_utc}};
}

namespace {

json law_to_json(const LawSummary& s) {
    json hz = json::array();
    for (const auto& b : s.hazard) {
        hz.push_back({{"t_lo", b.t_lo},
                      {"t_hi", b.t_hi},
                      {"at_risk", b.at_risk},
                      {"deaths", b.deaths},
                      {"hazard", b.hazard},
                      {"low_confidence", b.low_confidence}});
    }
    return json{{"ks", s.ks_full},
                {"ks_conditional", s.ks_conditional},
                {"censored_fraction", s.censored_fraction},
                {"predicted_censored", s.predicted_censored},
                {"mle_rate", s.mle_rate},
                {"hazard_mean", s.hazard_mean},
                {"hazard_slope", s.hazard_slope},
                {"hazard_slope_se", s.hazard_slope_se},
                {"hazard_table", hz}};
}

} // namespace

json results_to_json(const ExperimentConfig& config, const EnsembleResult& result,
                     const RunManifest& manifest) {
    json j;
    j["manifest"] = manifest_to_json(manifest);
    j["config"] = {{"lambda", config.lambda}, {"epsilon", config.epsilon},
                   {"xi", config.xi},         {"T", config.T},
                   {"trials", config.trials}, {"seed", config.master_seed},
                   {"domain_area", config.table->domain_area}};
    j["rho"] = result.summary.rho;
    j["faults"] = result.summary.faults;
    j["grazing_flagged"] = result.summary.grazing_flagged;
    j["mean_visits_per_trial"] = result.summary.mean_collisions_per_trial;
    j["first_encounter"] = law_to_json(result.summary.approach);
    j["first_good_encounter"] = law_to_json(result.summary.good);
    return j;
}

void write_times_csv(const std::string& path, const EnsembleResult& result) {
    std::ostringstream out;
    out << "trial_index,scaled_time,scaled_good_time,skipped_approaches,good_count,"
           "grazing_flagged,faulted\n";
    for (const auto& o : result.outcomes) {
        out << o.trial_index << ',';
        out << (o.scaled_approach_time ? format_double(*o.scaled_approach_time) : "censored");
        out << ',';
        out << (o.scaled_time ? format_double(*o.scaled_time) : "censored");
        out << ',' << o.skipped_approaches << ',' << o.good_count_total << ','
            << (o.grazing_flagged ? 1 : 0) << ',' << (o.faulted ? 1 : 0) << '\n';
    }
    write_text(path, out.str());
}

void write_events_csv(const std::string& path, const std::vector<EncounterVisit>& visits) {
    std::ostringstream out;
    out << "s,x1,y1,x2,y2,distance,rel_angle,clearance,good\n";
    for (const auto& v : visits) {
        const auto& e = v.entry;
        out << format_double(e.time) << ',' << format_double(e.pos1.x) << ','
            << format_double(e.pos1.y) << ',' << format_double(e.pos2.x) << ','
            << format_double(e.pos2.y) << ',' << format_double(e.distance) << ','
            << format_double(e.rel_angle_mod_pi) << ','
            << format_double(e.boundary_clearance) << ',' << (e.good ? 1 : 0) << '\n';
    }
    write_text(path, out.str());
}

void write_cdf_csv(const std::string& path, const EnsembleResult& result, double rho) {
    std::ostringstream out;
    out << "t,empirical,empirical_good,theoretical\n";
    const double T = result.approach_dist.horizon;
    const int n = 500;
    for (int i = 0; i <= n; ++i) {
        const double t = T * i / n;
        out << format_double(t) << ',' << format_double(result.approach_dist.cdf(t)) << ','
            << format_double(result.good_dist.cdf(t)) << ','
            << format_double(-std::expm1(-rho * t)) << '\n';
    }
    write_text(path, out.str());
}

void write_hazard_csv(const std::string& path, const EnsembleResult& result) {
    std::ostringstream out;
    out << "law,t_lo,t_hi,at_risk,deaths,hazard,low_confidence\n";
    const auto dump = [&](const char* law, const std::vector<HazardBin>& bins) {
        for (const auto& b : bins) {
            out << law << ',' << format_double(b.t_lo) << ',' << format_double(b.t_hi) << ','
                << b.at_risk << ',' << b.deaths << ',' << format_double(b.hazard) << ','
                << (b.low_confidence ? 1 : 0) << '\n';
        }
    };
    dump("first_encounter", result.summary.approach.hazard);
    dump("first_good", result.summary.good.hazard);
    write_text(path, out.str());
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << content;
}

std::string tool_version() { return kToolVersion; }
std::string git_revision() { return BILLIARD_GIT_REV; }

} // namespace billiard::io
