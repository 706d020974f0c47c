#ifndef BILLIARD_IO_HPP
#define BILLIARD_IO_HPP

#include <cstdint>
#include <string>

#include <json.hpp>

#include "billiard/experiment.hpp"
#include "billiard/geometry.hpp"

namespace billiard::io {

using nlohmann::json;

// Shortest round-trip decimal form; identical bytes for identical doubles.
std::string format_double(double v);

// Scene file: { "scatterers": [ { "center": [x, y], "radius": r }, ... ] }.
// Schema violations (wrong shapes, non-finite numbers) throw SceneFormatError;
// geometric violations propagate RadiusError / OverlapError from build_table.
BilliardTable load_scene(const std::string& path);
BilliardTable scene_from_json(const json& j);
json scene_to_json(const BilliardTable& table);

json certificate_to_json(const HorizonCertificate& cert);

// Experiment config file:
// { "scene": path, "lambda": x, "epsilon": x, "xi": x, "T": x,
//   "trials": n, "seed": n }.  "T" may be the string "3/rho" to pin the
// horizon to 3/rho(lambda).
struct ExperimentSpec {
    std::string scene_path;
    double lambda{}, epsilon{}, xi{}, T{};
    bool T_in_units_of_rho{};
    double T_factor{};
    long trials{};
    std::uint64_t seed{};
};
ExperimentSpec load_experiment_config(const std::string& path);

struct RunManifest {
    std::string tool_version;
    std::string git_revision;
    std::string config_hash;
    std::string scene_hash;
    std::string created_utc;
};
RunManifest make_manifest(const std::string& config_path, const std::string& scene_path);
json manifest_to_json(const RunManifest& m);

std::string file_hash_hex(const std::string& path);  // FNV-1a 64 of the bytes

json results_to_json(const ExperimentConfig& config, const EnsembleResult& result,
                     const RunManifest& manifest);

void write_times_csv(const std::string& path, const EnsembleResult& result);
// Event dump for debugging: one row per epsilon-visit of one joint trial.
void write_events_csv(const std::string& path, const std::vector<EncounterVisit>& visits);
void write_cdf_csv(const std::string& path, const EnsembleResult& result, double rho);
void write_hazard_csv(const std::string& path, const EnsembleResult& result);
void write_text(const std::string& path, const std::string& content);

std::string tool_version();
std::string git_revision();

} // namespace billiard::io

#endif
