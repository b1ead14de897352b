#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "arbor/denoiser.hpp"
#include "arbor/distill.hpp"
#include "arbor/growth.hpp"
#include "arbor/vec3.hpp"

namespace arbor {

/// One JSON document configures the whole pipeline; CLI flags override
/// individual fields. Unknown genera fall back to the preset table.
struct PipelineConfig {
    std::uint64_t seed = 1;
    ReconConfig recon;

    // Priors: 2D specs keyed by genus (with a "default" entry), one
    // genus-agnostic 3D spec.
    std::map<std::string, DenoiserSpec> priors_2d;
    DenoiserSpec prior_3d;

    // Envelope.
    double tau = 0.0;  // <= 0 selects the automatic percentile rule
    double marker_density = 4000.0;

    // Growth: preset genus table plus config overrides.
    std::map<std::string, GenusParams> genus_table;

    // Phenotype.
    double breast_height = 1.37;
    double ground_res = 0.02;
    Vec3 sun_direction{0.3, 0.0, -0.95};
    double leaf_density = 25.0;  // leaves per meter of terminal branch
    double leaf_radius = 0.06;

    // Metrics.
    int metric_sample_count = 16384;
    bool metric_normalize = true;

    static PipelineConfig defaults();
    static PipelineConfig from_json(const nlohmann::json& doc);
    static PipelineConfig from_file(const std::string& path);
    nlohmann::json to_json() const;

    const DenoiserSpec& prior_2d_for(const std::string& genus) const;
    GenusParams genus(const std::string& name) const;  // throws on unknown
};

DenoiserSpec denoiser_from_json(const nlohmann::json& doc);
nlohmann::json denoiser_to_json(const DenoiserSpec& spec);

Obstacle obstacle_from_json(const nlohmann::json& doc);
std::vector<Obstacle> obstacles_from_file(const std::string& path);

}  // namespace arbor
