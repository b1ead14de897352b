#include "arbor/config.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace arbor {

namespace {

std::vector<double> number_or_array(const nlohmann::json& v) {
    if (v.is_number()) return {v.get<double>()};
    std::vector<double> out;
    for (const auto& e : v) out.push_back(e.get<double>());
    if (out.empty()) throw std::invalid_argument("config: empty array value");
    return out;
}

Vec3 vec3_from_json(const nlohmann::json& v) {
    if (!v.is_array() || v.size() != 3)
        throw std::invalid_argument("config: expected [x,y,z] array");
    return {v.at(0).get<double>(), v.at(1).get<double>(), v.at(2).get<double>()};
}

MixtureComponent component_from_json(const nlohmann::json& doc, double weight) {
    MixtureComponent c;
    c.weight = weight;
    if (doc.contains("mean")) c.mean = number_or_array(doc.at("mean"));
    std::vector<double> stddev{1.0};
    if (doc.contains("stddev")) stddev = number_or_array(doc.at("stddev"));
    c.var.clear();
    for (double s : stddev) c.var.push_back(s * s);
    return c;
}

GenusParams genus_from_json(const std::string& name, const nlohmann::json& doc) {
    const auto& presets = genus_presets();
    GenusParams p = presets.count(name) ? presets.at(name) : GenusParams{};
    p.name = name;
    if (doc.contains("perception_radius")) p.perception_radius = doc.at("perception_radius");
    if (doc.contains("perception_angle")) p.perception_angle = doc.at("perception_angle");
    if (doc.contains("kill_distance")) p.kill_distance = doc.at("kill_distance");
    if (doc.contains("internode_length")) p.internode_length = doc.at("internode_length");
    if (doc.contains("branching_angle")) p.branching_angle = doc.at("branching_angle");
    if (doc.contains("pipe_exponent")) p.pipe_exponent = doc.at("pipe_exponent");
    if (doc.contains("tip_radius")) p.tip_radius = doc.at("tip_radius");
    if (doc.contains("tropism")) p.tropism = vec3_from_json(doc.at("tropism"));
    if (doc.contains("max_steps")) p.max_steps = doc.at("max_steps");
    p.validate();
    return p;
}

nlohmann::json genus_to_json(const GenusParams& p) {
    return {{"perception_radius", p.perception_radius},
            {"perception_angle", p.perception_angle},
            {"kill_distance", p.kill_distance},
            {"internode_length", p.internode_length},
            {"branching_angle", p.branching_angle},
            {"pipe_exponent", p.pipe_exponent},
            {"tip_radius", p.tip_radius},
            {"tropism", {p.tropism.x, p.tropism.y, p.tropism.z}},
            {"max_steps", p.max_steps}};
}

}  // namespace

DenoiserSpec denoiser_from_json(const nlohmann::json& doc) {
    DenoiserSpec spec;
    const std::string kind = doc.value("kind", std::string("analytic-gaussian"));
    if (kind == "analytic-gaussian") {
        spec.kind = DenoiserKind::AnalyticGaussian;
        spec.components = {component_from_json(doc, 1.0)};
    } else if (kind == "analytic-mixture") {
        spec.kind = DenoiserKind::AnalyticMixture;
        spec.components.clear();
        for (const auto& comp : doc.at("components"))
            spec.components.push_back(component_from_json(comp, comp.value("weight", 1.0)));
    } else if (kind == "external-table") {
        spec.kind = DenoiserKind::ExternalTable;
        spec.table_path = doc.value("table", std::string{});
    } else {
        throw std::invalid_argument("config: unknown denoiser kind: " + kind);
    }
    if (doc.contains("genus")) spec.genus = doc.at("genus").get<std::string>();
    spec.validate();
    return spec;
}

nlohmann::json denoiser_to_json(const DenoiserSpec& spec) {
    nlohmann::json doc;
    switch (spec.kind) {
        case DenoiserKind::AnalyticGaussian: {
            doc["kind"] = "analytic-gaussian";
            const auto& c = spec.components.at(0);
            doc["mean"] = c.mean.size() == 1 ? nlohmann::json(c.mean[0]) : nlohmann::json(c.mean);
            std::vector<double> stddev;
            for (double v : c.var) stddev.push_back(std::sqrt(v));
            doc["stddev"] = stddev.size() == 1 ? nlohmann::json(stddev[0]) : nlohmann::json(stddev);
            break;
        }
        case DenoiserKind::AnalyticMixture: {
            doc["kind"] = "analytic-mixture";
            nlohmann::json comps = nlohmann::json::array();
            for (const auto& c : spec.components) {
                nlohmann::json jc;
                jc["weight"] = c.weight;
                jc["mean"] = c.mean.size() == 1 ? nlohmann::json(c.mean[0]) : nlohmann::json(c.mean);
                std::vector<double> stddev;
                for (double v : c.var) stddev.push_back(std::sqrt(v));
                jc["stddev"] =
                    stddev.size() == 1 ? nlohmann::json(stddev[0]) : nlohmann::json(stddev);
                comps.push_back(jc);
            }
            doc["components"] = comps;
            break;
        }
        case DenoiserKind::ExternalTable:
            doc["kind"] = "external-table";
            doc["table"] = spec.table_path;
            break;
    }
    if (spec.genus) doc["genus"] = *spec.genus;
    return doc;
}

Obstacle obstacle_from_json(const nlohmann::json& doc) {
    const std::string kind = doc.at("kind").get<std::string>();
    if (kind == "box")
        return Obstacle::box(vec3_from_json(doc.at("min")), vec3_from_json(doc.at("max")));
    if (kind == "wall")
        return Obstacle::wall(vec3_from_json(doc.at("normal")), doc.at("offset").get<double>());
    if (kind == "envelope") {
        auto vol = std::make_shared<OccupancyVolume>(
            load_occupancy(doc.at("path").get<std::string>()));
        return Obstacle::foreign_envelope(std::move(vol));
    }
    throw std::invalid_argument("config: unknown obstacle kind: " + kind);
}

std::vector<Obstacle> obstacles_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("obstacles: cannot open " + path);
    nlohmann::json doc;
    in >> doc;
    std::vector<Obstacle> obstacles;
    for (const auto& o : doc) obstacles.push_back(obstacle_from_json(o));
    return obstacles;
}

PipelineConfig PipelineConfig::defaults() {
    PipelineConfig cfg;
    cfg.priors_2d["default"] = gaussian_spec(0.85, 0.4);
    cfg.prior_3d = gaussian_spec(0.7, 0.5);
    cfg.genus_table = genus_presets();
    return cfg;
}

PipelineConfig PipelineConfig::from_json(const nlohmann::json& doc) {
    PipelineConfig cfg = defaults();
    if (doc.contains("seed")) cfg.seed = doc.at("seed").get<std::uint64_t>();

    if (doc.contains("recon")) {
        const auto& r = doc.at("recon");
        auto& rc = cfg.recon;
        if (r.contains("lambda_rgb")) rc.lambda_rgb = r.at("lambda_rgb");
        if (r.contains("lambda_mask")) rc.lambda_mask = r.at("lambda_mask");
        if (r.contains("alpha")) rc.alpha = r.at("alpha");
        if (r.contains("beta")) rc.beta = r.at("beta");
        if (r.contains("lr")) rc.lr = r.at("lr");
        if (r.contains("iterations")) rc.iterations = r.at("iterations");
        if (r.contains("paas_samples")) rc.paas_samples = r.at("paas_samples");
        if (r.contains("grid_resolution")) {
            const auto& g = r.at("grid_resolution");
            if (g.is_number()) {
                rc.grid_nx = rc.grid_ny = rc.grid_nz = g.get<int>();
            } else {
                rc.grid_nx = g.at(0);
                rc.grid_ny = g.at(1);
                rc.grid_nz = g.at(2);
            }
        }
        if (r.contains("extent_min")) rc.extent_min = vec3_from_json(r.at("extent_min"));
        if (r.contains("extent_max")) rc.extent_max = vec3_from_json(r.at("extent_max"));
        if (r.contains("render_steps")) rc.render_steps = r.at("render_steps");
        if (r.contains("camera_radius_scale")) rc.camera_radius_scale = r.at("camera_radius_scale");
        if (r.contains("fov_deg")) rc.fov_deg = r.at("fov_deg");
        if (r.contains("init_density")) rc.init_density = r.at("init_density");
        if (r.contains("init_albedo")) rc.init_albedo = r.at("init_albedo");
        const double smax = r.value("sigma_max", 1.0);
        const double smin = r.value("sigma_min", 0.02);
        const int levels = r.value("sigma_levels", 50);
        rc.schedule = NoiseSchedule::geometric(smax, smin, levels);
        if (r.contains("azimuth_range")) {
            rc.view_sampler.azimuth_min = r.at("azimuth_range").at(0);
            rc.view_sampler.azimuth_max = r.at("azimuth_range").at(1);
        }
        if (r.contains("elevation_range")) {
            rc.view_sampler.elevation_min = r.at("elevation_range").at(0);
            rc.view_sampler.elevation_max = r.at("elevation_range").at(1);
        }
    }

    if (doc.contains("priors")) {
        const auto& p = doc.at("priors");
        if (p.contains("2d")) {
            cfg.priors_2d.clear();
            for (const auto& [genus, spec] : p.at("2d").items())
                cfg.priors_2d[genus] = denoiser_from_json(spec);
            if (!cfg.priors_2d.count("default"))
                cfg.priors_2d["default"] = gaussian_spec(0.85, 0.4);
        }
        if (p.contains("3d")) cfg.prior_3d = denoiser_from_json(p.at("3d"));
    }

    if (doc.contains("envelope")) {
        const auto& e = doc.at("envelope");
        if (e.contains("tau")) cfg.tau = e.at("tau");
        if (e.contains("marker_density")) cfg.marker_density = e.at("marker_density");
    }

    if (doc.contains("genus_table"))
        for (const auto& [name, params] : doc.at("genus_table").items())
            cfg.genus_table[name] = genus_from_json(name, params);

    if (doc.contains("phenotype")) {
        const auto& ph = doc.at("phenotype");
        if (ph.contains("breast_height")) cfg.breast_height = ph.at("breast_height");
        if (ph.contains("ground_res")) cfg.ground_res = ph.at("ground_res");
        if (ph.contains("sun_direction")) cfg.sun_direction = vec3_from_json(ph.at("sun_direction"));
        if (ph.contains("leaf_density")) cfg.leaf_density = ph.at("leaf_density");
        if (ph.contains("leaf_radius")) cfg.leaf_radius = ph.at("leaf_radius");
    }

    if (doc.contains("metrics")) {
        const auto& m = doc.at("metrics");
        if (m.contains("sample_count")) cfg.metric_sample_count = m.at("sample_count");
        if (m.contains("normalize")) cfg.metric_normalize = m.at("normalize");
    }
    return cfg;
}

PipelineConfig PipelineConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    nlohmann::json doc;
    in >> doc;
    return from_json(doc);
}

nlohmann::json PipelineConfig::to_json() const {
    nlohmann::json doc;
    doc["seed"] = seed;
    nlohmann::json r;
    r["lambda_rgb"] = recon.lambda_rgb;
    r["lambda_mask"] = recon.lambda_mask;
    r["alpha"] = recon.alpha;
    r["beta"] = recon.beta;
    r["lr"] = recon.lr;
    r["iterations"] = recon.iterations;
    r["paas_samples"] = recon.paas_samples;
    r["grid_resolution"] = {recon.grid_nx, recon.grid_ny, recon.grid_nz};
    r["extent_min"] = {recon.extent_min.x, recon.extent_min.y, recon.extent_min.z};
    r["extent_max"] = {recon.extent_max.x, recon.extent_max.y, recon.extent_max.z};
    r["render_steps"] = recon.render_steps;
    r["camera_radius_scale"] = recon.camera_radius_scale;
    r["fov_deg"] = recon.fov_deg;
    r["init_density"] = recon.init_density;
    r["init_albedo"] = recon.init_albedo;
    r["sigma_schedule"] = recon.schedule.sigmas;
    r["azimuth_range"] = {recon.view_sampler.azimuth_min, recon.view_sampler.azimuth_max};
    r["elevation_range"] = {recon.view_sampler.elevation_min, recon.view_sampler.elevation_max};
    doc["recon"] = r;

    nlohmann::json p2d;
    for (const auto& [genus, spec] : priors_2d) p2d[genus] = denoiser_to_json(spec);
    doc["priors"] = {{"2d", p2d}, {"3d", denoiser_to_json(prior_3d)}};

    doc["envelope"] = {{"tau", tau}, {"marker_density", marker_density}};

    nlohmann::json table;
    for (const auto& [name, params] : genus_table) table[name] = genus_to_json(params);
    doc["genus_table"] = table;

    doc["phenotype"] = {{"breast_height", breast_height},
                        {"ground_res", ground_res},
                        {"sun_direction", {sun_direction.x, sun_direction.y, sun_direction.z}},
                        {"leaf_density", leaf_density},
                        {"leaf_radius", leaf_radius}};
    doc["metrics"] = {{"sample_count", metric_sample_count}, {"normalize", metric_normalize}};
    return doc;
}

const DenoiserSpec& PipelineConfig::prior_2d_for(const std::string& genus) const {
    const auto it = priors_2d.find(genus);
    if (it != priors_2d.end()) return it->second;
    const auto def = priors_2d.find("default");
    if (def != priors_2d.end()) return def->second;
    throw std::invalid_argument("config: no 2D prior for genus " + genus + " and no default");
}

GenusParams PipelineConfig::genus(const std::string& name) const {
    const auto it = genus_table.find(name);
    if (it == genus_table.end()) throw std::invalid_argument("unknown genus: " + name);
    return it->second;
}

}  // namespace arbor
