#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "arbor/denoiser.hpp"
#include "arbor/grid.hpp"
#include "arbor/image.hpp"
#include "arbor/render.hpp"
#include "arbor/rng.hpp"

namespace arbor {

/// Descending noise levels; one is drawn uniformly per iteration.
struct NoiseSchedule {
    std::vector<double> sigmas;

    static NoiseSchedule geometric(double sigma_max, double sigma_min, int levels);
    double sample(Rng& rng) const;
    void validate() const;
};

/// Prior viewpoint distribution: azimuth and elevation drawn uniformly from
/// the given ranges (degrees).
struct ViewSampler {
    double azimuth_min = 0.0;
    double azimuth_max = 360.0;
    double elevation_min = -10.0;
    double elevation_max = 45.0;
};

struct ReconConfig {
    double lambda_rgb = 5.0;
    double lambda_mask = 20.0;
    double alpha = 1.0;  // 2D prior weight
    double beta = 8.0;   // 3D prior weight
    double lr = 0.001;
    int iterations = 2000;
    int paas_samples = 1;
    ViewSampler view_sampler;
    std::uint64_t rng_seed = 0;

    // Envelope / renderer geometry.
    int grid_nx = 64, grid_ny = 64, grid_nz = 64;
    Vec3 extent_min{-1.0, -1.0, 0.0};
    Vec3 extent_max{1.0, 1.0, 2.0};
    int render_steps = 128;
    double camera_radius_scale = 2.5;
    double fov_deg = 45.0;
    double init_density = 0.25;
    double init_albedo = 0.5;
    NoiseSchedule schedule = NoiseSchedule::geometric(1.0, 0.02, 50);

    void validate() const;
    CameraPose front_pose(int image_width, int image_height) const;
};

/// Adam with beta1=0.9, beta2=0.999, eps=1e-8, no weight decay.
struct Adam {
    double lr;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    std::vector<double> m, v;
    long t = 0;

    explicit Adam(double lr_, std::size_t n) : lr(lr_), m(n, 0.0), v(n, 0.0) {}
    void step(std::vector<double>& params, const std::vector<double>& grad);
};

struct RecLoss {
    double value = 0.0;
    double rgb_term = 0.0;
    double mask_term = 0.0;
    GridGrad grad;
};

/// lambda_rgb * |M(I) (.) (I - R)|^2 + lambda_mask * |M(I) - M(R)|^2, summed
/// over pixels/channels, with the pullback to grid parameters.
RecLoss loss_rec(const Image& img, const Mask& mask, const DensityGrid& grid,
                 const RenderOutput& out, double lambda_rgb, double lambda_mask);

struct PriorGrad {
    double value = 0.0;  // -log p_sigma at the rendered image
    GridGrad grad;
};

/// Renders the grid from `pose`, runs PAAS at the rendered image, and chains
/// the (negated) score through the renderer to grid parameters.
PriorGrad loss_prior_grad(const DenoiserSpec& spec, const DensityGrid& grid,
                          const CameraPose& pose, int steps, double sigma, int n_samples,
                          std::uint64_t seed);

struct TraceRow {
    int iteration = 0;
    double rec_rgb = 0.0;
    double rec_mask = 0.0;
    double prior2d = 0.0;
    double prior3d = 0.0;
    double total = 0.0;
};

struct ReconTrace {
    std::vector<TraceRow> rows;  // every 100 iterations plus the last
    std::string genus;
};

/// Adam loop on L_rec + alpha*L_2D + beta*L_3D. Each iteration samples one
/// prior viewpoint and one sigma (shared by both prior terms). Deterministic
/// for a fixed cfg.rng_seed. Throws NumericError if the loss goes non-finite.
DensityGrid reconstruct(const Image& img, const Mask& mask, const std::string& genus,
                        const DenoiserSpec& spec2d, const DenoiserSpec& spec3d,
                        const ReconConfig& cfg, ReconTrace* trace = nullptr);

}  // namespace arbor
