#include "arbor/distill.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "arbor/errors.hpp"

namespace arbor {

NoiseSchedule NoiseSchedule::geometric(double sigma_max, double sigma_min, int levels) {
    if (!(sigma_max > 0.0 && sigma_min > 0.0 && sigma_max >= sigma_min) || levels < 1)
        throw std::invalid_argument("NoiseSchedule: bad geometric parameters");
    NoiseSchedule s;
    s.sigmas.resize(levels);
    if (levels == 1) {
        s.sigmas[0] = sigma_max;
        return s;
    }
    const double ratio = std::pow(sigma_min / sigma_max, 1.0 / (levels - 1));
    double v = sigma_max;
    for (int i = 0; i < levels; ++i) {
        s.sigmas[i] = v;
        v *= ratio;
    }
    return s;
}

double NoiseSchedule::sample(Rng& rng) const {
    validate();
    std::uniform_int_distribution<std::size_t> pick(0, sigmas.size() - 1);
    return sigmas[pick(rng)];
}

void NoiseSchedule::validate() const {
    if (sigmas.empty()) throw std::invalid_argument("NoiseSchedule: empty");
    double prev = std::numeric_limits<double>::infinity();
    for (double s : sigmas) {
        if (!(s > 0.0) || !std::isfinite(s))
            throw std::invalid_argument("NoiseSchedule: sigmas must be positive and finite");
        if (s > prev) throw std::invalid_argument("NoiseSchedule: sigmas must be descending");
        prev = s;
    }
}

void ReconConfig::validate() const {
    if (lambda_rgb < 0.0 || lambda_mask < 0.0 || alpha < 0.0 || beta < 0.0)
        throw std::invalid_argument("ReconConfig: weights must be >= 0");
    if (iterations < 1) throw std::invalid_argument("ReconConfig: iterations must be >= 1");
    if (paas_samples < 1) throw std::invalid_argument("ReconConfig: paas_samples must be >= 1");
    if (!(lr > 0.0)) throw std::invalid_argument("ReconConfig: lr must be > 0");
    if (grid_nx < 2 || grid_ny < 2 || grid_nz < 2)
        throw std::invalid_argument("ReconConfig: grid resolution must be >= 2");
    if (render_steps < 2) throw std::invalid_argument("ReconConfig: render_steps must be >= 2");
    schedule.validate();
}

CameraPose ReconConfig::front_pose(int image_width, int image_height) const {
    CameraPose pose;
    const Vec3 size = extent_max - extent_min;
    pose.radius = camera_radius_scale * std::max(size.x, std::max(size.y, size.z));
    pose.fov_deg = fov_deg;
    pose.image_width = image_width;
    pose.image_height = image_height;
    return pose;
}

void Adam::step(std::vector<double>& params, const std::vector<double>& grad) {
    ++t;
    const double bc1 = 1.0 - std::pow(beta1, t);
    const double bc2 = 1.0 - std::pow(beta2, t);
    for (std::size_t i = 0; i < params.size(); ++i) {
        m[i] = beta1 * m[i] + (1.0 - beta1) * grad[i];
        v[i] = beta2 * v[i] + (1.0 - beta2) * grad[i] * grad[i];
        const double mhat = m[i] / bc1;
        const double vhat = v[i] / bc2;
        params[i] -= lr * mhat / (std::sqrt(vhat) + eps);
    }
}

RecLoss loss_rec(const Image& img, const Mask& mask, const DensityGrid& grid,
                 const RenderOutput& out, double lambda_rgb, double lambda_mask) {
    if (img.width != out.rgb.width || img.height != out.rgb.height ||
        img.channels != out.rgb.channels)
        throw std::invalid_argument("loss_rec: image/render dimension mismatch");
    if (mask.width != img.width || mask.height != img.height)
        throw std::invalid_argument("loss_rec: mask/image dimension mismatch");

    const std::size_t npix = static_cast<std::size_t>(img.width) * img.height;
    std::vector<double> d_rgb(npix * 3, 0.0);
    std::vector<double> d_mask(npix, 0.0);

    double rgb_sq = 0.0, mask_sq = 0.0;
    for (std::size_t p = 0; p < npix; ++p) {
        const double m = mask.values[p];
        for (int c = 0; c < 3; ++c) {
            const double diff = m * (img.pixels[p * 3 + c] - out.rgb.pixels[p * 3 + c]);
            rgb_sq += diff * diff;
            d_rgb[p * 3 + c] = lambda_rgb * 2.0 * m * m *
                               (out.rgb.pixels[p * 3 + c] - img.pixels[p * 3 + c]);
        }
        const double mdiff = m - out.mask.values[p];
        mask_sq += mdiff * mdiff;
        d_mask[p] = lambda_mask * 2.0 * (out.mask.values[p] - m);
    }

    RecLoss loss;
    loss.rgb_term = lambda_rgb * rgb_sq;
    loss.mask_term = lambda_mask * mask_sq;
    loss.value = loss.rgb_term + loss.mask_term;
    loss.grad = render_backprop(grid, out.recipe, d_rgb, d_mask);
    return loss;
}

PriorGrad loss_prior_grad(const DenoiserSpec& spec, const DensityGrid& grid,
                          const CameraPose& pose, int steps, double sigma, int n_samples,
                          std::uint64_t seed) {
    const RenderOutput out = render(grid, pose, steps);
    const std::vector<double>& x = out.rgb.pixels;
    std::vector<double> g = paas(spec, x, sigma, n_samples, seed);
    // L = -log p_sigma, so the pixel gradient is the negated score estimate.
    for (double& v : g) v = -v;
    PriorGrad result;
    result.value = -log_density_smoothed(spec, x, sigma);
    result.grad = render_backprop(grid, out.recipe, g, {});
    return result;
}

DensityGrid reconstruct(const Image& img, const Mask& mask, const std::string& genus,
                        const DenoiserSpec& spec2d, const DenoiserSpec& spec3d,
                        const ReconConfig& cfg, ReconTrace* trace) {
    cfg.validate();
    if (img.channels != 3)
        throw std::invalid_argument("reconstruct: 3-channel image required (expand grayscale)");
    if (mask.width != img.width || mask.height != img.height)
        throw std::invalid_argument("reconstruct: mask/image dimension mismatch");

    DensityGrid grid(cfg.grid_nx, cfg.grid_ny, cfg.grid_nz, cfg.extent_min, cfg.extent_max,
                     cfg.init_density, cfg.init_albedo);
    const CameraPose front = cfg.front_pose(img.width, img.height);

    const bool use_2d = cfg.alpha > 0.0;
    const bool use_3d = cfg.beta > 0.0;
    if (use_2d) spec2d.validate();
    if (use_3d) spec3d.validate();

    Adam adam_density(cfg.lr, grid.density_param.size());
    Adam adam_albedo(cfg.lr, grid.albedo_param.size());

    Rng view_rng(derive_seed(cfg.rng_seed, "view"));
    Rng sigma_rng(derive_seed(cfg.rng_seed, "sigma"));
    std::uniform_real_distribution<double> azimuth_dist(cfg.view_sampler.azimuth_min,
                                                        cfg.view_sampler.azimuth_max);
    std::uniform_real_distribution<double> elevation_dist(cfg.view_sampler.elevation_min,
                                                          cfg.view_sampler.elevation_max);

    if (trace) {
        trace->rows.clear();
        trace->genus = genus;
    }

    for (int iter = 0; iter < cfg.iterations; ++iter) {
        const RenderOutput out = render(grid, front, cfg.render_steps);
        RecLoss rec = loss_rec(img, mask, grid, out, cfg.lambda_rgb, cfg.lambda_mask);

        GridGrad grad = std::move(rec.grad);
        double prior2d_value = 0.0, prior3d_value = 0.0;
        if (use_2d || use_3d) {
            CameraPose prior_pose = front;
            prior_pose.azimuth_deg = azimuth_dist(view_rng);
            prior_pose.elevation_deg = elevation_dist(view_rng);
            const double sigma = cfg.schedule.sample(sigma_rng);
            if (use_2d) {
                const PriorGrad p = loss_prior_grad(spec2d, grid, prior_pose, cfg.render_steps,
                                                    sigma, cfg.paas_samples,
                                                    derive_seed(cfg.rng_seed, "paas2d", iter));
                grad.axpy(cfg.alpha, p.grad);
                prior2d_value = p.value;
            }
            if (use_3d) {
                const PriorGrad p = loss_prior_grad(spec3d, grid, prior_pose, cfg.render_steps,
                                                    sigma, cfg.paas_samples,
                                                    derive_seed(cfg.rng_seed, "paas3d", iter));
                grad.axpy(cfg.beta, p.grad);
                prior3d_value = p.value;
            }
        }

        const double total =
            rec.value + cfg.alpha * prior2d_value + cfg.beta * prior3d_value;
        if (!std::isfinite(total)) {
            std::ostringstream msg;
            msg << "reconstruct: non-finite loss at iteration " << iter
                << " (rec_rgb=" << rec.rgb_term << ", rec_mask=" << rec.mask_term
                << ", prior2d=" << prior2d_value << ", prior3d=" << prior3d_value << ")";
            throw NumericError(msg.str());
        }

        if (trace && (iter % 100 == 0 || iter == cfg.iterations - 1)) {
            trace->rows.push_back(
                {iter, rec.rgb_term, rec.mask_term, prior2d_value, prior3d_value, total});
        }

        adam_density.step(grid.density_param, grad.density);
        adam_albedo.step(grid.albedo_param, grad.albedo);
    }
    return grid;
}

}  // namespace arbor
