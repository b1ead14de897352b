#pragma once

#include <vector>

#include "arbor/camera.hpp"
#include "arbor/grid.hpp"
#include "arbor/image.hpp"

namespace arbor {

/// Everything needed to replay a render for its gradient: the pose and step
/// count. Backpropagation re-marches the rays against the grid that produced
/// the output, so the grid must not change between render and backprop.
struct RenderRecipe {
    CameraPose pose;
    int steps = 128;
};

struct RenderOutput {
    Image rgb;   // 3-channel, white background composite
    Mask mask;   // 1 - exp(-sum sigma_i dt), transmittance-derived opacity
    RenderRecipe recipe;
};

/// Gradients with respect to the grid's unconstrained parameters.
/// Accumulators add component-wise, so per-worker copies merge by summation.
struct GridGrad {
    std::vector<double> density;  // d/d density_param
    std::vector<double> albedo;   // d/d albedo_param

    GridGrad() = default;
    explicit GridGrad(const DensityGrid& grid)
        : density(grid.density_param.size(), 0.0), albedo(grid.albedo_param.size(), 0.0) {}

    GridGrad& operator+=(const GridGrad& o);
    GridGrad& axpy(double a, const GridGrad& o);  // this += a * o
    double max_abs() const;
    bool finite() const;
};

/// Emission-absorption ray marching over the density grid: `steps` equal
/// samples per ray between the ray's entry and exit of the grid extent,
/// trilinear interpolation of density and albedo at each sample, composited
/// over a white background. Pure and deterministic for fixed inputs.
RenderOutput render(const DensityGrid& grid, const CameraPose& pose, int steps);

/// n renders at azimuths {0, 360/n, ...} degrees, shared elevation and the
/// default orbit radius.
std::vector<RenderOutput> render_views(const DensityGrid& grid, int n, double elevation_deg,
                                       int steps = 128, int image_width = 64,
                                       int image_height = 64);

/// Pullback of (d_rgb, d_mask) through the renderer to grid parameters.
/// d_rgb has width*height*3 entries (Image layout), d_mask width*height.
/// Either may be empty meaning all-zero. Must be called with the same grid
/// state that produced the forward pass.
GridGrad render_backprop(const DensityGrid& grid, const RenderRecipe& recipe,
                         const std::vector<double>& d_rgb, const std::vector<double>& d_mask);

}  // namespace arbor
