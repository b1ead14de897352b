#include "arbor/render.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace arbor {

GridGrad& GridGrad::operator+=(const GridGrad& o) {
    for (std::size_t i = 0; i < density.size(); ++i) density[i] += o.density[i];
    for (std::size_t i = 0; i < albedo.size(); ++i) albedo[i] += o.albedo[i];
    return *this;
}

GridGrad& GridGrad::axpy(double a, const GridGrad& o) {
    for (std::size_t i = 0; i < density.size(); ++i) density[i] += a * o.density[i];
    for (std::size_t i = 0; i < albedo.size(); ++i) albedo[i] += a * o.albedo[i];
    return *this;
}

double GridGrad::max_abs() const {
    double m = 0.0;
    for (double v : density) m = std::max(m, std::abs(v));
    for (double v : albedo) m = std::max(m, std::abs(v));
    return m;
}

bool GridGrad::finite() const {
    for (double v : density)
        if (!std::isfinite(v)) return false;
    for (double v : albedo)
        if (!std::isfinite(v)) return false;
    return true;
}

namespace {

struct TrilinearStencil {
    std::size_t idx[8];
    double w[8];
};

struct AxisSample {
    int i0, i1;
    double f;
};

inline AxisSample axis_sample(double coord, double origin, double cell, int n) {
    double u = (coord - origin) / cell - 0.5;
    if (u < 0.0) u = 0.0;
    const double umax = static_cast<double>(n - 1);
    if (u > umax) u = umax;
    int i0 = static_cast<int>(u);
    if (i0 > n - 2) i0 = n > 1 ? n - 2 : 0;
    const int i1 = std::min(i0 + 1, n - 1);
    return {i0, i1, u - i0};
}

inline TrilinearStencil trilinear_stencil(const DensityGrid& g, const Vec3& p) {
    const Vec3 vs = g.voxel_size();
    const AxisSample sx = axis_sample(p.x, g.extent_min.x, vs.x, g.nx);
    const AxisSample sy = axis_sample(p.y, g.extent_min.y, vs.y, g.ny);
    const AxisSample sz = axis_sample(p.z, g.extent_min.z, vs.z, g.nz);
    TrilinearStencil st;
    const double wx[2] = {1.0 - sx.f, sx.f};
    const double wy[2] = {1.0 - sy.f, sy.f};
    const double wz[2] = {1.0 - sz.f, sz.f};
    const int ix[2] = {sx.i0, sx.i1};
    const int iy[2] = {sy.i0, sy.i1};
    const int iz[2] = {sz.i0, sz.i1};
    int k = 0;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c) {
                st.idx[k] = g.voxel_index(ix[c], iy[b], iz[a]);
                st.w[k] = wx[c] * wy[b] * wz[a];
                ++k;
            }
    return st;
}

inline double sample_density(const DensityGrid& g, const TrilinearStencil& st) {
    double v = 0.0;
    for (int k = 0; k < 8; ++k) v += st.w[k] * softplus(g.density_param[st.idx[k]]);
    return v;
}

inline void sample_albedo(const DensityGrid& g, const TrilinearStencil& st, double out[3]) {
    out[0] = out[1] = out[2] = 0.0;
    for (int k = 0; k < 8; ++k) {
        const std::size_t base = st.idx[k] * 3;
        out[0] += st.w[k] * logistic(g.albedo_param[base + 0]);
        out[1] += st.w[k] * logistic(g.albedo_param[base + 1]);
        out[2] += st.w[k] * logistic(g.albedo_param[base + 2]);
    }
}

struct RaySpan {
    double t0, t1;
    bool hit;
};

RaySpan intersect_box(const Vec3& o, const Vec3& d, const Vec3& bmin, const Vec3& bmax) {
    double t0 = 0.0, t1 = std::numeric_limits<double>::infinity();
    const double os[3] = {o.x, o.y, o.z};
    const double ds[3] = {d.x, d.y, d.z};
    const double lo[3] = {bmin.x, bmin.y, bmin.z};
    const double hi[3] = {bmax.x, bmax.y, bmax.z};
    for (int a = 0; a < 3; ++a) {
        if (std::abs(ds[a]) < 1e-15) {
            if (os[a] < lo[a] || os[a] > hi[a]) return {0.0, 0.0, false};
            continue;
        }
        double ta = (lo[a] - os[a]) / ds[a];
        double tb = (hi[a] - os[a]) / ds[a];
        if (ta > tb) std::swap(ta, tb);
        t0 = std::max(t0, ta);
        t1 = std::min(t1, tb);
    }
    return {t0, t1, t1 > t0};
}

void check_pose(const DensityGrid& grid, const CameraFrame& frame) {
    if (grid.contains(frame.origin))
        throw std::invalid_argument("render: camera radius places camera inside grid extent");
}

}  // namespace

RenderOutput render(const DensityGrid& grid, const CameraPose& pose, int steps) {
    if (steps < 2) throw std::invalid_argument("render: steps must be >= 2");
    const CameraFrame frame = make_camera_frame(pose, grid.center());
    check_pose(grid, frame);

    const int w = pose.image_width, h = pose.image_height;
    RenderOutput out;
    out.rgb = Image(w, h, 3, 1.0);
    out.mask = Mask(w, h, 0.0);
    out.recipe = {pose, steps};

    for (int py = 0; py < h; ++py) {
        for (int px = 0; px < w; ++px) {
            const Vec3 dir = pixel_ray_direction(frame, px, py, w, h);
            const RaySpan span = intersect_box(frame.origin, dir, grid.extent_min, grid.extent_max);
            if (!span.hit) continue;  // white background, zero opacity
            const double dt = (span.t1 - span.t0) / steps;
            double T = 1.0;
            double rgb[3] = {0.0, 0.0, 0.0};
            for (int i = 0; i < steps; ++i) {
                const double t = span.t0 + (i + 0.5) * dt;
                const Vec3 p = frame.origin + dir * t;
                const TrilinearStencil st = trilinear_stencil(grid, p);
                const double sigma = sample_density(grid, st);
                double c[3];
                sample_albedo(grid, st, c);
                const double e = std::exp(-sigma * dt);
                const double wgt = T * (1.0 - e);
                rgb[0] += wgt * c[0];
                rgb[1] += wgt * c[1];
                rgb[2] += wgt * c[2];
                T *= e;
            }
            out.rgb.at(px, py, 0) = rgb[0] + T;  // white background
            out.rgb.at(px, py, 1) = rgb[1] + T;
            out.rgb.at(px, py, 2) = rgb[2] + T;
            out.mask.at(px, py) = 1.0 - T;
        }
    }
    return out;
}

std::vector<RenderOutput> render_views(const DensityGrid& grid, int n, double elevation_deg,
                                       int steps, int image_width, int image_height) {
    if (n < 1) throw std::invalid_argument("render_views: n must be >= 1");
    std::vector<RenderOutput> views;
    views.reserve(n);
    CameraPose pose = default_front_pose(grid, image_width, image_height);
    pose.elevation_deg = elevation_deg;
    for (int k = 0; k < n; ++k) {
        pose.azimuth_deg = 360.0 * k / n;
        views.push_back(render(grid, pose, steps));
    }
    return views;
}

GridGrad render_backprop(const DensityGrid& grid, const RenderRecipe& recipe,
                         const std::vector<double>& d_rgb, const std::vector<double>& d_mask) {
    const CameraPose& pose = recipe.pose;
    const int steps = recipe.steps;
    if (steps < 2) throw std::invalid_argument("render_backprop: steps must be >= 2");
    const int w = pose.image_width, h = pose.image_height;
    const std::size_t npix = static_cast<std::size_t>(w) * h;
    if (!d_rgb.empty() && d_rgb.size() != npix * 3)
        throw std::invalid_argument("render_backprop: d_rgb size mismatch");
    if (!d_mask.empty() && d_mask.size() != npix)
        throw std::invalid_argument("render_backprop: d_mask size mismatch");

    const CameraFrame frame = make_camera_frame(pose, grid.center());
    check_pose(grid, frame);

    GridGrad grad(grid);
    // Per-ray scratch, reused across pixels.
    std::vector<double> e_i(steps), T_i(steps), c_i(static_cast<std::size_t>(steps) * 3);

    for (int py = 0; py < h; ++py) {
        for (int px = 0; px < w; ++px) {
            const std::size_t pix = static_cast<std::size_t>(py) * w + px;
            double g_rgb[3] = {0.0, 0.0, 0.0};
            if (!d_rgb.empty()) {
                g_rgb[0] = d_rgb[pix * 3 + 0];
                g_rgb[1] = d_rgb[pix * 3 + 1];
                g_rgb[2] = d_rgb[pix * 3 + 2];
            }
            const double g_m = d_mask.empty() ? 0.0 : d_mask[pix];
            if (g_rgb[0] == 0.0 && g_rgb[1] == 0.0 && g_rgb[2] == 0.0 && g_m == 0.0) continue;

            const Vec3 dir = pixel_ray_direction(frame, px, py, w, h);
            const RaySpan span = intersect_box(frame.origin, dir, grid.extent_min, grid.extent_max);
            if (!span.hit) continue;
            const double dt = (span.t1 - span.t0) / steps;

            // Forward replay, recording transmittance and sample values.
            double T = 1.0;
            for (int i = 0; i < steps; ++i) {
                const double t = span.t0 + (i + 0.5) * dt;
                const Vec3 p = frame.origin + dir * t;
                const TrilinearStencil st = trilinear_stencil(grid, p);
                const double sigma = sample_density(grid, st);
                sample_albedo(grid, st, &c_i[static_cast<std::size_t>(i) * 3]);
                T_i[i] = T;
                e_i[i] = std::exp(-sigma * dt);
                T *= e_i[i];
            }
            const double T_final = T;

            // Reverse sweep. suf accumulates sum_{j>i} w_j c_j + T_final*bg,
            // the part of the pixel color attenuated by sample i.
            double suf[3] = {T_final, T_final, T_final};  // white background
            for (int i = steps - 1; i >= 0; --i) {
                const double T_next = T_i[i] * e_i[i];
                const double wgt = T_i[i] * (1.0 - e_i[i]);
                const double* c = &c_i[static_cast<std::size_t>(i) * 3];
                double G = g_m * T_final;
                for (int k = 0; k < 3; ++k) G += g_rgb[k] * (T_next * c[k] - suf[k]);
                const double d_sigma = G * dt;

                const double t = span.t0 + (i + 0.5) * dt;
                const Vec3 p = frame.origin + dir * t;
                const TrilinearStencil st = trilinear_stencil(grid, p);
                for (int k = 0; k < 8; ++k) {
                    const std::size_t vi = st.idx[k];
                    grad.density[vi] += d_sigma * st.w[k] * softplus_grad(grid.density_param[vi]);
                    if (g_rgb[0] != 0.0 || g_rgb[1] != 0.0 || g_rgb[2] != 0.0) {
                        const std::size_t base = vi * 3;
                        for (int ch = 0; ch < 3; ++ch)
                            grad.albedo[base + ch] += g_rgb[ch] * wgt * st.w[k] *
                                                      logistic_grad(grid.albedo_param[base + ch]);
                    }
                }
                for (int k = 0; k < 3; ++k) suf[k] += wgt * c[k];
            }
        }
    }
    return grad;
}

}  // namespace arbor
