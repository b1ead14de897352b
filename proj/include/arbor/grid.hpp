#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "arbor/vec3.hpp"

namespace arbor {

inline double softplus(double x) {
    return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}
inline double softplus_inv(double y) { return std::log(std::expm1(y)); }
inline double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }
/// d softplus / dx
inline double softplus_grad(double x) { return logistic(x); }
/// d logistic / dx
inline double logistic_grad(double x) {
    const double s = logistic(x);
    return s * (1.0 - s);
}

/// Trainable 3D envelope: a dense voxel grid over an axis-aligned box.
/// Density is stored as an unconstrained parameter and mapped through
/// softplus; albedo parameters map through a logistic squash, so both stay in
/// range under unconstrained gradient steps.
struct DensityGrid {
    int nx = 0, ny = 0, nz = 0;
    Vec3 extent_min{-1.0, -1.0, -1.0};
    Vec3 extent_max{1.0, 1.0, 1.0};
    std::vector<double> density_param;  // nx*ny*nz, x-fastest
    std::vector<double> albedo_param;   // 3 * nx*ny*nz, rgb interleaved

    DensityGrid() = default;
    DensityGrid(int nx_, int ny_, int nz_, const Vec3& emin, const Vec3& emax,
                double init_density = 0.1, double init_albedo = 0.5);

    std::size_t voxel_count() const { return static_cast<std::size_t>(nx) * ny * nz; }
    std::size_t voxel_index(int ix, int iy, int iz) const {
        return (static_cast<std::size_t>(iz) * ny + iy) * nx + ix;
    }

    double density_at(int ix, int iy, int iz) const {
        return softplus(density_param[voxel_index(ix, iy, iz)]);
    }
    double albedo_at(int ix, int iy, int iz, int c) const {
        return logistic(albedo_param[voxel_index(ix, iy, iz) * 3 + c]);
    }

    Vec3 center() const { return (extent_min + extent_max) * 0.5; }
    Vec3 size() const { return extent_max - extent_min; }
    double max_side() const {
        const Vec3 s = size();
        return std::max(s.x, std::max(s.y, s.z));
    }
    Vec3 voxel_size() const { return {size().x / nx, size().y / ny, size().z / nz}; }

    bool contains(const Vec3& p) const {
        return p.x >= extent_min.x && p.x <= extent_max.x && p.y >= extent_min.y &&
               p.y <= extent_max.y && p.z >= extent_min.z && p.z <= extent_max.z;
    }

    /// Constrained density values for all voxels, x-fastest order.
    std::vector<double> density_values() const;
};

/// Binary checkpoint. Byte layout, little-endian throughout:
///   bytes 0..7   magic "ARBGRID1"
///   3 x uint32   nx, ny, nz
///   6 x float32  extent min xyz, extent max xyz
///   nx*ny*nz float32      density parameters (pre-softplus), x-fastest
///   3*nx*ny*nz float32    albedo parameters (pre-logistic), rgb interleaved
void save_grid(const DensityGrid& grid, const std::string& path);
DensityGrid load_grid(const std::string& path);

}  // namespace arbor
