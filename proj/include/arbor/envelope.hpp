#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "arbor/grid.hpp"
#include "arbor/vec3.hpp"

namespace arbor {

/// Boolean voxelization of the optimized envelope.
struct OccupancyVolume {
    int nx = 0, ny = 0, nz = 0;
    Vec3 extent_min;
    Vec3 extent_max;
    std::vector<std::uint8_t> inside;  // x-fastest, 0/1
    double inside_fraction = 0.0;
    bool degenerate = false;  // all empty or all full

    std::size_t voxel_count() const { return static_cast<std::size_t>(nx) * ny * nz; }
    std::size_t voxel_index(int ix, int iy, int iz) const {
        return (static_cast<std::size_t>(iz) * ny + iy) * nx + ix;
    }
    Vec3 voxel_size() const {
        const Vec3 s = extent_max - extent_min;
        return {s.x / nx, s.y / ny, s.z / nz};
    }
    bool contains_point(const Vec3& p) const;
    double inside_volume() const;  // m^3
    Vec3 inside_centroid() const;  // centroid of inside voxel centers
    /// True if some inside voxel touches the bottom slab (iz == 0).
    bool touches_ground() const;
};

/// inside[v] = density[v] >= tau. Flags the result degenerate when the
/// threshold keeps everything or nothing.
OccupancyVolume extract_occupancy(const DensityGrid& grid, double tau);

/// Default threshold rule: 0.5 x the 99th-percentile density of the grid.
double default_tau(const DensityGrid& grid);

/// Attraction points filling the envelope volume.
struct MarkerSet {
    std::vector<Vec3> points;
    std::vector<std::uint8_t> alive;

    std::size_t alive_count() const;
};

/// Uniform rejection sampling inside the occupancy volume: candidates are
/// drawn uniformly over the extent box at the requested intensity and kept if
/// they fall in an inside voxel, so the kept count is Poisson with mean
/// density x inside-volume. Deterministic per seed.
MarkerSet sample_markers(const OccupancyVolume& vol, double density_per_m3, std::uint64_t seed);

/// Run-length-encoded binary. Byte layout, little-endian:
///   bytes 0..7   magic "ARBOCCV1"
///   3 x uint32   nx, ny, nz
///   6 x float32  extent min xyz, max xyz
///   1 x uint8    value of the first run (0 or 1)
///   uint32 run lengths, alternating value, until voxel_count is covered
void save_occupancy(const OccupancyVolume& vol, const std::string& path);
OccupancyVolume load_occupancy(const std::string& path);

}  // namespace arbor
