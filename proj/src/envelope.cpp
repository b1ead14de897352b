#include "arbor/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "arbor/rng.hpp"

namespace arbor {

bool OccupancyVolume::contains_point(const Vec3& p) const {
    if (p.x < extent_min.x || p.y < extent_min.y || p.z < extent_min.z) return false;
    if (p.x >= extent_max.x || p.y >= extent_max.y || p.z >= extent_max.z) return false;
    const Vec3 vs = voxel_size();
    const int ix = std::min(static_cast<int>((p.x - extent_min.x) / vs.x), nx - 1);
    const int iy = std::min(static_cast<int>((p.y - extent_min.y) / vs.y), ny - 1);
    const int iz = std::min(static_cast<int>((p.z - extent_min.z) / vs.z), nz - 1);
    return inside[voxel_index(ix, iy, iz)] != 0;
}

double OccupancyVolume::inside_volume() const {
    const Vec3 vs = voxel_size();
    std::size_t count = 0;
    for (std::uint8_t v : inside) count += v;
    return static_cast<double>(count) * vs.x * vs.y * vs.z;
}

Vec3 OccupancyVolume::inside_centroid() const {
    const Vec3 vs = voxel_size();
    Vec3 acc{0, 0, 0};
    std::size_t count = 0;
    for (int iz = 0; iz < nz; ++iz)
        for (int iy = 0; iy < ny; ++iy)
            for (int ix = 0; ix < nx; ++ix)
                if (inside[voxel_index(ix, iy, iz)]) {
                    acc += Vec3{extent_min.x + (ix + 0.5) * vs.x,
                                extent_min.y + (iy + 0.5) * vs.y,
                                extent_min.z + (iz + 0.5) * vs.z};
                    ++count;
                }
    return count > 0 ? acc / static_cast<double>(count) : (extent_min + extent_max) * 0.5;
}

bool OccupancyVolume::touches_ground() const {
    for (int iy = 0; iy < ny; ++iy)
        for (int ix = 0; ix < nx; ++ix)
            if (inside[voxel_index(ix, iy, 0)]) return true;
    return false;
}

OccupancyVolume extract_occupancy(const DensityGrid& grid, double tau) {
    if (!(tau > 0.0)) throw std::invalid_argument("extract_occupancy: tau must be > 0");
    OccupancyVolume vol;
    vol.nx = grid.nx;
    vol.ny = grid.ny;
    vol.nz = grid.nz;
    vol.extent_min = grid.extent_min;
    vol.extent_max = grid.extent_max;
    vol.inside.resize(grid.voxel_count());
    std::size_t count = 0;
    for (std::size_t i = 0; i < vol.inside.size(); ++i) {
        const bool in = softplus(grid.density_param[i]) >= tau;
        vol.inside[i] = in ? 1 : 0;
        count += in;
    }
    vol.inside_fraction = static_cast<double>(count) / static_cast<double>(vol.inside.size());
    vol.degenerate = (count == 0 || count == vol.inside.size());
    return vol;
}

double default_tau(const DensityGrid& grid) {
    std::vector<double> values = grid.density_values();
    const std::size_t idx =
        static_cast<std::size_t>(std::floor(0.99 * (values.size() - 1)));
    std::nth_element(values.begin(), values.begin() + idx, values.end());
    const double p99 = values[idx];
    return 0.5 * p99;
}

std::size_t MarkerSet::alive_count() const {
    std::size_t n = 0;
    for (std::uint8_t a : alive) n += a;
    return n;
}

MarkerSet sample_markers(const OccupancyVolume& vol, double density_per_m3, std::uint64_t seed) {
    if (!(density_per_m3 > 0.0))
        throw std::invalid_argument("sample_markers: density must be > 0");
    MarkerSet set;
    const Vec3 size = vol.extent_max - vol.extent_min;
    const double box_volume = size.x * size.y * size.z;

    Rng rng(derive_seed(seed, "markers"));
    std::poisson_distribution<long> count_dist(density_per_m3 * box_volume);
    const long candidates = count_dist(rng);
    std::uniform_real_distribution<double> ux(0.0, 1.0);
    for (long i = 0; i < candidates; ++i) {
        // Draw all three coordinates regardless of acceptance so the stream
        // advances identically for any occupancy content.
        const double x = vol.extent_min.x + ux(rng) * size.x;
        const double y = vol.extent_min.y + ux(rng) * size.y;
        const double z = vol.extent_min.z + ux(rng) * size.z;
        const Vec3 p{x, y, z};
        if (vol.contains_point(p)) {
            set.points.push_back(p);
            set.alive.push_back(1);
        }
    }
    return set;
}

namespace {

constexpr char kMagic[8] = {'A', 'R', 'B', 'O', 'C', 'C', 'V', '1'};

void write_u32(std::ostream& out, std::uint32_t v) {
    unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                          static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
    out.write(reinterpret_cast<const char*>(b), 4);
}

std::uint32_t read_u32(std::istream& in) {
    unsigned char b[4];
    in.read(reinterpret_cast<char*>(b), 4);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void write_f32(std::ostream& out, float v) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, 4);
    write_u32(out, bits);
}

float read_f32(std::istream& in) {
    const std::uint32_t bits = read_u32(in);
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
}

}  // namespace

void save_occupancy(const OccupancyVolume& vol, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_occupancy: cannot write " + path);
    out.write(kMagic, 8);
    write_u32(out, static_cast<std::uint32_t>(vol.nx));
    write_u32(out, static_cast<std::uint32_t>(vol.ny));
    write_u32(out, static_cast<std::uint32_t>(vol.nz));
    for (const Vec3& v : {vol.extent_min, vol.extent_max}) {
        write_f32(out, static_cast<float>(v.x));
        write_f32(out, static_cast<float>(v.y));
        write_f32(out, static_cast<float>(v.z));
    }
    const std::uint8_t first = vol.inside.empty() ? 0 : vol.inside[0];
    out.put(static_cast<char>(first));
    std::size_t i = 0;
    std::uint8_t value = first;
    while (i < vol.inside.size()) {
        std::size_t run = 0;
        while (i < vol.inside.size() && vol.inside[i] == value) {
            ++run;
            ++i;
        }
        write_u32(out, static_cast<std::uint32_t>(run));
        value = value ? 0 : 1;
    }
    if (!out) throw std::runtime_error("save_occupancy: write failed for " + path);
}

OccupancyVolume load_occupancy(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("load_occupancy: cannot open " + path);
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kMagic, 8) != 0)
        throw std::invalid_argument("load_occupancy: bad magic in " + path);
    OccupancyVolume vol;
    vol.nx = static_cast<int>(read_u32(in));
    vol.ny = static_cast<int>(read_u32(in));
    vol.nz = static_cast<int>(read_u32(in));
    if (vol.nx <= 0 || vol.ny <= 0 || vol.nz <= 0 || vol.voxel_count() > (1u << 28))
        throw std::invalid_argument("load_occupancy: implausible resolution in " + path);
    vol.extent_min = {read_f32(in), read_f32(in), read_f32(in)};
    vol.extent_max = {read_f32(in), read_f32(in), read_f32(in)};
    vol.inside.assign(vol.voxel_count(), 0);
    std::uint8_t value = static_cast<std::uint8_t>(in.get());
    std::size_t i = 0;
    while (i < vol.inside.size() && in) {
        const std::uint32_t run = read_u32(in);
        if (i + run > vol.inside.size())
            throw std::invalid_argument("load_occupancy: run overflow in " + path);
        if (value) std::fill(vol.inside.begin() + i, vol.inside.begin() + i + run, 1);
        i += run;
        value = value ? 0 : 1;
    }
    if (i != vol.inside.size())
        throw std::invalid_argument("load_occupancy: truncated file " + path);
    std::size_t count = 0;
    for (std::uint8_t v : vol.inside) count += v;
    vol.inside_fraction = static_cast<double>(count) / static_cast<double>(vol.inside.size());
    vol.degenerate = (count == 0 || count == vol.inside.size());
    return vol;
}

}  // namespace arbor
