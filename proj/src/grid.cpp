#include "arbor/grid.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace arbor {

DensityGrid::DensityGrid(int nx_, int ny_, int nz_, const Vec3& emin, const Vec3& emax,
                         double init_density, double init_albedo)
    : nx(nx_), ny(ny_), nz(nz_), extent_min(emin), extent_max(emax) {
    if (nx <= 0 || ny <= 0 || nz <= 0) throw std::invalid_argument("DensityGrid: bad resolution");
    if (!(emin.x < emax.x && emin.y < emax.y && emin.z < emax.z))
        throw std::invalid_argument("DensityGrid: bad extent");
    density_param.assign(voxel_count(), softplus_inv(init_density));
    const double a = std::log(init_albedo / (1.0 - init_albedo));
    albedo_param.assign(voxel_count() * 3, a);
}

std::vector<double> DensityGrid::density_values() const {
    std::vector<double> out(density_param.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = softplus(density_param[i]);
    return out;
}

namespace {

constexpr char kMagic[8] = {'A', 'R', 'B', 'G', 'R', 'I', 'D', '1'};

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

void write_f32_array(std::ostream& out, const std::vector<double>& values) {
    for (double v : values) write_f32(out, static_cast<float>(v));
}

void read_f32_array(std::istream& in, std::vector<double>& values, std::size_t n) {
    values.resize(n);
    for (std::size_t i = 0; i < n; ++i) values[i] = read_f32(in);
}

}  // namespace

void save_grid(const DensityGrid& grid, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_grid: cannot write " + path);
    out.write(kMagic, 8);
    write_u32(out, static_cast<std::uint32_t>(grid.nx));
    write_u32(out, static_cast<std::uint32_t>(grid.ny));
    write_u32(out, static_cast<std::uint32_t>(grid.nz));
    for (const Vec3& v : {grid.extent_min, grid.extent_max}) {
        write_f32(out, static_cast<float>(v.x));
        write_f32(out, static_cast<float>(v.y));
        write_f32(out, static_cast<float>(v.z));
    }
    write_f32_array(out, grid.density_param);
    write_f32_array(out, grid.albedo_param);
    if (!out) throw std::runtime_error("save_grid: write failed for " + path);
}

DensityGrid load_grid(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("load_grid: cannot open " + path);
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, kMagic, 8) != 0)
        throw std::invalid_argument("load_grid: bad magic in " + path);
    DensityGrid grid;
    grid.nx = static_cast<int>(read_u32(in));
    grid.ny = static_cast<int>(read_u32(in));
    grid.nz = static_cast<int>(read_u32(in));
    if (grid.nx <= 0 || grid.ny <= 0 || grid.nz <= 0 || grid.voxel_count() > (1u << 28))
        throw std::invalid_argument("load_grid: implausible resolution in " + path);
    grid.extent_min = {read_f32(in), read_f32(in), read_f32(in)};
    grid.extent_max = {read_f32(in), read_f32(in), read_f32(in)};
    read_f32_array(in, grid.density_param, grid.voxel_count());
    read_f32_array(in, grid.albedo_param, grid.voxel_count() * 3);
    if (!in) throw std::invalid_argument("load_grid: truncated file " + path);
    return grid;
}

}  // namespace arbor
