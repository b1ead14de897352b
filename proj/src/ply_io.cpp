#include "arbor/pointcloud.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace arbor {

namespace {

int scalar_size(const std::string& type) {
    if (type == "char" || type == "uchar" || type == "int8" || type == "uint8") return 1;
    if (type == "short" || type == "ushort" || type == "int16" || type == "uint16") return 2;
    if (type == "int" || type == "uint" || type == "int32" || type == "uint32" ||
        type == "float" || type == "float32")
        return 4;
    if (type == "double" || type == "float64") return 8;
    throw std::invalid_argument("ply: unsupported property type " + type);
}

double read_scalar(const unsigned char* p, const std::string& type) {
    if (type == "float" || type == "float32") {
        float v;
        std::memcpy(&v, p, 4);
        return v;
    }
    if (type == "double" || type == "float64") {
        double v;
        std::memcpy(&v, p, 8);
        return v;
    }
    throw std::invalid_argument("ply: coordinate property must be float or double");
}

}  // namespace

PointCloud read_ply(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("ply: cannot open " + path);

    std::string line;
    std::getline(in, line);
    if (line != "ply" && line != "ply\r") throw std::invalid_argument("ply: not a PLY file: " + path);

    bool binary = false;
    std::size_t vertex_count = 0;
    bool in_vertex_element = false;
    struct Property {
        std::string type;
        std::string name;
    };
    std::vector<Property> vertex_props;

    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream ss(line);
        std::string tok;
        ss >> tok;
        if (tok == "format") {
            std::string fmt;
            ss >> fmt;
            if (fmt == "binary_little_endian")
                binary = true;
            else if (fmt != "ascii")
                throw std::invalid_argument("ply: unsupported format " + fmt);
        } else if (tok == "element") {
            std::string name;
            std::size_t count;
            ss >> name >> count;
            in_vertex_element = (name == "vertex");
            if (in_vertex_element) vertex_count = count;
            if (!in_vertex_element && vertex_count > 0) {
                // Vertices must come first for this reader; trailing elements
                // are ignored after reading them.
                in_vertex_element = false;
            }
        } else if (tok == "property" && in_vertex_element) {
            Property p;
            ss >> p.type;
            if (p.type == "list") throw std::invalid_argument("ply: list property on vertices");
            ss >> p.name;
            vertex_props.push_back(p);
        } else if (tok == "end_header") {
            break;
        }
    }

    int ix = -1, iy = -1, iz = -1;
    for (std::size_t i = 0; i < vertex_props.size(); ++i) {
        if (vertex_props[i].name == "x") ix = static_cast<int>(i);
        if (vertex_props[i].name == "y") iy = static_cast<int>(i);
        if (vertex_props[i].name == "z") iz = static_cast<int>(i);
    }
    if (ix < 0 || iy < 0 || iz < 0)
        throw std::invalid_argument("ply: vertex element lacks x/y/z in " + path);

    PointCloud cloud;
    cloud.points.reserve(vertex_count);
    if (binary) {
        std::size_t stride = 0;
        std::vector<std::size_t> offsets(vertex_props.size());
        for (std::size_t i = 0; i < vertex_props.size(); ++i) {
            offsets[i] = stride;
            stride += scalar_size(vertex_props[i].type);
        }
        std::vector<unsigned char> row(stride);
        for (std::size_t v = 0; v < vertex_count; ++v) {
            in.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(stride));
            if (!in) throw std::invalid_argument("ply: truncated vertex data in " + path);
            cloud.points.push_back({read_scalar(row.data() + offsets[ix], vertex_props[ix].type),
                                    read_scalar(row.data() + offsets[iy], vertex_props[iy].type),
                                    read_scalar(row.data() + offsets[iz], vertex_props[iz].type)});
        }
    } else {
        for (std::size_t v = 0; v < vertex_count; ++v) {
            std::vector<double> values(vertex_props.size());
            for (double& val : values) {
                in >> val;
                if (!in) throw std::invalid_argument("ply: truncated vertex data in " + path);
            }
            cloud.points.push_back({values[ix], values[iy], values[iz]});
        }
    }
    return cloud;
}

void write_ply_ascii(const PointCloud& cloud, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("ply: cannot write " + path);
    out << "ply\nformat ascii 1.0\nelement vertex " << cloud.points.size()
        << "\nproperty float x\nproperty float y\nproperty float z\nend_header\n";
    char line[128];
    for (const auto& p : cloud.points) {
        std::snprintf(line, sizeof(line), "%.9g %.9g %.9g\n", p.x, p.y, p.z);
        out << line;
    }
}

}  // namespace arbor
