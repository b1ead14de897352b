#include "arbor/mesh.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace arbor {

TriMesh export_mesh(const TreeSkeleton& skel, int sides) {
    if (sides < 3) throw std::invalid_argument("export_mesh: sides must be >= 3");
    TriMesh mesh;
    constexpr double kTwoPi = 2.0 * 3.14159265358979323846;

    for (const auto& node : skel.nodes) {
        if (node.parent < 0) continue;
        const Vec3 a = skel.nodes[node.parent].position;
        const Vec3 b = node.position;
        const double ra = skel.nodes[node.parent].radius;
        const double rb = node.radius;
        const Vec3 axis = normalized(b - a);
        if (length(b - a) <= 0.0) continue;
        const Vec3 u = any_perpendicular(axis);
        const Vec3 v = normalized(cross(axis, u));

        const int base = static_cast<int>(mesh.vertices.size());
        for (int k = 0; k < sides; ++k) {
            const double ang = kTwoPi * k / sides;
            const Vec3 rim = u * std::cos(ang) + v * std::sin(ang);
            mesh.vertices.push_back(a + rim * ra);
        }
        for (int k = 0; k < sides; ++k) {
            const double ang = kTwoPi * k / sides;
            const Vec3 rim = u * std::cos(ang) + v * std::sin(ang);
            mesh.vertices.push_back(b + rim * rb);
        }
        const int cap_a = static_cast<int>(mesh.vertices.size());
        mesh.vertices.push_back(a);
        const int cap_b = cap_a + 1;
        mesh.vertices.push_back(b);

        for (int k = 0; k < sides; ++k) {
            const int k1 = (k + 1) % sides;
            const int a0 = base + k, a1 = base + k1;
            const int b0 = base + sides + k, b1 = base + sides + k1;
            mesh.triangles.push_back({a0, b0, b1});
            mesh.triangles.push_back({a0, b1, a1});
            mesh.triangles.push_back({cap_a, a1, a0});  // bottom cap faces outward (-axis)
            mesh.triangles.push_back({cap_b, b0, b1});  // top cap (+axis)
        }
    }
    return mesh;
}

void save_obj(const TriMesh& mesh, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_obj: cannot write " + path);
    char line[160];
    for (const auto& v : mesh.vertices) {
        std::snprintf(line, sizeof(line), "v %.9g %.9g %.9g\n", v.x, v.y, v.z);
        out << line;
    }
    for (const auto& t : mesh.triangles) {
        std::snprintf(line, sizeof(line), "f %d %d %d\n", t[0] + 1, t[1] + 1, t[2] + 1);
        out << line;
    }
}

}  // namespace arbor
