#pragma once

#include <string>
#include <vector>

#include "arbor/vec3.hpp"

namespace arbor {

struct PointCloud {
    std::vector<Vec3> points;

    bool empty() const { return points.empty(); }
    std::size_t size() const { return points.size(); }
};

/// ASCII or binary_little_endian PLY; reads the vertex element's x/y/z
/// properties and skips everything else.
PointCloud read_ply(const std::string& path);
void write_ply_ascii(const PointCloud& cloud, const std::string& path);

}  // namespace arbor
