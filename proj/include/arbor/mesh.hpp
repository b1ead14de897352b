#pragma once

#include <array>
#include <string>
#include <vector>

#include "arbor/growth.hpp"
#include "arbor/skeleton.hpp"
#include "arbor/vec3.hpp"

namespace arbor {

struct TriMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> triangles;
};

/// One capped truncated cone per skeleton edge with `sides`-gon cross
/// sections: 2*sides ring vertices + 2 cap centers and 4*sides triangles per
/// edge, watertight per segment.
TriMesh export_mesh(const TreeSkeleton& skel, int sides);

void save_obj(const TriMesh& mesh, const std::string& path);

}  // namespace arbor
