#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "arbor/vec3.hpp"

namespace arbor {

struct SkeletonNode {
    Vec3 position;
    int parent = -1;  // -1 for the root
    double radius = 0.0;
    int creation_step = 0;
    Vec3 direction;  // unit growth direction at this node
};

/// Rooted branching graph: node 0 is the root, parents always precede their
/// children in the node list.
struct TreeSkeleton {
    std::vector<SkeletonNode> nodes;

    bool empty() const { return nodes.empty(); }
    /// Verifies single root, acyclic parent links (union-find), in-bounds
    /// parents appearing before children, and creation steps non-decreasing
    /// along every root-to-tip path.
    bool valid(std::string* why = nullptr) const;
    std::vector<std::vector<int>> children() const;
    std::vector<double> edge_lengths() const;  // per node, 0 for root
};

/// Serialization schema:
/// {"nodes":[{"p":[x,y,z],"parent":i|-1,"r":m,"step":k}],"genus":str,"seed":int}
std::string skeleton_to_json(const TreeSkeleton& skel, const std::string& genus,
                             std::uint64_t seed);
void save_skeleton(const TreeSkeleton& skel, const std::string& genus, std::uint64_t seed,
                   const std::string& path);

struct LoadedSkeleton {
    TreeSkeleton skeleton;
    std::string genus;
    std::uint64_t seed = 0;
};
LoadedSkeleton load_skeleton(const std::string& path);
LoadedSkeleton skeleton_from_json(const std::string& json_text);

}  // namespace arbor
