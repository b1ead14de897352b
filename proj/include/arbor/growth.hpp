#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "arbor/envelope.hpp"
#include "arbor/skeleton.hpp"
#include "arbor/vec3.hpp"

namespace arbor {

/// Per-genus growth parameters. Angles in degrees, lengths in meters.
struct GenusParams {
    std::string name;
    double perception_radius = 0.30;
    double perception_angle = 100.0;  // half-angle of the perception cone
    double kill_distance = 0.12;
    double internode_length = 0.06;
    double branching_angle = 45.0;  // max deviation from the parent direction
    double pipe_exponent = 2.0;
    double tip_radius = 0.004;
    Vec3 tropism{0.0, 0.0, 0.1};
    int max_steps = 400;

    void validate() const;
};

/// Built-in presets for the five benchmark genera. The values are this
/// library's estimates of growth habit, not measured data.
const std::map<std::string, GenusParams>& genus_presets();
GenusParams genus_params(const std::string& name);  // throws on unknown genus

struct Obstacle {
    enum class Kind { Box, HalfSpace, Envelope };
    Kind kind = Kind::Box;
    // Box
    Vec3 box_min, box_max;
    // HalfSpace (wall): blocked where dot(normal, p) >= offset
    Vec3 normal{1.0, 0.0, 0.0};
    double offset = 0.0;
    // Envelope of a foreign tree
    std::shared_ptr<OccupancyVolume> envelope;

    bool contains(const Vec3& p) const;
    void validate() const;

    static Obstacle box(const Vec3& bmin, const Vec3& bmax);
    static Obstacle wall(const Vec3& normal, double offset);
    static Obstacle foreign_envelope(std::shared_ptr<OccupancyVolume> vol);
};

bool inside_any_obstacle(const Vec3& p, const std::vector<Obstacle>& obstacles);

/// One space-colonization step: each alive marker attracts its nearest node
/// within the perception radius and cone (ties to the lowest node index);
/// every attracting node spawns one node at internode_length along the
/// normalized marker-direction sum biased by tropism and clamped to the
/// branching cone; spawns inside obstacles are rejected; markers within
/// kill_distance of any node die. Deterministic given inputs.
std::pair<TreeSkeleton, MarkerSet> colonize_step(const TreeSkeleton& skel,
                                                 const MarkerSet& markers,
                                                 const GenusParams& params,
                                                 const std::vector<Obstacle>& obstacles);

struct GrowResult {
    TreeSkeleton skeleton;
    int steps_run = 0;
    bool reached_markers = true;  // false: trunk never saw a marker
    std::size_t markers_consumed = 0;
    std::size_t markers_remaining = 0;
};

/// Seeds a trunk from the anchor toward the alive-marker centroid, then
/// iterates colonize_step until nothing grows or params.max_steps is reached,
/// and assigns pipe-model radii. Consumes markers from `markers` in place so
/// sequentially grown trees compete for the shared set.
GrowResult grow(const Vec3& anchor, MarkerSet& markers, const GenusParams& params,
                const std::vector<Obstacle>& obstacles = {});

/// Round-robin competition: all trees are seeded, then stepped one
/// colonize_step at a time in anchor order against the shared marker set.
std::vector<GrowResult> grow_competing(const std::vector<Vec3>& anchors, MarkerSet& markers,
                                       const GenusParams& params,
                                       const std::vector<Obstacle>& obstacles = {});

/// Pipe-model radii: tips get tip_radius, interior nodes get
/// (sum child_radius^n)^(1/n) with n = pipe_exponent.
TreeSkeleton assign_radii(const TreeSkeleton& skel, const GenusParams& params);

struct Snapshot {
    int requested_step = 0;
    int actual_step = 0;
    bool beyond_termination = false;
    TreeSkeleton skeleton;
};

/// Runs grow while capturing the skeleton at each requested step (ascending).
/// Steps past termination return the final state, flagged.
std::vector<Snapshot> simulate(const Vec3& anchor, MarkerSet& markers, const GenusParams& params,
                               const std::vector<Obstacle>& obstacles,
                               const std::vector<int>& snapshot_steps);

struct Leaf {
    Vec3 position;
    Vec3 normal;
};

/// Places round(leaf_density x eligible length) leaves on segments whose end
/// radius is below 2x tip_radius, uniformly by length, each offset at most
/// leaf_radius from its segment. Deterministic per seed.
std::vector<Leaf> attach_foliage(const TreeSkeleton& skel, const GenusParams& params,
                                 double leaf_density_per_m, double leaf_radius,
                                 std::uint64_t seed);

void save_leaves_ply(const std::vector<Leaf>& leaves, const std::string& path);
std::vector<Leaf> load_leaves_ply(const std::string& path);

}  // namespace arbor
