#include "arbor/growth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "arbor/rng.hpp"

namespace arbor {

namespace {
constexpr double kDegToRad = 3.14159265358979323846 / 180.0;
}

void GenusParams::validate() const {
    if (!(kill_distance < perception_radius))
        throw std::invalid_argument("GenusParams: kill_distance must be < perception_radius");
    if (!(internode_length > 0.0))
        throw std::invalid_argument("GenusParams: internode_length must be > 0");
    if (!(pipe_exponent >= 1.0))
        throw std::invalid_argument("GenusParams: pipe_exponent must be >= 1");
    if (!(perception_radius > 0.0) || !(kill_distance > 0.0) || !(tip_radius > 0.0))
        throw std::invalid_argument("GenusParams: radii must be > 0");
    if (max_steps < 1) throw std::invalid_argument("GenusParams: max_steps must be >= 1");
}

const std::map<std::string, GenusParams>& genus_presets() {
    // Growth-habit estimates per genus (columnar cypress, broad magnolia, ...);
    // these are library defaults, not measured data.
    static const std::map<std::string, GenusParams> presets = [] {
        std::map<std::string, GenusParams> m;
        GenusParams p;

        p = GenusParams{};
        p.name = "Cupressus";
        p.perception_radius = 0.30;
        p.perception_angle = 100.0;
        p.kill_distance = 0.12;
        p.internode_length = 0.055;
        p.branching_angle = 30.0;
        p.pipe_exponent = 2.0;
        p.tip_radius = 0.004;
        p.tropism = {0.0, 0.0, 0.45};
        m[p.name] = p;

        p = GenusParams{};
        p.name = "Magnolia";
        p.perception_radius = 0.32;
        p.perception_angle = 100.0;
        p.kill_distance = 0.13;
        p.internode_length = 0.07;
        p.branching_angle = 48.0;
        p.pipe_exponent = 2.0;
        p.tip_radius = 0.005;
        p.tropism = {0.0, 0.0, 0.12};
        m[p.name] = p;

        p = GenusParams{};
        p.name = "Pinus";
        p.perception_radius = 0.34;
        p.perception_angle = 95.0;
        p.kill_distance = 0.13;
        p.internode_length = 0.08;
        p.branching_angle = 52.0;
        p.pipe_exponent = 2.1;
        p.tip_radius = 0.004;
        p.tropism = {0.0, 0.0, 0.18};
        m[p.name] = p;

        p = GenusParams{};
        p.name = "Ligustrum";
        p.perception_radius = 0.28;
        p.perception_angle = 110.0;
        p.kill_distance = 0.11;
        p.internode_length = 0.05;
        p.branching_angle = 55.0;
        p.pipe_exponent = 2.0;
        p.tip_radius = 0.003;
        p.tropism = {0.0, 0.0, 0.05};
        m[p.name] = p;

        p = GenusParams{};
        p.name = "Cinnamomum";
        p.perception_radius = 0.30;
        p.perception_angle = 105.0;
        p.kill_distance = 0.12;
        p.internode_length = 0.06;
        p.branching_angle = 45.0;
        p.pipe_exponent = 2.0;
        p.tip_radius = 0.004;
        p.tropism = {0.0, 0.0, 0.10};
        m[p.name] = p;

        return m;
    }();
    return presets;
}

GenusParams genus_params(const std::string& name) {
    const auto& presets = genus_presets();
    const auto it = presets.find(name);
    if (it == presets.end()) throw std::invalid_argument("unknown genus: " + name);
    return it->second;
}

bool Obstacle::contains(const Vec3& p) const {
    switch (kind) {
        case Kind::Box:
            return p.x >= box_min.x && p.x <= box_max.x && p.y >= box_min.y &&
                   p.y <= box_max.y && p.z >= box_min.z && p.z <= box_max.z;
        case Kind::HalfSpace:
            return dot(normal, p) >= offset;
        case Kind::Envelope:
            return envelope && envelope->contains_point(p);
    }
    return false;
}

void Obstacle::validate() const {
    switch (kind) {
        case Kind::Box:
            if (!(box_min.x <= box_max.x && box_min.y <= box_max.y && box_min.z <= box_max.z))
                throw std::invalid_argument("Obstacle: box min must be <= max");
            break;
        case Kind::HalfSpace:
            if (std::abs(length(normal) - 1.0) > 1e-6)
                throw std::invalid_argument("Obstacle: wall normal must be unit length");
            break;
        case Kind::Envelope:
            if (!envelope) throw std::invalid_argument("Obstacle: missing envelope volume");
            break;
    }
}

Obstacle Obstacle::box(const Vec3& bmin, const Vec3& bmax) {
    Obstacle o;
    o.kind = Kind::Box;
    o.box_min = bmin;
    o.box_max = bmax;
    o.validate();
    return o;
}

Obstacle Obstacle::wall(const Vec3& normal, double offset) {
    Obstacle o;
    o.kind = Kind::HalfSpace;
    o.normal = normalized(normal);
    o.offset = offset;
    o.validate();
    return o;
}

Obstacle Obstacle::foreign_envelope(std::shared_ptr<OccupancyVolume> vol) {
    Obstacle o;
    o.kind = Kind::Envelope;
    o.envelope = std::move(vol);
    o.validate();
    return o;
}

bool inside_any_obstacle(const Vec3& p, const std::vector<Obstacle>& obstacles) {
    for (const auto& o : obstacles)
        if (o.contains(p)) return true;
    return false;
}

namespace {

/// Uniform hash grid over node positions; cell size >= query radius so every
/// within-radius neighbor is in the 27-cell neighborhood.
class NodeHash {
  public:
    explicit NodeHash(double cell) : cell_(cell) {}

    void insert(const Vec3& p, int index) {
        cells_[key(p)].push_back(index);
    }

    template <typename Fn>
    void for_neighbors(const Vec3& p, Fn&& fn) const {
        const long cx = coord(p.x), cy = coord(p.y), cz = coord(p.z);
        for (long dz = -1; dz <= 1; ++dz)
            for (long dy = -1; dy <= 1; ++dy)
                for (long dx = -1; dx <= 1; ++dx) {
                    const auto it = cells_.find(pack(cx + dx, cy + dy, cz + dz));
                    if (it == cells_.end()) continue;
                    for (int idx : it->second) fn(idx);
                }
    }

  private:
    long coord(double v) const { return static_cast<long>(std::floor(v / cell_)); }
    std::uint64_t key(const Vec3& p) const { return pack(coord(p.x), coord(p.y), coord(p.z)); }
    static std::uint64_t pack(long x, long y, long z) {
        const std::uint64_t ux = static_cast<std::uint64_t>(x + (1l << 20));
        const std::uint64_t uy = static_cast<std::uint64_t>(y + (1l << 20));
        const std::uint64_t uz = static_cast<std::uint64_t>(z + (1l << 20));
        return (ux << 42) ^ (uy << 21) ^ uz;
    }

    double cell_;
    std::unordered_map<std::uint64_t, std::vector<int>> cells_;
};

Vec3 clamp_to_cone(const Vec3& dir, const Vec3& axis, double max_angle_deg) {
    const double cos_max = std::cos(max_angle_deg * kDegToRad);
    const double c = dot(dir, axis);
    if (c >= cos_max) return dir;
    Vec3 perp = dir - axis * c;
    const double plen = length(perp);
    const Vec3 perp_dir = plen > 1e-12 ? perp / plen : any_perpendicular(axis);
    const double sin_max = std::sin(max_angle_deg * kDegToRad);
    return axis * cos_max + perp_dir * sin_max;
}

/// One in-place colonization step. Returns the number of nodes added.
int colonize_in_place(TreeSkeleton& skel, MarkerSet& markers, const GenusParams& params,
                      const std::vector<Obstacle>& obstacles, int step_index) {
    const double percept2 = params.perception_radius * params.perception_radius;
    const double kill2 = params.kill_distance * params.kill_distance;
    const double cos_percept = std::cos(params.perception_angle * kDegToRad);

    NodeHash hash(params.perception_radius);
    for (int i = 0; i < static_cast<int>(skel.nodes.size()); ++i)
        hash.insert(skel.nodes[i].position, i);

    // Marker assignment: nearest node within perception, ties to lowest index.
    std::vector<Vec3> dir_sum(skel.nodes.size(), Vec3{});
    std::vector<int> attractor_count(skel.nodes.size(), 0);
    for (std::size_t m = 0; m < markers.points.size(); ++m) {
        if (!markers.alive[m]) continue;
        const Vec3& mp = markers.points[m];
        int best = -1;
        double best_d2 = percept2;
        hash.for_neighbors(mp, [&](int idx) {
            const Vec3 to_m = mp - skel.nodes[idx].position;
            const double d2 = length2(to_m);
            if (d2 > percept2 || d2 == 0.0) return;
            if (dot(to_m, skel.nodes[idx].direction) < cos_percept * std::sqrt(d2)) return;
            if (d2 < best_d2 || (d2 == best_d2 && (best == -1 || idx < best))) {
                best_d2 = d2;
                best = idx;
            }
        });
        if (best >= 0) {
            dir_sum[best] += normalized(mp - skel.nodes[best].position);
            ++attractor_count[best];
        }
    }

    // Spawn one node per attracting node.
    const std::size_t n_before = skel.nodes.size();
    int added = 0;
    for (std::size_t i = 0; i < n_before; ++i) {
        if (attractor_count[i] == 0) continue;
        if (length(dir_sum[i]) < 1e-12) continue;  // opposing markers cancel
        Vec3 dir = normalized(dir_sum[i]);
        const Vec3 biased = dir + params.tropism;
        if (length(biased) < 1e-12) continue;
        dir = clamp_to_cone(normalized(biased), skel.nodes[i].direction, params.branching_angle);
        const Vec3 pos = skel.nodes[i].position + dir * params.internode_length;
        if (inside_any_obstacle(pos, obstacles)) continue;
        // Skip spawns that duplicate an existing node position; repeated
        // stalls then read as "no growth" and terminate the loop.
        bool duplicate = false;
        hash.for_neighbors(pos, [&](int idx) {
            if (length2(pos - skel.nodes[idx].position) < 1e-12) duplicate = true;
        });
        if (duplicate) continue;
        SkeletonNode node;
        node.position = pos;
        node.parent = static_cast<int>(i);
        node.creation_step = step_index;
        node.direction = dir;
        hash.insert(pos, static_cast<int>(skel.nodes.size()));
        skel.nodes.push_back(node);
        ++added;
    }

    // Kill markers within kill_distance of any node (including new ones).
    for (std::size_t m = 0; m < markers.points.size(); ++m) {
        if (!markers.alive[m]) continue;
        const Vec3& mp = markers.points[m];
        bool dead = false;
        hash.for_neighbors(mp, [&](int idx) {
            if (!dead && length2(mp - skel.nodes[idx].position) <= kill2) dead = true;
        });
        if (dead) markers.alive[m] = 0;
    }
    return added;
}

bool marker_in_perception_of_node(const SkeletonNode& node, const MarkerSet& markers,
                                  const GenusParams& params) {
    const double percept2 = params.perception_radius * params.perception_radius;
    const double cos_percept = std::cos(params.perception_angle * kDegToRad);
    for (std::size_t m = 0; m < markers.points.size(); ++m) {
        if (!markers.alive[m]) continue;
        const Vec3 to_m = markers.points[m] - node.position;
        const double d2 = length2(to_m);
        if (d2 > percept2 || d2 == 0.0) continue;
        if (dot(to_m, node.direction) >= cos_percept * std::sqrt(d2)) return true;
    }
    return false;
}

GrowResult grow_impl(const Vec3& anchor, MarkerSet& markers, const GenusParams& params,
                     const std::vector<Obstacle>& obstacles,
                     const std::function<void(int, const TreeSkeleton&)>& on_step) {
    params.validate();
    for (const auto& o : obstacles) o.validate();

    GrowResult res;
    const std::size_t dead_before =
        markers.points.size() - markers.alive_count();

    // Alive-marker centroid steers the trunk.
    Vec3 centroid{0, 0, 0};
    std::size_t alive = 0;
    for (std::size_t m = 0; m < markers.points.size(); ++m)
        if (markers.alive[m]) {
            centroid += markers.points[m];
            ++alive;
        }
    Vec3 up{0, 0, 1};
    Vec3 trunk_dir = up;
    double reach = 0.0;
    if (alive > 0) {
        centroid = centroid / static_cast<double>(alive);
        reach = length(centroid - anchor);
        if (reach > 1e-12) trunk_dir = normalized(centroid - anchor);
    }

    TreeSkeleton skel;
    SkeletonNode root;
    root.position = anchor;
    root.parent = -1;
    root.creation_step = 0;
    root.direction = trunk_dir;
    skel.nodes.push_back(root);

    // Trunk seeding: extend toward the centroid until a marker comes into
    // perception or the trunk has passed the centroid.
    bool contact = marker_in_perception_of_node(skel.nodes.back(), markers, params);
    const int max_trunk =
        static_cast<int>(std::ceil(reach / params.internode_length)) + 1;
    for (int k = 0; k < max_trunk && !contact && alive > 0; ++k) {
        SkeletonNode node;
        node.position = skel.nodes.back().position + trunk_dir * params.internode_length;
        if (inside_any_obstacle(node.position, obstacles)) break;
        node.parent = static_cast<int>(skel.nodes.size()) - 1;
        node.creation_step = 0;
        node.direction = trunk_dir;
        skel.nodes.push_back(node);
        contact = marker_in_perception_of_node(node, markers, params);
    }
    res.reached_markers = contact;
    if (on_step) on_step(0, skel);

    int steps = 0;
    if (contact) {
        for (int step = 1; step <= params.max_steps; ++step) {
            const int added = colonize_in_place(skel, markers, params, obstacles, step);
            if (added == 0) break;
            steps = step;
            if (on_step) on_step(step, skel);
        }
    }
    res.steps_run = steps;
    res.skeleton = assign_radii(skel, params);
    const std::size_t dead_after = markers.points.size() - markers.alive_count();
    res.markers_consumed = dead_after - dead_before;
    res.markers_remaining = markers.alive_count();
    return res;
}

}  // namespace

std::pair<TreeSkeleton, MarkerSet> colonize_step(const TreeSkeleton& skel,
                                                 const MarkerSet& markers,
                                                 const GenusParams& params,
                                                 const std::vector<Obstacle>& obstacles) {
    params.validate();
    std::string why;
    if (!skel.valid(&why)) throw std::invalid_argument("colonize_step: invalid skeleton: " + why);
    if (markers.points.size() != markers.alive.size())
        throw std::invalid_argument("colonize_step: marker flag count mismatch");
    TreeSkeleton next_skel = skel;
    MarkerSet next_markers = markers;
    int next_step = 0;
    for (const auto& n : skel.nodes) next_step = std::max(next_step, n.creation_step);
    colonize_in_place(next_skel, next_markers, params, obstacles, next_step + 1);
    return {std::move(next_skel), std::move(next_markers)};
}

GrowResult grow(const Vec3& anchor, MarkerSet& markers, const GenusParams& params,
                const std::vector<Obstacle>& obstacles) {
    return grow_impl(anchor, markers, params, obstacles, nullptr);
}

std::vector<GrowResult> grow_competing(const std::vector<Vec3>& anchors, MarkerSet& markers,
                                       const GenusParams& params,
                                       const std::vector<Obstacle>& obstacles) {
    params.validate();
    const std::size_t n = anchors.size();
    std::vector<GrowResult> results(n);
    std::vector<TreeSkeleton> skels(n);
    std::vector<bool> active(n, false);

    // Seed every trunk first (in anchor order), then step round-robin.
    for (std::size_t i = 0; i < n; ++i) {
        Vec3 centroid{0, 0, 0};
        std::size_t alive = 0;
        for (std::size_t m = 0; m < markers.points.size(); ++m)
            if (markers.alive[m]) {
                centroid += markers.points[m];
                ++alive;
            }
        Vec3 trunk_dir{0, 0, 1};
        double reach = 0.0;
        if (alive > 0) {
            centroid = centroid / static_cast<double>(alive);
            reach = length(centroid - anchors[i]);
            if (reach > 1e-12) trunk_dir = normalized(centroid - anchors[i]);
        }
        SkeletonNode root;
        root.position = anchors[i];
        root.parent = -1;
        root.direction = trunk_dir;
        skels[i].nodes.push_back(root);
        bool contact = marker_in_perception_of_node(root, markers, params);
        const int max_trunk = static_cast<int>(std::ceil(reach / params.internode_length)) + 1;
        for (int k = 0; k < max_trunk && !contact && alive > 0; ++k) {
            SkeletonNode node;
            node.position = skels[i].nodes.back().position + trunk_dir * params.internode_length;
            if (inside_any_obstacle(node.position, obstacles)) break;
            node.parent = static_cast<int>(skels[i].nodes.size()) - 1;
            node.direction = trunk_dir;
            skels[i].nodes.push_back(node);
            contact = marker_in_perception_of_node(node, markers, params);
        }
        results[i].reached_markers = contact;
        active[i] = contact;
    }

    for (int step = 1; step <= params.max_steps; ++step) {
        bool any = false;
        for (std::size_t i = 0; i < n; ++i) {
            if (!active[i]) continue;
            const std::size_t alive_before = markers.alive_count();
            const int added = colonize_in_place(skels[i], markers, params, obstacles, step);
            results[i].markers_consumed += alive_before - markers.alive_count();
            if (added == 0)
                active[i] = false;
            else {
                any = true;
                results[i].steps_run = step;
            }
        }
        if (!any) break;
    }
    for (std::size_t i = 0; i < n; ++i) {
        results[i].skeleton = assign_radii(skels[i], params);
        results[i].markers_remaining = markers.alive_count();
    }
    return results;
}

TreeSkeleton assign_radii(const TreeSkeleton& skel, const GenusParams& params) {
    TreeSkeleton out = skel;
    const auto kids = out.children();
    const double n = params.pipe_exponent;
    for (int i = static_cast<int>(out.nodes.size()) - 1; i >= 0; --i) {
        if (kids[i].empty()) {
            out.nodes[i].radius = params.tip_radius;
        } else {
            double sum = 0.0;
            for (int c : kids[i]) sum += std::pow(out.nodes[c].radius, n);
            out.nodes[i].radius = std::pow(sum, 1.0 / n);
        }
    }
    return out;
}

std::vector<Snapshot> simulate(const Vec3& anchor, MarkerSet& markers, const GenusParams& params,
                               const std::vector<Obstacle>& obstacles,
                               const std::vector<int>& snapshot_steps) {
    for (std::size_t i = 1; i < snapshot_steps.size(); ++i)
        if (snapshot_steps[i] < snapshot_steps[i - 1])
            throw std::invalid_argument("simulate: snapshot_steps must be ascending");

    std::vector<Snapshot> snapshots;
    std::size_t next = 0;
    int last_step = 0;
    TreeSkeleton last_state;
    const auto capture = [&](int step, const TreeSkeleton& skel) {
        last_step = step;
        last_state = skel;
        while (next < snapshot_steps.size() && snapshot_steps[next] <= step) {
            Snapshot snap;
            snap.requested_step = snapshot_steps[next];
            snap.actual_step = step;
            snap.skeleton = assign_radii(skel, params);
            snapshots.push_back(std::move(snap));
            ++next;
        }
    };
    grow_impl(anchor, markers, params, obstacles, capture);
    // Requests beyond termination return the final state, flagged.
    while (next < snapshot_steps.size()) {
        Snapshot snap;
        snap.requested_step = snapshot_steps[next];
        snap.actual_step = last_step;
        snap.beyond_termination = true;
        snap.skeleton = assign_radii(last_state, params);
        snapshots.push_back(std::move(snap));
        ++next;
    }
    return snapshots;
}

std::vector<Leaf> attach_foliage(const TreeSkeleton& skel, const GenusParams& params,
                                 double leaf_density_per_m, double leaf_radius,
                                 std::uint64_t seed) {
    if (leaf_density_per_m < 0.0)
        throw std::invalid_argument("attach_foliage: leaf_density must be >= 0");
    std::vector<Leaf> leaves;
    if (leaf_density_per_m == 0.0 || skel.nodes.size() < 2) return leaves;

    // Eligible segments: end radius below 2x tip_radius (terminal twigs).
    struct Segment {
        Vec3 a, b;
        double cumulative_end;
    };
    std::vector<Segment> segments;
    double total = 0.0;
    for (const auto& node : skel.nodes) {
        if (node.parent < 0) continue;
        if (node.radius >= 2.0 * params.tip_radius) continue;
        const Vec3 a = skel.nodes[node.parent].position;
        const double len = length(node.position - a);
        if (len <= 0.0) continue;
        total += len;
        segments.push_back({a, node.position, total});
    }
    if (segments.empty()) return leaves;

    const long count = std::lround(leaf_density_per_m * total);
    Rng rng(derive_seed(seed, "foliage"));
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (long k = 0; k < count; ++k) {
        const double u = uni(rng) * total;
        std::size_t lo = 0, hi = segments.size() - 1;
        while (lo < hi) {
            const std::size_t mid = (lo + hi) / 2;
            if (segments[mid].cumulative_end < u)
                lo = mid + 1;
            else
                hi = mid;
        }
        const Segment& seg = segments[lo];
        const double seg_len = length(seg.b - seg.a);
        const double before = seg.cumulative_end - seg_len;
        const double t = std::clamp((u - before) / seg_len, 0.0, 1.0);
        const Vec3 base = seg.a + (seg.b - seg.a) * t;

        Vec3 normal{gauss(rng), gauss(rng), gauss(rng)};
        if (length(normal) < 1e-9) normal = {0.0, 0.0, 1.0};
        normal = normalized(normal);
        const Vec3 axis = normalized(seg.b - seg.a);
        Vec3 radial = cross(axis, normal);
        if (length(radial) < 1e-9) radial = any_perpendicular(axis);
        radial = normalized(radial);
        const double offset = uni(rng) * leaf_radius;
        leaves.push_back({base + radial * offset, normal});
    }
    return leaves;
}

void save_leaves_ply(const std::vector<Leaf>& leaves, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_leaves_ply: cannot write " + path);
    out << "ply\nformat ascii 1.0\nelement vertex " << leaves.size()
        << "\nproperty float x\nproperty float y\nproperty float z\nproperty float nx\n"
           "property float ny\nproperty float nz\nend_header\n";
    char line[256];
    for (const auto& leaf : leaves) {
        std::snprintf(line, sizeof(line), "%.9g %.9g %.9g %.9g %.9g %.9g\n", leaf.position.x,
                      leaf.position.y, leaf.position.z, leaf.normal.x, leaf.normal.y,
                      leaf.normal.z);
        out << line;
    }
}

std::vector<Leaf> load_leaves_ply(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("load_leaves_ply: cannot open " + path);
    std::string line;
    std::size_t count = 0;
    bool header_done = false;
    while (std::getline(in, line)) {
        std::istringstream ss(line);
        std::string tok;
        ss >> tok;
        if (tok == "element") {
            std::string what;
            ss >> what >> count;
        } else if (tok == "end_header") {
            header_done = true;
            break;
        }
    }
    if (!header_done) throw std::invalid_argument("load_leaves_ply: bad header in " + path);
    std::vector<Leaf> leaves;
    leaves.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Leaf leaf;
        in >> leaf.position.x >> leaf.position.y >> leaf.position.z >> leaf.normal.x >>
            leaf.normal.y >> leaf.normal.z;
        if (!in) throw std::invalid_argument("load_leaves_ply: truncated data in " + path);
        leaves.push_back(leaf);
    }
    return leaves;
}

}  // namespace arbor
