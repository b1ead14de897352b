#include "arbor/skeleton.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace arbor {

bool TreeSkeleton::valid(std::string* why) const {
    auto fail = [&](const char* msg) {
        if (why) *why = msg;
        return false;
    };
    if (nodes.empty()) return fail("empty skeleton");
    int roots = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const int p = nodes[i].parent;
        if (p == -1) {
            ++roots;
            continue;
        }
        if (p < 0 || static_cast<std::size_t>(p) >= nodes.size()) return fail("parent out of range");
        if (static_cast<std::size_t>(p) >= i) return fail("parent does not precede child");
        if (nodes[p].creation_step > nodes[i].creation_step)
            return fail("creation_step decreases along path");
    }
    if (roots != 1) return fail("skeleton must have exactly one root");
    // Parent-precedes-child already rules out cycles; a union-find pass
    // additionally confirms everything joins a single tree.
    std::vector<int> find(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) find[i] = static_cast<int>(i);
    auto root_of = [&](int a) {
        while (find[a] != a) {
            find[a] = find[find[a]];
            a = find[a];
        }
        return a;
    };
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i].parent < 0) continue;
        const int ra = root_of(static_cast<int>(i));
        const int rb = root_of(nodes[i].parent);
        if (ra == rb) return fail("cycle detected");
        find[ra] = rb;
    }
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (root_of(static_cast<int>(i)) != root_of(0)) return fail("disconnected node");
    return true;
}

std::vector<std::vector<int>> TreeSkeleton::children() const {
    std::vector<std::vector<int>> kids(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].parent >= 0) kids[nodes[i].parent].push_back(static_cast<int>(i));
    return kids;
}

std::vector<double> TreeSkeleton::edge_lengths() const {
    std::vector<double> lengths(nodes.size(), 0.0);
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].parent >= 0)
            lengths[i] = length(nodes[i].position - nodes[nodes[i].parent].position);
    return lengths;
}

std::string skeleton_to_json(const TreeSkeleton& skel, const std::string& genus,
                             std::uint64_t seed) {
    nlohmann::json doc;
    doc["genus"] = genus;
    doc["seed"] = seed;
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& n : skel.nodes) {
        nodes.push_back({{"p", {n.position.x, n.position.y, n.position.z}},
                         {"parent", n.parent},
                         {"r", n.radius},
                         {"step", n.creation_step}});
    }
    doc["nodes"] = std::move(nodes);
    return doc.dump(2) + "\n";
}

void save_skeleton(const TreeSkeleton& skel, const std::string& genus, std::uint64_t seed,
                   const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_skeleton: cannot write " + path);
    out << skeleton_to_json(skel, genus, seed);
}

LoadedSkeleton skeleton_from_json(const std::string& json_text) {
    const nlohmann::json doc = nlohmann::json::parse(json_text);
    LoadedSkeleton result;
    result.genus = doc.value("genus", std::string{});
    result.seed = doc.value("seed", 0ull);
    for (const auto& jn : doc.at("nodes")) {
        SkeletonNode n;
        const auto& p = jn.at("p");
        n.position = {p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>()};
        n.parent = jn.at("parent").get<int>();
        n.radius = jn.at("r").get<double>();
        n.creation_step = jn.at("step").get<int>();
        result.skeleton.nodes.push_back(n);
    }
    // Recover growth directions for consumers that need them.
    for (std::size_t i = 0; i < result.skeleton.nodes.size(); ++i) {
        auto& n = result.skeleton.nodes[i];
        if (n.parent >= 0)
            n.direction = normalized(n.position - result.skeleton.nodes[n.parent].position);
        else
            n.direction = {0.0, 0.0, 1.0};
    }
    std::string why;
    if (!result.skeleton.valid(&why))
        throw std::invalid_argument("skeleton_from_json: invalid skeleton: " + why);
    return result;
}

LoadedSkeleton load_skeleton(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("load_skeleton: cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return skeleton_from_json(text);
}

}  // namespace arbor
