#include "arbor/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "arbor/kdtree.hpp"
#include "arbor/rng.hpp"

namespace arbor {

double chamfer(const PointCloud& a, const PointCloud& b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("chamfer: empty point cloud");
    const KdTree tree_b(b.points);
    double sum_ab = 0.0;
    for (const Vec3& p : a.points) sum_ab += tree_b.nearest_sq(p);
    const KdTree tree_a(a.points);
    double sum_ba = 0.0;
    for (const Vec3& p : b.points) sum_ba += tree_a.nearest_sq(p);
    return sum_ab / static_cast<double>(a.size()) + sum_ba / static_cast<double>(b.size());
}

PointCloud normalize_unit_diagonal(const PointCloud& cloud) {
    if (cloud.empty()) throw std::invalid_argument("normalize_unit_diagonal: empty cloud");
    Vec3 lo = cloud.points[0], hi = cloud.points[0];
    for (const Vec3& p : cloud.points) {
        lo = min(lo, p);
        hi = max(hi, p);
    }
    const Vec3 center = (lo + hi) * 0.5;
    const double diag = length(hi - lo);
    const double scale = diag > 0.0 ? 1.0 / diag : 1.0;
    PointCloud out;
    out.points.reserve(cloud.size());
    for (const Vec3& p : cloud.points) out.points.push_back((p - center) * scale);
    return out;
}

PointCloud sample_points(const TreeSkeleton& skel, int n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample_points: n must be >= 1");
    if (skel.empty()) throw std::invalid_argument("sample_points: empty skeleton");

    struct Segment {
        Vec3 a, b;
        double ra, rb;
        double cumulative_area;
    };
    std::vector<Segment> segments;
    double total_area = 0.0;
    for (const auto& node : skel.nodes) {
        if (node.parent < 0) continue;
        const auto& parent = skel.nodes[node.parent];
        const double len = length(node.position - parent.position);
        const double slant = std::sqrt(len * len + (node.radius - parent.radius) *
                                                       (node.radius - parent.radius));
        const double area = 3.14159265358979323846 * (parent.radius + node.radius) * slant;
        if (area <= 0.0) continue;
        total_area += area;
        segments.push_back({parent.position, node.position, parent.radius, node.radius, total_area});
    }

    PointCloud cloud;
    cloud.points.reserve(n);
    if (segments.empty()) {
        // Degenerate skeleton (no positive-area cylinders): all samples at the root.
        cloud.points.assign(n, skel.nodes[0].position);
        return cloud;
    }

    Rng rng(derive_seed(seed, "sample_points"));
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int k = 0; k < n; ++k) {
        const double u = uni(rng) * total_area;
        std::size_t lo = 0, hi = segments.size() - 1;
        while (lo < hi) {
            const std::size_t mid = (lo + hi) / 2;
            if (segments[mid].cumulative_area < u)
                lo = mid + 1;
            else
                hi = mid;
        }
        const Segment& seg = segments[lo];

        // Along a frustum the lateral area density is linear in the radius;
        // invert that CDF for the axial coordinate.
        const double ut = uni(rng);
        const double dr = seg.rb - seg.ra;
        double t;
        if (std::abs(dr) < 1e-15) {
            t = ut;
        } else {
            const double disc = seg.ra * seg.ra + dr * (seg.ra + seg.rb) * ut;
            t = (std::sqrt(std::max(disc, 0.0)) - seg.ra) / dr;
            t = std::clamp(t, 0.0, 1.0);
        }
        const double theta = uni(rng) * 2.0 * 3.14159265358979323846;

        const Vec3 axis = normalized(seg.b - seg.a);
        const Vec3 u1 = any_perpendicular(axis);
        const Vec3 u2 = normalized(cross(axis, u1));
        const double r = seg.ra + t * dr;
        cloud.points.push_back(seg.a + (seg.b - seg.a) * t +
                               (u1 * std::cos(theta) + u2 * std::sin(theta)) * r);
    }
    return cloud;
}

AttributeSummary summarize(const std::vector<double>& values, double hist_min, double hist_max,
                           int bins) {
    AttributeSummary s;
    s.hist_min = hist_min;
    s.hist_max = hist_max;
    s.histogram.assign(bins, 0);
    if (values.empty()) return s;
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / values.size();
    double sq = 0.0;
    for (double v : values) sq += (v - s.mean) * (v - s.mean);
    s.stddev = std::sqrt(sq / values.size());
    const double span = hist_max - hist_min;
    for (double v : values) {
        int bin = span > 0.0 ? static_cast<int>((v - hist_min) / span * bins) : 0;
        bin = std::clamp(bin, 0, bins - 1);
        ++s.histogram[bin];
    }
    return s;
}

std::vector<double> BranchAttributes::summary_vector() const {
    return {straightness_summary.mean, straightness_summary.stddev,
            tortuosity_summary.mean,   tortuosity_summary.stddev,
            angle_summary.mean,        angle_summary.stddev,
            ratio_summary.mean,        ratio_summary.stddev};
}

BranchAttributes branch_attributes(const TreeSkeleton& skel) {
    if (skel.empty()) throw std::invalid_argument("branch_attributes: empty skeleton");
    BranchAttributes attrs;
    const auto kids = skel.children();
    constexpr double kRadToDeg = 180.0 / 3.14159265358979323846;

    // Branches: maximal paths starting at the root or a junction, following
    // single-child chains to the next junction or tip.
    for (std::size_t start = 0; start < skel.nodes.size(); ++start) {
        const bool is_branch_base = skel.nodes[start].parent < 0 || kids[start].size() >= 2;
        if (!is_branch_base) continue;
        for (int first : kids[start]) {
            double path = length(skel.nodes[first].position - skel.nodes[start].position);
            int cur = first;
            while (kids[cur].size() == 1) {
                const int next = kids[cur][0];
                path += length(skel.nodes[next].position - skel.nodes[cur].position);
                cur = next;
            }
            const double chord = length(skel.nodes[cur].position - skel.nodes[start].position);
            if (path <= 0.0) continue;
            attrs.straightness.push_back(chord / path);
            if (chord > 0.0) attrs.tortuosity.push_back(path / chord);
        }
    }

    // Per-node angles and internode length ratios (parent edge vs child edge).
    for (std::size_t j = 0; j < skel.nodes.size(); ++j) {
        const int p = skel.nodes[j].parent;
        if (p < 0) continue;
        const Vec3 in_dir = skel.nodes[j].position - skel.nodes[p].position;
        const double in_len = length(in_dir);
        if (in_len <= 0.0) continue;
        for (int c : kids[j]) {
            const Vec3 out_dir = skel.nodes[c].position - skel.nodes[j].position;
            const double out_len = length(out_dir);
            if (out_len <= 0.0) continue;
            const double cosang =
                std::clamp(dot(in_dir, out_dir) / (in_len * out_len), -1.0, 1.0);
            attrs.angles_deg.push_back(std::acos(cosang) * kRadToDeg);
            attrs.segment_ratios.push_back(out_len / in_len);
        }
    }

    attrs.straightness_summary = summarize(attrs.straightness, 0.0, 1.0);
    attrs.tortuosity_summary = summarize(attrs.tortuosity, 1.0, 3.0);
    attrs.angle_summary = summarize(attrs.angles_deg, 0.0, 180.0);
    attrs.ratio_summary = summarize(attrs.segment_ratios, 0.0, 3.0);
    return attrs;
}

}  // namespace arbor
