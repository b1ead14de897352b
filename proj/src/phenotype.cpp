#include "arbor/phenotype.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "arbor/errors.hpp"

namespace arbor {

double tree_height(const TreeSkeleton& skel) {
    if (skel.empty()) throw std::invalid_argument("tree_height: empty skeleton");
    const double root_z = skel.nodes[0].position.z;
    double max_z = root_z;
    for (const auto& n : skel.nodes) max_z = std::max(max_z, n.position.z);
    return max_z - root_z;
}

double dbh(const TreeSkeleton& skel, double breast_height_m) {
    if (skel.empty()) throw std::invalid_argument("dbh: empty skeleton");
    const auto kids = skel.children();

    // Trunk: the chain from the root up to (and including) the first node
    // with more than one child.
    std::vector<int> trunk{0};
    int cur = 0;
    while (kids[cur].size() == 1) {
        cur = kids[cur][0];
        trunk.push_back(cur);
    }

    const double target = skel.nodes[0].position.z + breast_height_m;
    for (std::size_t i = 0; i + 1 < trunk.size(); ++i) {
        const auto& a = skel.nodes[trunk[i]];
        const auto& b = skel.nodes[trunk[i + 1]];
        const double z0 = a.position.z, z1 = b.position.z;
        if ((z0 <= target && target <= z1) || (z1 <= target && target <= z0)) {
            const double t = (z1 == z0) ? 0.0 : (target - z0) / (z1 - z0);
            const double r = a.radius + t * (b.radius - a.radius);
            return 2.0 * r * 100.0;
        }
    }
    throw UndefinedTrait("dbh: trunk does not cross breast height");
}

namespace {

struct Vec2 {
    double x = 0.0, y = 0.0;
};

struct Mat2 {
    // column-major: [c0 c1]
    double a = 1.0, b = 0.0;  // first column
    double c = 0.0, d = 1.0;  // second column

    Vec2 apply(const Vec2& v) const { return {a * v.x + c * v.y, b * v.x + d * v.y}; }
    double det() const { return a * d - b * c; }
    Mat2 inverse() const {
        const double dt = det();
        return {d / dt, -b / dt, -c / dt, a / dt};
    }
    double frobenius() const { return std::sqrt(a * a + b * b + c * c + d * d); }
};

double dist_point_segment_2d(const Vec2& p, const Vec2& a, const Vec2& b) {
    const double abx = b.x - a.x, aby = b.y - a.y;
    const double len2 = abx * abx + aby * aby;
    double t = 0.0;
    if (len2 > 0.0) t = std::clamp(((p.x - a.x) * abx + (p.y - a.y) * aby) / len2, 0.0, 1.0);
    const double dx = p.x - (a.x + t * abx);
    const double dy = p.y - (a.y + t * aby);
    return std::sqrt(dx * dx + dy * dy);
}

struct ShadowCapsule {
    Vec2 a, b;
    double radius;
};

struct ShadowEllipse {
    Vec2 center;
    Mat2 inv;  // maps plane offsets into the unit-disk frame (pre-divided by R)
    bool degenerate;
    double reach;  // conservative bbox half-width
};

}  // namespace

double shadow_area(const TreeSkeleton& skel, const std::vector<Leaf>& leaves, double leaf_radius,
                   const Vec3& sun_dir, double ground_res) {
    if (!(ground_res > 0.0)) throw std::invalid_argument("shadow_area: ground_res must be > 0");
    const Vec3 d = normalized(sun_dir);
    if (!(d.z < 0.0))
        throw std::invalid_argument("shadow_area: sun direction must point downward");

    const double kx = d.x / d.z, ky = d.y / d.z;
    const auto project = [&](const Vec3& p) -> Vec2 { return {p.x - kx * p.z, p.y - ky * p.z}; };

    // Basis of the plane perpendicular to the sun direction; its projection
    // maps the silhouette circle of a sphere to the ground ellipse.
    const Vec3 u1 = any_perpendicular(d);
    const Vec3 u2 = normalized(cross(d, u1));
    const Vec2 pu1 = {u1.x - kx * u1.z, u1.y - ky * u1.z};
    const Vec2 pu2 = {u2.x - kx * u2.z, u2.y - ky * u2.z};
    const Mat2 sphere_m{pu1.x, pu1.y, pu2.x, pu2.y};
    const Mat2 sphere_inv = sphere_m.inverse();
    const double sphere_reach = sphere_m.frobenius();

    std::vector<ShadowCapsule> capsules;
    for (const auto& node : skel.nodes) {
        if (node.parent < 0) continue;
        const double r = std::max(node.radius, skel.nodes[node.parent].radius);
        if (r <= 0.0) continue;
        capsules.push_back({project(skel.nodes[node.parent].position), project(node.position), r});
    }

    std::vector<ShadowEllipse> ellipses;
    for (const auto& leaf : leaves) {
        const Vec3 n = normalized(leaf.normal);
        const Vec3 e1 = any_perpendicular(n);
        const Vec3 e2 = normalized(cross(n, e1));
        const Vec2 pe1 = {e1.x - kx * e1.z, e1.y - ky * e1.z};
        const Vec2 pe2 = {e2.x - kx * e2.z, e2.y - ky * e2.z};
        const Mat2 a{pe1.x * leaf_radius, pe1.y * leaf_radius, pe2.x * leaf_radius,
                     pe2.y * leaf_radius};
        ShadowEllipse e;
        e.center = project(leaf.position);
        e.degenerate = std::abs(a.det()) < 1e-15;  // edge-on leaf casts no area
        if (!e.degenerate) e.inv = a.inverse();
        e.reach = a.frobenius();
        ellipses.push_back(e);
    }

    if (capsules.empty() && ellipses.empty()) return 0.0;

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    const auto grow_box = [&](const Vec2& p, double r) {
        xmin = std::min(xmin, p.x - r);
        xmax = std::max(xmax, p.x + r);
        ymin = std::min(ymin, p.y - r);
        ymax = std::max(ymax, p.y + r);
    };
    for (const auto& c : capsules) {
        grow_box(c.a, c.radius * sphere_reach);
        grow_box(c.b, c.radius * sphere_reach);
    }
    for (const auto& e : ellipses) grow_box(e.center, e.reach);

    // Lattice-aligned cells (absolute indices) so adding primitives can only
    // add covered cells.
    const long i0 = static_cast<long>(std::floor(xmin / ground_res)) - 1;
    const long i1 = static_cast<long>(std::ceil(xmax / ground_res)) + 1;
    const long j0 = static_cast<long>(std::floor(ymin / ground_res)) - 1;
    const long j1 = static_cast<long>(std::ceil(ymax / ground_res)) + 1;
    const long ni = i1 - i0 + 1, nj = j1 - j0 + 1;
    if (ni <= 0 || nj <= 0) return 0.0;
    if (ni * nj > 400000000L)
        throw std::invalid_argument("shadow_area: raster too large; increase ground_res");
    std::vector<std::uint8_t> covered(static_cast<std::size_t>(ni) * nj, 0);

    const auto mark = [&](long i, long j) {
        covered[static_cast<std::size_t>(j - j0) * ni + (i - i0)] = 1;
    };
    const auto cell_center = [&](long i, long j) -> Vec2 {
        return {(i + 0.5) * ground_res, (j + 0.5) * ground_res};
    };
    const auto cells_in = [&](double x0, double x1, double y0, double y1, auto&& test) {
        const long ia = std::max(i0, static_cast<long>(std::floor(x0 / ground_res)));
        const long ib = std::min(i1, static_cast<long>(std::ceil(x1 / ground_res)));
        const long ja = std::max(j0, static_cast<long>(std::floor(y0 / ground_res)));
        const long jb = std::min(j1, static_cast<long>(std::ceil(y1 / ground_res)));
        for (long j = ja; j <= jb; ++j)
            for (long i = ia; i <= ib; ++i)
                if (test(cell_center(i, j))) mark(i, j);
    };

    for (const auto& c : capsules) {
        const double pad = c.radius * sphere_reach + ground_res;
        const Vec2 ta = sphere_inv.apply(c.a);
        const Vec2 tb = sphere_inv.apply(c.b);
        cells_in(std::min(c.a.x, c.b.x) - pad, std::max(c.a.x, c.b.x) + pad,
                 std::min(c.a.y, c.b.y) - pad, std::max(c.a.y, c.b.y) + pad, [&](const Vec2& q) {
                     return dist_point_segment_2d(sphere_inv.apply(q), ta, tb) <= c.radius;
                 });
    }
    for (const auto& e : ellipses) {
        if (e.degenerate) continue;
        const double pad = e.reach + ground_res;
        cells_in(e.center.x - pad, e.center.x + pad, e.center.y - pad, e.center.y + pad,
                 [&](const Vec2& q) {
                     const Vec2 w = e.inv.apply({q.x - e.center.x, q.y - e.center.y});
                     return w.x * w.x + w.y * w.y <= 1.0;
                 });
    }

    std::size_t count = 0;
    for (std::uint8_t c : covered) count += c;
    return static_cast<double>(count) * ground_res * ground_res;
}

double crown_radius(const TreeSkeleton& skel, const std::vector<Leaf>& leaves) {
    if (skel.empty()) throw std::invalid_argument("crown_radius: empty skeleton");
    const double rx = skel.nodes[0].position.x;
    const double ry = skel.nodes[0].position.y;
    double best = 0.0;
    for (const auto& n : skel.nodes)
        best = std::max(best, std::hypot(n.position.x - rx, n.position.y - ry));
    for (const auto& leaf : leaves)
        best = std::max(best, std::hypot(leaf.position.x - rx, leaf.position.y - ry));
    return best;
}

PhenotypeReport measure_phenotype(const TreeSkeleton& skel, const std::vector<Leaf>& leaves,
                                  double leaf_radius, const Vec3& sun_dir, double ground_res,
                                  double breast_height_m) {
    PhenotypeReport report;
    report.sun_direction = normalized(sun_dir);
    report.height_m = tree_height(skel);
    try {
        report.dbh_cm = dbh(skel, breast_height_m);
        report.dbh_defined = true;
    } catch (const UndefinedTrait&) {
        report.dbh_cm = 0.0;
        report.dbh_defined = false;
    }
    report.crown_radius_m = crown_radius(skel, leaves);
    report.shadow_area_leaf_off_m2 = shadow_area(skel, {}, leaf_radius, sun_dir, ground_res);
    report.shadow_area_leaf_on_m2 = shadow_area(skel, leaves, leaf_radius, sun_dir, ground_res);
    return report;
}

std::string PhenotypeReport::to_json() const {
    nlohmann::json doc;
    doc["height_m"] = height_m;
    doc["dbh_cm"] = dbh_cm;
    doc["dbh_defined"] = dbh_defined;
    doc["crown_radius_m"] = crown_radius_m;
    doc["shadow_area_leaf_on_m2"] = shadow_area_leaf_on_m2;
    doc["shadow_area_leaf_off_m2"] = shadow_area_leaf_off_m2;
    doc["sun_direction"] = {sun_direction.x, sun_direction.y, sun_direction.z};
    return doc.dump(2) + "\n";
}

}  // namespace arbor
