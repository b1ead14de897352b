#pragma once

#include <algorithm>
#include <limits>
#include <vector>

#include "arbor/vec3.hpp"

namespace arbor {

/// Static 3D kd-tree for nearest-neighbor queries over an immutable point set.
class KdTree {
  public:
    explicit KdTree(const std::vector<Vec3>& points) : points_(points) {
        indices_.resize(points.size());
        for (std::size_t i = 0; i < indices_.size(); ++i) indices_[i] = static_cast<int>(i);
        if (!points_.empty()) build(0, static_cast<int>(points_.size()), 0);
    }

    /// Squared distance to the nearest point; index written to *out_index if
    /// non-null. Undefined on an empty tree.
    double nearest_sq(const Vec3& query, int* out_index = nullptr) const {
        double best = std::numeric_limits<double>::infinity();
        int best_idx = -1;
        search(0, static_cast<int>(points_.size()), 0, query, best, best_idx);
        if (out_index) *out_index = best_idx;
        return best;
    }

  private:
    static double axis_value(const Vec3& p, int axis) {
        return axis == 0 ? p.x : (axis == 1 ? p.y : p.z);
    }

    void build(int lo, int hi, int depth) {
        if (hi - lo <= 1) return;
        const int mid = (lo + hi) / 2;
        const int axis = depth % 3;
        std::nth_element(indices_.begin() + lo, indices_.begin() + mid, indices_.begin() + hi,
                         [&](int a, int b) {
                             return axis_value(points_[a], axis) < axis_value(points_[b], axis);
                         });
        build(lo, mid, depth + 1);
        build(mid + 1, hi, depth + 1);
    }

    void search(int lo, int hi, int depth, const Vec3& q, double& best, int& best_idx) const {
        if (lo >= hi) return;
        const int mid = (lo + hi) / 2;
        const int idx = indices_[mid];
        const double d2 = length2(points_[idx] - q);
        if (d2 < best) {
            best = d2;
            best_idx = idx;
        }
        const int axis = depth % 3;
        const double delta = axis_value(q, axis) - axis_value(points_[idx], axis);
        const bool go_left_first = delta < 0.0;
        if (go_left_first) {
            search(lo, mid, depth + 1, q, best, best_idx);
            if (delta * delta < best) search(mid + 1, hi, depth + 1, q, best, best_idx);
        } else {
            search(mid + 1, hi, depth + 1, q, best, best_idx);
            if (delta * delta < best) search(lo, mid, depth + 1, q, best, best_idx);
        }
    }

    const std::vector<Vec3>& points_;
    std::vector<int> indices_;
};

}  // namespace arbor
