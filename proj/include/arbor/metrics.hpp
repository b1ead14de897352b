#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "arbor/pointcloud.hpp"
#include "arbor/skeleton.hpp"

namespace arbor {

/// Chamfer distance, convention "squared-mean-bidirectional-sum":
/// (1/|a|) sum_a min_b |a-b|^2 + (1/|b|) sum_b min_a |b-a|^2.
/// Raw coordinates; see normalize_unit_diagonal for the normalized variant.
double chamfer(const PointCloud& a, const PointCloud& b);

/// The convention string stamped into metric reports.
inline const char* chamfer_convention() { return "squared-mean-bidirectional-sum"; }

/// Center on the bounding-box center and scale so its diagonal is 1.
/// Degenerate (zero-diagonal) clouds are centered but not scaled.
PointCloud normalize_unit_diagonal(const PointCloud& cloud);

/// n points uniform by lateral surface area over the skeleton's truncated
/// cones; deterministic per seed.
PointCloud sample_points(const TreeSkeleton& skel, int n, std::uint64_t seed);

struct AttributeSummary {
    double mean = 0.0;
    double stddev = 0.0;
    std::vector<int> histogram;
    double hist_min = 0.0;
    double hist_max = 1.0;
};

AttributeSummary summarize(const std::vector<double>& values, double hist_min, double hist_max,
                           int bins = 10);

/// Geometric branching attributes: per-branch straightness (chord/path) and
/// tortuosity (path/chord) over maximal junction-free paths, per-node bend /
/// branching angles, and consecutive internode length ratios.
struct BranchAttributes {
    std::vector<double> straightness;
    std::vector<double> tortuosity;
    std::vector<double> angles_deg;
    std::vector<double> segment_ratios;
    AttributeSummary straightness_summary;
    AttributeSummary tortuosity_summary;
    AttributeSummary angle_summary;
    AttributeSummary ratio_summary;

    /// Flat [mean, std] x 4 feature vector for table assembly.
    std::vector<double> summary_vector() const;
};

BranchAttributes branch_attributes(const TreeSkeleton& skel);

}  // namespace arbor
