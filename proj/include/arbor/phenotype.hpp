#pragma once

#include <string>
#include <vector>

#include "arbor/growth.hpp"
#include "arbor/skeleton.hpp"
#include "arbor/vec3.hpp"

namespace arbor {

struct PhenotypeReport {
    double height_m = 0.0;
    double dbh_cm = 0.0;
    bool dbh_defined = false;
    double crown_radius_m = 0.0;
    double shadow_area_leaf_on_m2 = 0.0;
    double shadow_area_leaf_off_m2 = 0.0;
    Vec3 sun_direction{0.0, 0.0, -1.0};

    std::string to_json() const;
};

/// Max node z minus root z.
double tree_height(const TreeSkeleton& skel);

/// Twice the linearly interpolated trunk radius at z = breast_height, in cm.
/// The trunk is the chain from the root to the first branching node; throws
/// UndefinedTrait if it never crosses breast height.
double dbh(const TreeSkeleton& skel, double breast_height_m = 1.37);

/// Ground shadow: branch segments (as capsules of the segment's larger end
/// radius) and optional leaf disks are projected along sun_dir onto z = 0 and
/// rasterized on a lattice of ground_res cells; returns covered cells x cell
/// area. sun_dir must point downward (negative z).
double shadow_area(const TreeSkeleton& skel, const std::vector<Leaf>& leaves, double leaf_radius,
                   const Vec3& sun_dir, double ground_res);

/// Maximum horizontal distance from the vertical trunk axis (through the
/// root) to any node or leaf.
double crown_radius(const TreeSkeleton& skel, const std::vector<Leaf>& leaves);

PhenotypeReport measure_phenotype(const TreeSkeleton& skel, const std::vector<Leaf>& leaves,
                                  double leaf_radius, const Vec3& sun_dir, double ground_res,
                                  double breast_height_m = 1.37);

}  // namespace arbor
