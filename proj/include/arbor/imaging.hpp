#pragma once

#include <utility>
#include <vector>

#include "arbor/image.hpp"

namespace arbor {

/// Patch-wise variance-of-Laplacian sharpness. The image is split into
/// non-overlapping patch_size x patch_size tiles (trailing partial tiles
/// dropped); the 5-point stencil [0,1,0; 1,-4,1; 0,1,0] is evaluated on each
/// tile interior and the per-tile population variance of responses is
/// averaged over tiles. Grayscale input only.
double sharpness_score(const Image& img, int patch_size);

struct CurateResult {
    std::vector<int> kept;
    std::vector<int> rejected;
    std::vector<double> scores;
};

/// Keep index i iff sharpness_score(imgs[i]) >= threshold. Order-preserving
/// partition of the input indices.
CurateResult curate(const std::vector<Image>& imgs, double threshold, int patch_size);

/// Intersection-over-union of the two masks binarized at bin_thresh
/// (value >= bin_thresh counts as inside). Defined as 1 when both are empty.
double silhouette_iou(const Mask& a, const Mask& b, double bin_thresh);

}  // namespace arbor
