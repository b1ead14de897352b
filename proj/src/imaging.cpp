#include "arbor/imaging.hpp"

#include <cmath>
#include <stdexcept>

namespace arbor {

void Image::validate() const {
    if (width <= 0 || height <= 0 || (channels != 1 && channels != 3))
        throw std::invalid_argument("Image: bad dimensions");
    if (pixels.size() != static_cast<std::size_t>(width) * height * channels)
        throw std::invalid_argument("Image: pixel count != width*height*channels");
    for (double v : pixels)
        if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("Image: pixel outside [0,1]");
}

Image Image::expanded_rgb() const {
    if (channels == 3) return *this;
    Image out(width, height, 3);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) {
            const double v = at(x, y);
            out.at(x, y, 0) = v;
            out.at(x, y, 1) = v;
            out.at(x, y, 2) = v;
        }
    return out;
}

Image Image::to_grayscale() const {
    if (channels == 1) return *this;
    Image out(width, height, 1);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x)
            out.at(x, y) = (at(x, y, 0) + at(x, y, 1) + at(x, y, 2)) / 3.0;
    return out;
}

void Mask::validate() const {
    if (width <= 0 || height <= 0) throw std::invalid_argument("Mask: bad dimensions");
    if (values.size() != static_cast<std::size_t>(width) * height)
        throw std::invalid_argument("Mask: value count != width*height");
    for (double v : values)
        if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("Mask: value outside [0,1]");
}

double sharpness_score(const Image& img, int patch_size) {
    if (img.channels != 1) throw std::invalid_argument("sharpness_score: grayscale input required");
    if (patch_size < 3) throw std::invalid_argument("sharpness_score: patch_size must be >= 3");
    if (patch_size > img.width || patch_size > img.height)
        throw std::invalid_argument("sharpness_score: patch_size exceeds image");

    const int patches_x = img.width / patch_size;
    const int patches_y = img.height / patch_size;

    double variance_sum = 0.0;
    for (int py = 0; py < patches_y; ++py) {
        for (int px = 0; px < patches_x; ++px) {
            const int x0 = px * patch_size;
            const int y0 = py * patch_size;
            // 5-point Laplacian over the patch interior only.
            double sum = 0.0, sum_sq = 0.0;
            int count = 0;
            for (int y = y0 + 1; y < y0 + patch_size - 1; ++y) {
                for (int x = x0 + 1; x < x0 + patch_size - 1; ++x) {
                    const double r = img.at(x, y - 1) + img.at(x, y + 1) + img.at(x - 1, y) +
                                     img.at(x + 1, y) - 4.0 * img.at(x, y);
                    sum += r;
                    sum_sq += r * r;
                    ++count;
                }
            }
            const double mean = sum / count;
            variance_sum += sum_sq / count - mean * mean;
        }
    }
    const int patches = patches_x * patches_y;
    const double score = variance_sum / patches;
    return score < 0.0 ? 0.0 : score;  // clamp tiny negative rounding
}

CurateResult curate(const std::vector<Image>& imgs, double threshold, int patch_size) {
    if (threshold < 0.0) throw std::invalid_argument("curate: threshold must be >= 0");
    CurateResult result;
    result.scores.reserve(imgs.size());
    for (int i = 0; i < static_cast<int>(imgs.size()); ++i) {
        const double s = sharpness_score(imgs[i], patch_size);
        result.scores.push_back(s);
        if (s >= threshold)
            result.kept.push_back(i);
        else
            result.rejected.push_back(i);
    }
    return result;
}

double silhouette_iou(const Mask& a, const Mask& b, double bin_thresh) {
    if (a.width != b.width || a.height != b.height)
        throw std::invalid_argument("silhouette_iou: dimension mismatch");
    if (!(bin_thresh > 0.0 && bin_thresh < 1.0))
        throw std::invalid_argument("silhouette_iou: bin_thresh must be in (0,1)");
    long long inter = 0, uni = 0;
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        const bool in_a = a.values[i] >= bin_thresh;
        const bool in_b = b.values[i] >= bin_thresh;
        inter += (in_a && in_b);
        uni += (in_a || in_b);
    }
    if (uni == 0) return 1.0;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

}  // namespace arbor
