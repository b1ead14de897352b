#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace arbor {

/// Row-major raster with 1 (grayscale) or 3 (RGB) interleaved channels,
/// values in [0,1].
struct Image {
    int width = 0;
    int height = 0;
    int channels = 1;
    std::vector<double> pixels;

    Image() = default;
    Image(int w, int h, int c, double fill = 0.0)
        : width(w), height(h), channels(c), pixels(static_cast<std::size_t>(w) * h * c, fill) {
        if (w <= 0 || h <= 0 || (c != 1 && c != 3))
            throw std::invalid_argument("Image: bad dimensions");
    }

    double& at(int x, int y, int c = 0) {
        return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    double at(int x, int y, int c = 0) const {
        return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    std::size_t size() const { return pixels.size(); }

    /// Enforce the type invariants: pixel count and [0,1] range.
    void validate() const;

    /// Grayscale copy replicated into 3 channels; 3-channel images pass through.
    Image expanded_rgb() const;
    /// Luminance-average grayscale copy; 1-channel images pass through.
    Image to_grayscale() const;
};

/// Soft occupancy raster in [0,1], same geometry conventions as Image.
struct Mask {
    int width = 0;
    int height = 0;
    std::vector<double> values;

    Mask() = default;
    Mask(int w, int h, double fill = 0.0)
        : width(w), height(h), values(static_cast<std::size_t>(w) * h, fill) {
        if (w <= 0 || h <= 0) throw std::invalid_argument("Mask: bad dimensions");
    }

    double& at(int x, int y) { return values[static_cast<std::size_t>(y) * width + x]; }
    double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }

    void validate() const;
};

}  // namespace arbor
