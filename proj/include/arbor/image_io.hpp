#pragma once

#include <string>

#include "arbor/image.hpp"

namespace arbor {

/// 8-bit binary PGM (P5). Values map linearly to [0,1] via maxval.
Image read_pgm(const std::string& path);
void write_pgm(const Image& img, const std::string& path);  // grayscale only

/// 8-bit PNG, grayscale or RGB. Palette/alpha/16-bit inputs are converted.
Image read_png(const std::string& path);
void write_png(const Image& img, const std::string& path);

/// Dispatch on file extension (.pgm / .png).
Image read_image(const std::string& path);
void write_image(const Image& img, const std::string& path);

Mask read_mask(const std::string& path);
/// Mask written as P5 with 0/255 after binarization at bin_thresh.
void write_mask_pgm(const Mask& mask, const std::string& path, double bin_thresh);
/// Soft mask written as 8-bit grayscale (no binarization).
void write_mask_soft(const Mask& mask, const std::string& path);

}  // namespace arbor
