#pragma once

#include <stdexcept>

#include "arbor/grid.hpp"
#include "arbor/vec3.hpp"

namespace arbor {

/// Orbit camera: positioned on a sphere of `radius` around the grid center,
/// always looking at the center. Azimuth 0 puts the camera on +x; azimuth
/// grows toward +y; elevation tilts toward +z. `fov_deg` is the vertical
/// field of view of a pinhole projection.
struct CameraPose {
    double azimuth_deg = 0.0;
    double elevation_deg = 0.0;
    double radius = 5.0;
    double fov_deg = 45.0;
    int image_width = 64;
    int image_height = 64;
};

struct CameraFrame {
    Vec3 origin;
    Vec3 forward;
    Vec3 right;
    Vec3 up;
    double tan_half_fov;
    double aspect;
};

inline CameraFrame make_camera_frame(const CameraPose& pose, const Vec3& target) {
    if (pose.radius <= 0.0) throw std::invalid_argument("CameraPose: radius must be > 0");
    if (!(pose.fov_deg > 0.0 && pose.fov_deg < 180.0))
        throw std::invalid_argument("CameraPose: fov must be in (0,180)");
    constexpr double kDegToRad = 3.14159265358979323846 / 180.0;
    const double az = pose.azimuth_deg * kDegToRad;
    const double el = pose.elevation_deg * kDegToRad;
    CameraFrame f;
    f.origin = target + Vec3{std::cos(el) * std::cos(az), std::cos(el) * std::sin(az),
                             std::sin(el)} *
                            pose.radius;
    f.forward = normalized(target - f.origin);
    Vec3 world_up{0.0, 0.0, 1.0};
    Vec3 right = cross(f.forward, world_up);
    if (length(right) < 1e-9) right = cross(f.forward, Vec3{0.0, 1.0, 0.0});
    f.right = normalized(right);
    f.up = cross(f.right, f.forward);
    f.tan_half_fov = std::tan(0.5 * pose.fov_deg * kDegToRad);
    f.aspect = static_cast<double>(pose.image_width) / pose.image_height;
    return f;
}

/// Ray direction through the center of pixel (px, py); origin is the camera.
inline Vec3 pixel_ray_direction(const CameraFrame& f, int px, int py, int width, int height) {
    const double ndc_x = ((px + 0.5) / width) * 2.0 - 1.0;
    const double ndc_y = 1.0 - ((py + 0.5) / height) * 2.0;
    return normalized(f.forward + f.right * (ndc_x * f.tan_half_fov * f.aspect) +
                      f.up * (ndc_y * f.tan_half_fov));
}

/// Front-view convention: azimuth 0, elevation 0, radius 2.5x the largest
/// extent side.
inline CameraPose default_front_pose(const DensityGrid& grid, int width, int height) {
    CameraPose pose;
    pose.radius = 2.5 * grid.max_side();
    pose.image_width = width;
    pose.image_height = height;
    return pose;
}

}  // namespace arbor
