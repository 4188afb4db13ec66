#pragma once

#include <vector>

#include "surveyor/grid.hpp"

namespace surveyor {

struct LidarParams {
    double max_range = 30.0;       // m
    int azimuth_count = 64;        // rays per elevation ring
    std::vector<double> elevation_angles = {-30, -15, 0, 15, 30, 55};  // degrees
    double rate = 10.0;            // Hz

    bool valid() const;
};

struct CameraModel {
    double fov_h = 80.0;           // degrees
    double fov_v = 60.0;           // degrees
    double max_view_dist = 12.5;   // m

    bool valid() const { return fov_h > 0 && fov_h < 180 && fov_v > 0 && fov_v < 180; }
};

// 5-DoF camera viewpoint: position plus gimbal pitch/yaw. Pitch is positive
// looking down; the viewing direction is
//   (cos(pitch)cos(yaw), cos(pitch)sin(yaw), -sin(pitch)).
struct Viewpoint5D {
    int64_t id = -1;
    Vec3 position;
    double pitch = 0.0;
    double yaw = 0.0;
    int64_t n_obs = 0;
    int64_t n_cover = 0;
    bool dormant = false;
};

inline Vec3 view_direction(double pitch, double yaw) {
    const double c = std::cos(pitch);
    return {c * std::cos(yaw), c * std::sin(yaw), -std::sin(pitch)};
}

struct LidarScan {
    std::vector<Vec3> hits;
    std::vector<Vec3> misses;  // endpoints of rays that reached max range
};

// Panoramic scan against the ground-truth grid: one ray per
// (azimuth, elevation), hit at the first Occupied voxel within max_range.
// A nonzero jitter_seed offsets the ray pattern per scan, mimicking a
// non-repetitive scan pattern that fills angular gaps over time.
LidarScan lidar_scan(const VoxelGrid& truth, const Pose& pose,
                     const LidarParams& params, uint64_t jitter_seed = 0);

// Frustum + occlusion visibility of a surface point from a viewpoint.
bool camera_visible(const VoxelGrid& grid, const Viewpoint5D& vp, const Vec3& pt,
                    const CameraModel& cam);

}  // namespace surveyor
