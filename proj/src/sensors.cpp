#include "surveyor/sensors.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace surveyor {

bool LidarParams::valid() const {
    if (max_range <= 0.0 || azimuth_count < 4) return false;
    double prev = -91.0;
    for (double e : elevation_angles) {
        if (e < -90.0 || e > 90.0 || e <= prev) return false;
        prev = e;
    }
    return !elevation_angles.empty();
}

LidarScan lidar_scan(const VoxelGrid& truth, const Pose& pose,
                     const LidarParams& params, uint64_t jitter_seed) {
    LidarScan scan;
    const double res = truth.resolution();
    // Nudge hit points off the entry face so they index into the hit voxel.
    const double inside_nudge = res * 1e-3;

    std::mt19937_64 rng(jitter_seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double az_step = 2.0 * M_PI / params.azimuth_count;

    for (double elev_deg : params.elevation_angles) {
        double elev = elev_deg * M_PI / 180.0;
        double az_offset = 0.0;
        if (jitter_seed != 0) {
            elev += (unit(rng) - 0.5) * (M_PI / 24.0);
            az_offset = unit(rng) * az_step;
        }
        const double ce = std::cos(elev), se = std::sin(elev);
        for (int a = 0; a < params.azimuth_count; ++a) {
            const double az = pose.yaw + az_offset + az_step * a;
            const Vec3 dir{ce * std::cos(az), ce * std::sin(az), se};
            const Vec3 end = pose.position + dir * params.max_range;
            const auto hit = truth.first_occupied(pose.position, end);
            if (hit) {
                const double t = hit->entry_t * params.max_range + inside_nudge;
                Vec3 p = pose.position + dir * std::min(t, params.max_range);
                // Entry-face arithmetic can land epsilon outside; clamp to the
                // hit voxel so the stored point always indexes into it.
                if (truth.id_of(p) != hit->voxel) {
                    const Vec3 c = truth.center_of(hit->voxel);
                    const double h = res * 0.5 - 1e-9;
                    p.x = std::clamp(p.x, c.x - h, c.x + h);
                    p.y = std::clamp(p.y, c.y - h, c.y + h);
                    p.z = std::clamp(p.z, c.z - h, c.z + h);
                }
                scan.hits.push_back(p);
            } else {
                scan.misses.push_back(end);
            }
        }
    }
    return scan;
}

bool camera_visible(const VoxelGrid& grid, const Viewpoint5D& vp, const Vec3& pt,
                    const CameraModel& cam) {
    const Vec3 d = pt - vp.position;
    const double dist = d.norm();
    if (dist > cam.max_view_dist) return false;
    if (dist < 1e-9) return false;

    // Gimbal frame: forward along the viewing direction, right in the
    // horizontal plane, up completing the basis.
    const Vec3 fwd = view_direction(vp.pitch, vp.yaw);
    const Vec3 right{-std::sin(vp.yaw), std::cos(vp.yaw), 0.0};
    const Vec3 up = right.cross(fwd);

    const double xf = d.dot(fwd);
    if (xf <= 0.0) return false;
    const double xr = d.dot(right);
    const double xu = d.dot(up);
    const double half_h = cam.fov_h * 0.5 * M_PI / 180.0;
    const double half_v = cam.fov_v * 0.5 * M_PI / 180.0;
    // Closed FoV boundary, with slack for angle round-off.
    if (std::atan2(std::abs(xr), xf) > half_h + 1e-9) return false;
    if (std::atan2(std::abs(xu), xf) > half_v + 1e-9) return false;

    const RaycastResult rc = grid.raycast(vp.position, pt);
    return rc.reached_occupied() && rc.voxel == grid.id_of(pt);
}

}  // namespace surveyor
