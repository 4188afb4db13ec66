#include <cmath>

#include "doctest.h"
#include "surveyor/sensors.hpp"

using namespace surveyor;

namespace {

// Hollow axis-aligned box shell of occupied voxels.
VoxelGrid shell_box(int n) {
    VoxelGrid grid({0, 0, 0}, 1.0, {n, n, n}, VoxelState::Free);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z)
                if (x == 0 || y == 0 || z == 0 || x == n - 1 || y == n - 1 || z == n - 1)
                    grid.set_state(grid.id_of(VoxelCoord{x, y, z}), VoxelState::Occupied);
    return grid;
}

}  // namespace

TEST_CASE("lidar inside a closed box: every ray hits") {
    auto truth = shell_box(11);
    LidarParams params;
    params.max_range = 30.0;
    params.azimuth_count = 16;
    params.elevation_angles = {-45, 0, 45};
    auto scan = lidar_scan(truth, {{5.5, 5.5, 5.5}, 0.0}, params);
    CHECK(scan.misses.empty());
    CHECK(scan.hits.size() == 48);
    // Every hit point lies inside an Occupied voxel of the ground truth.
    for (const Vec3& h : scan.hits)
        CHECK(truth.state(truth.coord_of(h)) == VoxelState::Occupied);
}

TEST_CASE("lidar in empty scene: all misses at max range") {
    VoxelGrid truth({0, 0, 0}, 1.0, {20, 20, 20}, VoxelState::Free);
    LidarParams params;
    params.max_range = 8.0;
    params.azimuth_count = 8;
    params.elevation_angles = {0};
    const Pose pose{{10.0, 10.0, 10.0}, 0.3};
    auto scan = lidar_scan(truth, pose, params);
    CHECK(scan.hits.empty());
    CHECK(scan.misses.size() == 8);
    for (const Vec3& m : scan.misses)
        CHECK((m - pose.position).norm() == doctest::Approx(8.0));
}

TEST_CASE("lidar against a single wall matches the analytic ray count") {
    // Wall plane x in [10, 11), grid otherwise free. Horizontal ring of rays
    // from (0.5, 20, 5): a ray at azimuth a hits iff it reaches x = 10 within
    // max_range and stays in bounds, i.e. cos(a) >= 10 / 30 and the y-exit
    // stays inside [0, 40).
    VoxelGrid truth({0, 0, 0}, 1.0, {12, 40, 10}, VoxelState::Free);
    for (int y = 0; y < 40; ++y)
        for (int z = 0; z < 10; ++z)
            truth.set_state(truth.id_of(VoxelCoord{10, y, z}), VoxelState::Occupied);

    LidarParams params;
    params.max_range = 30.0;
    params.azimuth_count = 64;
    params.elevation_angles = {0};
    const Pose pose{{0.5, 20.0, 5.0}, 0.0};
    auto scan = lidar_scan(truth, pose, params);

    int expected = 0;
    for (int a = 0; a < 64; ++a) {
        const double az = 2.0 * M_PI * a / 64;
        const double cx = std::cos(az);
        if (cx <= 0.0) continue;
        const double t_wall = (10.0 - 0.5) / cx;  // distance to wall front face
        if (t_wall > 30.0) continue;
        const double y_at_wall = 20.0 + std::sin(az) * t_wall;
        if (y_at_wall < 0.0 || y_at_wall >= 40.0) continue;
        ++expected;
    }
    CHECK(static_cast<int>(scan.hits.size()) == expected);
}

TEST_CASE("lidar scans are deterministic") {
    auto truth = shell_box(9);
    LidarParams params;
    auto s1 = lidar_scan(truth, {{4.5, 4.5, 4.5}, 0.7}, params);
    auto s2 = lidar_scan(truth, {{4.5, 4.5, 4.5}, 0.7}, params);
    REQUIRE(s1.hits.size() == s2.hits.size());
    for (size_t i = 0; i < s1.hits.size(); ++i) CHECK(s1.hits[i] == s2.hits[i]);
}

TEST_CASE("camera_visible") {
    // Wall at x = 10; viewpoint looking along +x.
    VoxelGrid grid({0, 0, 0}, 1.0, {12, 20, 20}, VoxelState::Free);
    for (int y = 0; y < 20; ++y)
        for (int z = 0; z < 20; ++z)
            grid.set_state(grid.id_of(VoxelCoord{10, y, z}), VoxelState::Occupied);

    CameraModel cam{80.0, 60.0, 12.5};
    Viewpoint5D vp;
    vp.position = {4.5, 10.5, 10.5};
    vp.pitch = 0.0;
    vp.yaw = 0.0;

    const Vec3 target{10.5, 10.5, 10.5};

    SUBCASE("point along the gimbal axis is visible") {
        CHECK(camera_visible(grid, vp, target, cam));
    }
    SUBCASE("point behind the camera is not") {
        Viewpoint5D back = vp;
        back.yaw = M_PI;
        CHECK_FALSE(camera_visible(grid, back, target, cam));
    }
    SUBCASE("out of range is not visible") {
        CameraModel near{80.0, 60.0, 3.0};
        CHECK_FALSE(camera_visible(grid, vp, target, near));
    }
    SUBCASE("occluded point is not visible") {
        grid.set_state(grid.id_of(VoxelCoord{7, 10, 10}), VoxelState::Occupied);
        CHECK_FALSE(camera_visible(grid, vp, target, cam));
    }
    SUBCASE("point exactly on the half-FoV boundary is visible") {
        // Place the target so the horizontal angle is exactly fov_h / 2.
        const double half = 40.0 * M_PI / 180.0;
        const double dx = 10.5 - 4.5;
        const Vec3 boundary{10.5, 10.5 + dx * std::tan(half), 10.5};
        REQUIRE(grid.in_bounds(boundary));
        CHECK(camera_visible(grid, vp, boundary, cam));
    }
    SUBCASE("monotone in FoV: enlarging never hides a point") {
        for (double dy : {0.0, 2.0, 4.0, 6.0})
            for (double dz : {0.0, 1.5, 3.0}) {
                const Vec3 pt{10.5, 10.5 + dy, 10.5 + dz};
                if (!grid.in_bounds(pt)) continue;
                const bool narrow = camera_visible(grid, vp, pt, CameraModel{50, 40, 12.5});
                const bool wide = camera_visible(grid, vp, pt, CameraModel{100, 80, 12.5});
                if (narrow) CHECK(wide);
            }
    }
}
