#include <cmath>

#include "doctest.h"
#include "surveyor/photographer.hpp"

using namespace surveyor;

namespace {

Viewpoint5D vp_at(int64_t id, const Vec3& pos, double yaw = 0.0,
                  double pitch = 0.0) {
    Viewpoint5D vp;
    vp.id = id;
    vp.position = pos;
    vp.yaw = yaw;
    vp.pitch = pitch;
    return vp;
}

}  // namespace

TEST_CASE("local route refinement") {
    VoxelGrid grid({0, 0, 0}, 1.0, {20, 20, 10}, VoxelState::Free);
    MotionLimits limits{1.0, 1.0, 1.0, 1.0};

    SUBCASE("single cluster with one viewpoint") {
        VctSet vcts;
        std::vector<Viewpoint5D> table{vp_at(0, {6, 8, 5})};
        const int64_t a = vcts.add_viewpoint(table[0], grid);
        auto plan = plan_local_path(Pose{{2, 2, 5}, 0.0}, {a}, vcts, table, 1,
                                    grid, limits, 3);
        CHECK(plan.viewpoint_ids == std::vector<int64_t>{0});
        CHECK(!plan.has_anchor);
    }

    SUBCASE("empty global path is idle") {
        VctSet vcts;
        auto plan = plan_local_path(Pose{{2, 2, 5}, 0.0}, {}, vcts, {}, 2, grid,
                                    limits, 3);
        CHECK(plan.viewpoint_ids.empty());
    }

    SUBCASE("collinear viewpoints are visited in sweep order") {
        VctSet vcts;
        std::vector<Viewpoint5D> table{vp_at(0, {4, 5, 5}), vp_at(1, {7, 5, 5}),
                                       vp_at(2, {12, 5, 5}),
                                       vp_at(3, {15, 5, 5})};
        std::vector<int64_t> path;
        for (const auto& vp : table) {
            const int64_t c = vcts.add_viewpoint(vp, grid);
            if (path.empty() || path.back() != c) path.push_back(c);
        }
        REQUIRE(path.size() == 2);
        auto plan = plan_local_path(Pose{{1, 5, 5}, 0.0}, path, vcts, table, 2,
                                    grid, limits, 5);
        CHECK(plan.viewpoint_ids == std::vector<int64_t>{0, 1, 2, 3});
    }

    SUBCASE("anchor to the next cluster reorders the tour") {
        VctSet vcts;
        std::vector<Viewpoint5D> table{vp_at(0, {6, 11, 5}), vp_at(1, {6, 5, 5}),
                                       vp_at(2, {10, 2, 5})};
        const int64_t a = vcts.add_viewpoint(table[0], grid);
        CHECK(vcts.add_viewpoint(table[1], grid) == a);
        const int64_t b = vcts.add_viewpoint(table[2], grid);
        REQUIRE(a != b);

        auto bare = plan_local_path(Pose{{2, 7, 5}, 0.0}, {a}, vcts, table, 1,
                                    grid, limits, 7);
        CHECK(bare.viewpoint_ids == std::vector<int64_t>{1, 0});

        auto pulled = plan_local_path(Pose{{2, 7, 5}, 0.0}, {a, b}, vcts, table,
                                      1, grid, limits, 7);
        CHECK(pulled.has_anchor);
        CHECK(pulled.viewpoint_ids == std::vector<int64_t>{0, 1});
    }
}

TEST_CASE("trajectory generation and sampling") {
    VoxelGrid grid({0, 0, 0}, 1.0, {40, 12, 12}, VoxelState::Free);
    DistanceField field(grid, 100.0);
    MotionLimits limits{1.0, 1.0, 1.0, 1.0};
    GimbalPose start{{2.5, 6.5, 6.5}, 0.0, 0.0};

    SUBCASE("10 m straight leg takes 11 s") {
        auto traj = generate_trajectory(start, {vp_at(0, {12.5, 6.5, 6.5})},
                                        grid, field, limits, 0.8);
        REQUIRE(traj.pieces.size() == 1);
        CHECK(traj.pieces[0].length == doctest::Approx(10.0).epsilon(1e-9));
        CHECK(traj.total_duration() == doctest::Approx(11.0).epsilon(1e-9));

        auto s0 = sample(traj, 0.0);
        CHECK(s0.speed == 0.0);
        CHECK((s0.position - start.position).norm() == doctest::Approx(0.0));
        auto mid = sample(traj, 5.5);
        CHECK(mid.speed == doctest::Approx(1.0));
        auto end = sample(traj, 11.0);
        CHECK(end.speed == doctest::Approx(0.0));
        CHECK((end.position - Vec3{12.5, 6.5, 6.5}).norm() ==
              doctest::Approx(0.0).epsilon(1e-9));
        // Out-of-range times clamp.
        auto late = sample(traj, 99.0);
        CHECK((late.position - end.position).norm() == 0.0);
    }

    SUBCASE("waypoint at the current position holds the pose") {
        auto traj = generate_trajectory(start, {vp_at(0, start.position)}, grid,
                                        field, limits, 0.8);
        REQUIRE(traj.pieces.size() == 1);
        CHECK(traj.total_duration() == 0.0);
        auto s = sample(traj, 0.0);
        CHECK((s.position - start.position).norm() == 0.0);
    }

    SUBCASE("gimbal-limited pieces stretch rather than speed up") {
        auto traj = generate_trajectory(
            start, {vp_at(0, {3.5, 6.5, 6.5}, M_PI, 0.0)}, grid, field, limits,
            0.8);
        REQUIRE(traj.pieces.size() == 1);
        CHECK(traj.pieces[0].duration == doctest::Approx(M_PI));
        for (double t = 0.0; t <= traj.pieces[0].duration; t += 0.01)
            CHECK(sample(traj, t).speed <= 1.0 + 1e-9);
    }

    SUBCASE("unreachable waypoint is dropped, the rest planned") {
        VoxelGrid sealed = grid;
        // Seal a chamber around (30..33, 4..7): target inside is unreachable.
        for (int x = 28; x < 36 && x < 40; ++x)
            for (int y = 2; y < 10; ++y)
                for (int z = 2; z < 10; ++z)
                    sealed.set_state(sealed.id_of(VoxelCoord{x, y, z}),
                                     VoxelState::Occupied);
        sealed.set_state(sealed.id_of(VoxelCoord{31, 5, 5}), VoxelState::Free);
        DistanceField sf(sealed, 100.0);
        auto traj = generate_trajectory(
            start, {vp_at(0, {31.5, 5.5, 5.5}), vp_at(1, {12.5, 6.5, 6.5})},
            sealed, sf, limits, 0.8);
        CHECK(traj.dropped == std::vector<int64_t>{0});
        REQUIRE(traj.pieces.size() == 1);
        CHECK(traj.pieces[0].target_vp == 1);
    }

    SUBCASE("kinodynamic and clearance bounds hold at 100 Hz") {
        VoxelGrid maze = grid;
        for (int y = 0; y < 12; ++y)
            for (int z = 0; z < 12; ++z)
                if (!(y >= 8 && y < 11 && z >= 4 && z < 8))
                    maze.set_state(maze.id_of(VoxelCoord{20, y, z}),
                                   VoxelState::Occupied);
        DistanceField mf(maze, 100.0);
        auto traj = generate_trajectory(
            start,
            {vp_at(0, {30.5, 6.5, 6.5}, 1.2, 0.3), vp_at(1, {35.5, 3.5, 8.5})},
            maze, mf, limits, 0.8);
        REQUIRE(traj.pieces.size() == 2);
        const double total = traj.total_duration();
        double prev_speed = 0.0;
        bool first = true;
        for (double t = 0.0; t <= total; t += 0.01) {
            auto s = sample(traj, t);
            CHECK(s.speed <= limits.v_max + 1e-6);
            if (!first)
                CHECK(std::abs(s.speed - prev_speed) / 0.01 <=
                      limits.a_max + 1e-6);
            prev_speed = s.speed;
            first = false;
            const VoxelId id = maze.id_of(s.position);
            REQUIRE(id >= 0);
            CHECK(maze.state(id) == VoxelState::Free);
            CHECK(mf.at(id) >= 0.8);
        }
    }
}

TEST_CASE("visitation events") {
    SUBCASE("pose tolerance checks") {
        const auto vp = vp_at(0, {5, 5, 5}, 1.0, 0.2);
        GimbalPose exact{{5, 5, 5}, 1.0, 0.2};
        CHECK(viewpoint_reached(exact, vp, 0.3, 0.15));
        GimbalPose off_yaw{{5, 5, 5}, 1.0 + M_PI / 2, 0.2};
        CHECK(!viewpoint_reached(off_yaw, vp, 0.3, 0.15));
        GimbalPose off_pos{{5, 5.4, 5}, 1.0, 0.2};
        CHECK(!viewpoint_reached(off_pos, vp, 0.3, 0.15));
        GimbalPose near{{5, 5.2, 5}, 1.1, 0.1};
        CHECK(viewpoint_reached(near, vp, 0.3, 0.15));
    }

    SUBCASE("fly-through latches exactly one event per viewpoint") {
        VoxelGrid grid({0, 0, 0}, 1.0, {30, 12, 12}, VoxelState::Free);
        DistanceField field(grid, 100.0);
        VctSet vcts;
        std::vector<Viewpoint5D> table{vp_at(0, {10.5, 6.5, 6.5}),
                                       vp_at(1, {14.5, 6.5, 6.5})};
        std::vector<int64_t> path;
        for (const auto& vp : table) {
            const int64_t c = vcts.add_viewpoint(vp, grid);
            if (path.empty() || path.back() != c) path.push_back(c);
        }
        Photographer agent(0, GimbalPose{{2.5, 6.5, 6.5}, 0.0, 0.0});
        agent.set_assignment(path);
        agent.replan(vcts, table, grid, field, 4);

        std::map<int64_t, int> counts;
        for (int tick = 0; tick < 400; ++tick)
            for (int64_t id : agent.advance(0.1, table)) ++counts[id];
        CHECK(counts.size() == 2);
        CHECK(counts[0] == 1);
        CHECK(counts[1] == 1);
        CHECK(agent.idle());
        CHECK(agent.distance_flown() == doctest::Approx(12.0).epsilon(0.02));
    }

    SUBCASE("replan with unchanged clusters keeps the viewpoint set") {
        VoxelGrid grid({0, 0, 0}, 1.0, {30, 12, 12}, VoxelState::Free);
        DistanceField field(grid, 100.0);
        VctSet vcts;
        std::vector<Viewpoint5D> table{vp_at(0, {10.5, 6.5, 6.5}),
                                       vp_at(1, {14.5, 6.5, 6.5}),
                                       vp_at(2, {25.5, 6.5, 6.5})};
        std::vector<int64_t> path;
        for (const auto& vp : table) {
            const int64_t c = vcts.add_viewpoint(vp, grid);
            if (path.empty() || path.back() != c) path.push_back(c);
        }
        Photographer agent(0, GimbalPose{{2.5, 6.5, 6.5}, 0.0, 0.0});
        agent.set_assignment(path);
        agent.replan(vcts, table, grid, field, 4);
        auto first = agent.plan().viewpoint_ids;
        for (int tick = 0; tick < 20; ++tick) agent.advance(0.1, table);
        agent.replan(vcts, table, grid, field, 99);
        auto second = agent.plan().viewpoint_ids;
        std::sort(first.begin(), first.end());
        std::sort(second.begin(), second.end());
        CHECK(first == second);
    }
}
