#pragma once

#include <cstdint>
#include <vector>

#include "surveyor/grid.hpp"

namespace surveyor {

// Finite stand-in cost for unreachable pairs.
constexpr double kUnreachableCost = 1e6;

struct MotionLimits {
    double v_max = 1.0;         // m/s
    double yaw_rate_max = 1.0;  // rad/s
    double a_max = 1.0;         // m/s^2
    double j_max = 1.0;         // m/s^3
};

// Open-tour ATSP cost matrix. Node 0 is the start; column 0 is identically
// zero so returning to the start is free.
struct AtspMatrix {
    int n = 0;
    std::vector<double> cost;  // row-major n x n

    double at(int i, int j) const { return cost[static_cast<size_t>(i) * n + j]; }
    double& at(int i, int j) { return cost[static_cast<size_t>(i) * n + j]; }
};

struct AtspSolution {
    std::vector<int> order;  // node ids 1..n-1 in visit order
    double cost = 0.0;
    bool has_unreachable_edge = false;
};

// Travel-time estimate between two poses: max of translation time along the
// A* path and yaw rotation time, yaw difference wrapped to [0, pi].
double pairwise_cost(const VoxelGrid& grid, const Pose& from, const Pose& to,
                     const MotionLimits& limits);

AtspMatrix build_atsp_matrix(const VoxelGrid& grid, const Pose& start,
                             const std::vector<Pose>& nodes, const MotionLimits& limits);

// Open-tour path cost starting at node 0: sum of matrix entries along
// 0 -> order[0] -> ... -> order.back().
double tour_cost(const AtspMatrix& m, const std::vector<int>& order);

// Nearest-neighbor construction followed by 2-opt and Or-opt local search,
// best of a few seeded restarts. Deterministic given the seed.
AtspSolution solve_atsp(const AtspMatrix& m, uint64_t seed);

}  // namespace surveyor
