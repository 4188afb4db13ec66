#pragma once

#include <optional>
#include <vector>

#include "surveyor/grid.hpp"
#include "surveyor/routes.hpp"

namespace surveyor::oracle {

// Plain Dijkstra over the same 26-connected Free-voxel graph as astar_path.
std::optional<double> dijkstra_path_length(const VoxelGrid& grid, const Vec3& a,
                                           const Vec3& b);

// O(free x occupied) nearest-occupied scan.
std::vector<double> brute_force_distance_field(const VoxelGrid& grid,
                                               double max_distance);

// Exhaustive open-tour ATSP over all permutations (n <= ~10).
AtspSolution exhaustive_atsp(const AtspMatrix& m);

// Full-grid surface-frontier predicate scan: Free voxel with an Occupied
// 6-neighbor and an Unknown 6-neighbor that are 26-adjacent to each other.
bool frontier_predicate(const VoxelGrid& grid, VoxelId id);
std::vector<VoxelId> brute_force_frontiers(const VoxelGrid& grid);

// Exhaustive multi-depot MTSP: every assignment of tasks to agents times
// every per-agent order. Costs follow the assignment cost model: depot leg
// from cost_depot(agent, task), legs from cost_task(a, b); the objective is
// max_i cost_i + epsilon * sum_i cost_i. Returns the minimal objective.
struct MtspInstance {
    int n_agents = 0;
    int n_tasks = 0;
    std::vector<double> depot_cost;  // n_agents x n_tasks
    std::vector<double> task_cost;   // n_tasks x n_tasks
    double epsilon = 1e-4;

    double depot(int a, int t) const {
        return depot_cost[static_cast<size_t>(a) * n_tasks + t];
    }
    double task(int a, int b) const {
        return task_cost[static_cast<size_t>(a) * n_tasks + b];
    }
};
struct MtspSolution {
    std::vector<std::vector<int>> paths;
    double objective = 0.0;
};
MtspSolution exhaustive_mtsp(const MtspInstance& inst);

}  // namespace surveyor::oracle
