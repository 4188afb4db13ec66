#include "surveyor/oracle.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <queue>
#include <unordered_map>

namespace surveyor::oracle {

std::optional<double> dijkstra_path_length(const VoxelGrid& grid, const Vec3& a,
                                           const Vec3& b) {
    const VoxelId start = grid.id_of(a);
    const VoxelId goal = grid.id_of(b);
    if (start < 0 || goal < 0 || !grid.is_free(start) || !grid.is_free(goal))
        return std::nullopt;
    if (start == goal) return 0.0;

    using Entry = std::pair<double, VoxelId>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> open;
    std::unordered_map<VoxelId, double> dist;
    dist[start] = 0.0;
    open.push({0.0, start});
    while (!open.empty()) {
        auto [d, id] = open.top();
        open.pop();
        if (d > dist[id] + 1e-12) continue;
        if (id == goal) break;
        for (VoxelId n : grid.neighbors26(id)) {
            if (!grid.is_free(n)) continue;
            const double w = (grid.center_of(n) - grid.center_of(id)).norm();
            auto it = dist.find(n);
            if (it == dist.end() || d + w < it->second - 1e-12) {
                dist[n] = d + w;
                open.push({d + w, n});
            }
        }
    }
    auto it = dist.find(goal);
    if (it == dist.end()) return std::nullopt;
    // Center-to-center length; compare against astar_path queried at centers.
    return it->second;
}

std::vector<double> brute_force_distance_field(const VoxelGrid& grid,
                                               double max_distance) {
    std::vector<Vec3> occ;
    for (VoxelId id = 0; id < grid.voxel_count(); ++id)
        if (grid.state(id) == VoxelState::Occupied) occ.push_back(grid.center_of(id));
    std::vector<double> out(static_cast<size_t>(grid.voxel_count()), max_distance);
    for (VoxelId id = 0; id < grid.voxel_count(); ++id) {
        const Vec3 c = grid.center_of(id);
        double best = max_distance;
        for (const Vec3& o : occ) best = std::min(best, (o - c).norm());
        out[static_cast<size_t>(id)] = best;
    }
    return out;
}

AtspSolution exhaustive_atsp(const AtspMatrix& m) {
    AtspSolution best;
    if (m.n <= 1) return best;
    std::vector<int> order(static_cast<size_t>(m.n) - 1);
    std::iota(order.begin(), order.end(), 1);
    best.order = order;
    best.cost = tour_cost(m, order);
    while (std::next_permutation(order.begin(), order.end())) {
        const double c = tour_cost(m, order);
        if (c < best.cost) {
            best.cost = c;
            best.order = order;
        }
    }
    return best;
}

bool frontier_predicate(const VoxelGrid& grid, VoxelId id) {
    if (grid.state(id) != VoxelState::Free) return false;
    const auto nbrs = grid.neighbors6(id);
    for (VoxelId o : nbrs) {
        if (grid.state(o) != VoxelState::Occupied) continue;
        const VoxelCoord oc = grid.coord_of(o);
        for (VoxelId u : nbrs) {
            if (grid.state(u) != VoxelState::Unknown) continue;
            const VoxelCoord uc = grid.coord_of(u);
            const int dx = std::abs(oc.x - uc.x);
            const int dy = std::abs(oc.y - uc.y);
            const int dz = std::abs(oc.z - uc.z);
            if (std::max({dx, dy, dz}) == 1) return true;
        }
    }
    return false;
}

std::vector<VoxelId> brute_force_frontiers(const VoxelGrid& grid) {
    std::vector<VoxelId> out;
    for (VoxelId id = 0; id < grid.voxel_count(); ++id)
        if (frontier_predicate(grid, id)) out.push_back(id);
    return out;
}

namespace {

double mtsp_path_cost(const MtspInstance& inst, int agent, const std::vector<int>& path) {
    if (path.empty()) return 0.0;
    double c = inst.depot(agent, path[0]);
    for (size_t i = 1; i < path.size(); ++i) c += inst.task(path[i - 1], path[i]);
    return c;
}

void enumerate_orders(const MtspInstance& inst, std::vector<std::vector<int>>& paths,
                      int agent, MtspSolution& best) {
    if (agent == inst.n_agents) {
        double mx = 0.0, sum = 0.0;
        for (int a = 0; a < inst.n_agents; ++a) {
            const double c = mtsp_path_cost(inst, a, paths[a]);
            mx = std::max(mx, c);
            sum += c;
        }
        const double obj = mx + inst.epsilon * sum;
        if (paths.empty()) return;
        if (best.paths.empty() || obj < best.objective) {
            best.objective = obj;
            best.paths = paths;
        }
        return;
    }
    std::vector<int>& p = paths[agent];
    std::sort(p.begin(), p.end());
    do {
        enumerate_orders(inst, paths, agent + 1, best);
    } while (std::next_permutation(p.begin(), p.end()));
}

void enumerate_assignments(const MtspInstance& inst, std::vector<std::vector<int>>& paths,
                           int task, MtspSolution& best) {
    if (task == inst.n_tasks) {
        enumerate_orders(inst, paths, 0, best);
        return;
    }
    for (int a = 0; a < inst.n_agents; ++a) {
        paths[a].push_back(task);
        enumerate_assignments(inst, paths, task + 1, best);
        paths[a].pop_back();
    }
}

}  // namespace

MtspSolution exhaustive_mtsp(const MtspInstance& inst) {
    MtspSolution best;
    std::vector<std::vector<int>> paths(static_cast<size_t>(inst.n_agents));
    enumerate_assignments(inst, paths, 0, best);
    return best;
}

}  // namespace surveyor::oracle
