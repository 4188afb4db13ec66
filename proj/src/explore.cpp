#include "surveyor/explore.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "surveyor/linalg.hpp"

namespace surveyor {

bool surface_frontier_predicate(const VoxelGrid& grid, VoxelId id) {
    if (grid.state(id) != VoxelState::Free) return false;
    const auto nbrs = grid.neighbors6(id);
    for (VoxelId o : nbrs) {
        if (grid.state(o) != VoxelState::Occupied) continue;
        const VoxelCoord oc = grid.coord_of(o);
        for (VoxelId u : nbrs) {
            if (grid.state(u) != VoxelState::Unknown) continue;
            const VoxelCoord uc = grid.coord_of(u);
            if (std::max({std::abs(oc.x - uc.x), std::abs(oc.y - uc.y),
                          std::abs(oc.z - uc.z)}) == 1)
                return true;
        }
    }
    return false;
}

namespace {

bool adjacent26(const VoxelCoord& a, const VoxelCoord& b) {
    return std::max({std::abs(a.x - b.x), std::abs(a.y - b.y), std::abs(a.z - b.z)}) == 1;
}

Vec3 centroid_of(const VoxelGrid& grid, const std::vector<VoxelId>& cells) {
    Vec3 c;
    for (VoxelId id : cells) c += grid.center_of(id);
    return c / static_cast<double>(cells.size());
}

// 26-connected components within `pool`; components come out with sorted
// cells, ordered by smallest member for determinism.
std::vector<std::vector<VoxelId>> connected_components(
    const VoxelGrid& grid, const std::unordered_set<VoxelId>& pool) {
    std::vector<VoxelId> sorted(pool.begin(), pool.end());
    std::sort(sorted.begin(), sorted.end());
    std::unordered_set<VoxelId> visited;
    std::vector<std::vector<VoxelId>> out;
    for (VoxelId seed : sorted) {
        if (visited.count(seed)) continue;
        std::vector<VoxelId> comp;
        std::deque<VoxelId> queue{seed};
        visited.insert(seed);
        while (!queue.empty()) {
            const VoxelId cur = queue.front();
            queue.pop_front();
            comp.push_back(cur);
            for (VoxelId n : grid.neighbors26(cur))
                if (pool.count(n) && !visited.count(n)) {
                    visited.insert(n);
                    queue.push_back(n);
                }
        }
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
    }
    return out;
}

}  // namespace

std::vector<std::vector<VoxelId>> split_cluster_pca(const VoxelGrid& grid,
                                                    const std::vector<VoxelId>& cells,
                                                    double max_extent) {
    if (cells.size() <= 3) return {cells};

    const Vec3 mean = centroid_of(grid, cells);
    double xx = 0, xy = 0, xz = 0, yy = 0, yz = 0, zz = 0;
    for (VoxelId id : cells) {
        const Vec3 d = grid.center_of(id) - mean;
        xx += d.x * d.x; xy += d.x * d.y; xz += d.x * d.z;
        yy += d.y * d.y; yz += d.y * d.z; zz += d.z * d.z;
    }
    const auto eig = sym3_eigen(xx, xy, xz, yy, yz, zz);
    const Vec3 axis = eig.vectors[2];  // largest variance

    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (VoxelId id : cells) {
        const double t = (grid.center_of(id) - mean).dot(axis);
        if (first) { lo = hi = t; first = false; }
        lo = std::min(lo, t);
        hi = std::max(hi, t);
    }
    if (hi - lo <= max_extent) return {cells};

    std::unordered_set<VoxelId> below, above;
    for (VoxelId id : cells) {
        if ((grid.center_of(id) - mean).dot(axis) < 0.0)
            below.insert(id);
        else
            above.insert(id);
    }
    // A centroid-plane cut can disconnect a half; re-extract components so
    // every returned piece stays connected.
    std::vector<std::vector<VoxelId>> out;
    for (const auto* half : {&below, &above}) {
        if (half->empty()) continue;
        for (auto& comp : connected_components(grid, *half))
            for (auto& piece : split_cluster_pca(grid, comp, max_extent))
                out.push_back(std::move(piece));
    }
    return out;
}

std::optional<ViewpointSample> sample_exploration_viewpoint(
    const VoxelGrid& grid, const DistanceField& field,
    const std::vector<VoxelId>& cells, const Vec3& centroid,
    const ExploreParams& params) {
    std::optional<ViewpointSample> best;
    for (double radius : params.sample_radii)
        for (int k = 0; k < params.yaw_count; ++k)
            for (double h : params.sample_heights) {
                const double phi = 2.0 * M_PI * k / params.yaw_count;
                const Vec3 pos = centroid + Vec3{radius * std::cos(phi),
                                                 radius * std::sin(phi), h};
                const VoxelId id = grid.id_of(pos);
                if (id < 0 || grid.state(id) != VoxelState::Free) continue;
                if (field.at(id) < params.clearance) continue;
                int visible = 0;
                for (VoxelId cell : cells)
                    if (grid.raycast(pos, grid.center_of(cell)).clear()) ++visible;
                if (visible == 0) continue;
                if (!best || visible > best->visible_cells) {
                    const Vec3 to = centroid - pos;
                    best = ViewpointSample{{pos, std::atan2(to.y, to.x)}, visible};
                }
            }
    return best;
}

void FrontierTracker::update(const VoxelGrid& grid, const DistanceField& field,
                             const std::vector<VoxelId>& changed) {
    // The predicate of v depends on the states of v and its 6-neighbors, so a
    // state change at c can only affect c and nbr6(c).
    std::unordered_set<VoxelId> affected;
    for (VoxelId id : changed) {
        affected.insert(id);
        for (VoxelId n : grid.neighbors6(id)) affected.insert(n);
    }

    std::vector<VoxelId> added, removed;
    for (VoxelId id : affected) {
        const bool now = surface_frontier_predicate(grid, id);
        const bool was = cells_.count(id) > 0;
        if (now && !was) {
            cells_.insert(id);
            added.push_back(id);
        } else if (!now && was) {
            cells_.erase(id);
            removed.push_back(id);
        }
    }
    std::sort(added.begin(), added.end());
    std::sort(removed.begin(), removed.end());

    if (!added.empty() || !removed.empty()) {
        // Dissolve clusters touched by the change, transitively: a rebuilt
        // component may border a surviving cluster, which must then be
        // rebuilt too so cluster membership stays a function of connectivity.
        std::unordered_set<VoxelId> removed_set(removed.begin(), removed.end());
        std::unordered_set<VoxelId> pool(added.begin(), added.end());
        std::unordered_set<int64_t> dirty;

        auto touches_pool = [&](const FrontierCluster& c) {
            for (VoxelId cell : c.cells) {
                if (removed_set.count(cell)) return true;
                const VoxelCoord cc = grid.coord_of(cell);
                for (VoxelId p : pool)
                    if (adjacent26(cc, grid.coord_of(p))) return true;
            }
            return false;
        };

        bool grew = true;
        while (grew) {
            grew = false;
            for (const auto& [id, cluster] : clusters_) {
                if (dirty.count(id)) continue;
                if (touches_pool(cluster)) {
                    dirty.insert(id);
                    for (VoxelId cell : cluster.cells)
                        if (!removed_set.count(cell)) pool.insert(cell);
                    grew = true;
                }
            }
        }
        for (int64_t id : dirty) clusters_.erase(id);

        for (auto& comp : connected_components(grid, pool))
            for (auto& piece : split_cluster_pca(grid, comp, params_.max_cluster_extent)) {
                FrontierCluster cluster;
                cluster.id = next_id_++;
                cluster.centroid = centroid_of(grid, piece);
                cluster.cells = std::move(piece);
                clusters_.emplace(cluster.id, std::move(cluster));
            }
    }

    // (Re)sample viewpoints for new clusters and retry dormant ones; map
    // growth can free candidate space that was blocked earlier.
    for (auto& [id, cluster] : clusters_) {
        if (cluster.viewpoint) continue;
        auto vp = sample_exploration_viewpoint(grid, field, cluster.cells,
                                               cluster.centroid, params_);
        if (vp) {
            cluster.viewpoint = vp->pose;
            cluster.visible_cells = vp->visible_cells;
        }
    }
}

std::optional<ExplorationPlan> plan_exploration_step(
    const VoxelGrid& grid, const Pose& explorer,
    const std::map<int64_t, FrontierCluster>& clusters, const MotionLimits& limits,
    uint64_t seed) {
    std::vector<int64_t> ids;
    std::vector<Pose> nodes;
    for (const auto& [id, cluster] : clusters) {
        if (cluster.dormant()) continue;
        ids.push_back(id);
        nodes.push_back(*cluster.viewpoint);
    }
    if (nodes.empty()) return std::nullopt;

    const AtspMatrix m = build_atsp_matrix(grid, explorer, nodes, limits);
    const AtspSolution sol = solve_atsp(m, seed);

    ExplorationPlan plan;
    for (int node : sol.order) plan.cluster_order.push_back(ids[static_cast<size_t>(node) - 1]);
    plan.next_viewpoint = nodes[static_cast<size_t>(sol.order.front()) - 1];
    return plan;
}

}  // namespace surveyor
