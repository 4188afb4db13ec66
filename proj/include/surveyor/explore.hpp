#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <unordered_set>
#include <vector>

#include "surveyor/grid.hpp"
#include "surveyor/routes.hpp"

namespace surveyor {

struct ExploreParams {
    std::vector<double> sample_radii = {3.0, 5.0};      // m from cluster centroid
    std::vector<double> sample_heights = {-2.0, 0.0, 2.0};
    int yaw_count = 12;
    double max_cluster_extent = 4.0;                    // m, PCA split bound
    double clearance = 0.8;                             // r_s for viewpoints
    MotionLimits limits{2.0, 2.0, 2.0, 2.0};            // explorer dynamics
};

struct FrontierCluster {
    int64_t id = -1;
    std::vector<VoxelId> cells;  // sorted
    Vec3 centroid;
    std::optional<Pose> viewpoint;
    int visible_cells = 0;
    bool dormant() const { return !viewpoint.has_value(); }
};

// Surface-frontier predicate: Free voxel with an Occupied 6-neighbor and an
// Unknown 6-neighbor that are diagonal (26-adjacent) to each other.
bool surface_frontier_predicate(const VoxelGrid& grid, VoxelId id);

// Splits a cell set into pieces whose extent along the first principal axis
// is at most max_extent. Pieces are connected (26) and never fewer than the
// input when a split is needed; sets of <= 3 cells are returned unchanged.
std::vector<std::vector<VoxelId>> split_cluster_pca(const VoxelGrid& grid,
                                                    const std::vector<VoxelId>& cells,
                                                    double max_extent);

// Best candidate viewpoint for a cluster: position ring samples around the
// centroid, yaw facing it, maximizing raycast-visible cluster cells.
struct ViewpointSample {
    Pose pose;
    int visible_cells = 0;
};
std::optional<ViewpointSample> sample_exploration_viewpoint(
    const VoxelGrid& grid, const DistanceField& field,
    const std::vector<VoxelId>& cells, const Vec3& centroid, const ExploreParams& params);

// Incrementally maintained surface-frontier cells and clusters.
class FrontierTracker {
public:
    explicit FrontierTracker(ExploreParams params = {}) : params_(std::move(params)) {}

    // Applies a map update. `changed` comes from integrate_scan. Clusters not
    // touched by the change keep their ids; dormant clusters are retried.
    void update(const VoxelGrid& grid, const DistanceField& field,
                const std::vector<VoxelId>& changed);

    const std::unordered_set<VoxelId>& cells() const { return cells_; }
    const std::map<int64_t, FrontierCluster>& clusters() const { return clusters_; }
    bool exploration_done() const { return clusters_.empty(); }

private:
    ExploreParams params_;
    std::unordered_set<VoxelId> cells_;
    std::map<int64_t, FrontierCluster> clusters_;
    int64_t next_id_ = 0;
};

// ATSP tour over cluster viewpoints from the explorer pose; the first entry
// is the next motion target. Dormant clusters are excluded.
struct ExplorationPlan {
    std::vector<int64_t> cluster_order;
    Pose next_viewpoint;
};
std::optional<ExplorationPlan> plan_exploration_step(
    const VoxelGrid& grid, const Pose& explorer,
    const std::map<int64_t, FrontierCluster>& clusters, const MotionLimits& limits,
    uint64_t seed);

}  // namespace surveyor
