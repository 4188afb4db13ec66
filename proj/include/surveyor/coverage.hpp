#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "surveyor/explore.hpp"
#include "surveyor/grid.hpp"
#include "surveyor/sensors.hpp"

namespace surveyor {

struct SurfacePoint {
    int64_t id = -1;
    Vec3 position;
    Vec3 normal;  // unit; sign ambiguous
    bool covered = false;
};

struct CoverageParams {
    double standoff = 5.0;            // D: viewpoint distance along the normal
    double merge_radius = 2.5;        // r_q for the gravitation update
    double coverage_threshold = 0.95;
    int max_rounds = 5;
    int normal_neighbors = 10;
    double clearance = 0.8;           // r_s
    double frontier_near_voxels = 2.0;  // exclusion radius around frontiers
    CameraModel camera{80.0, 60.0, 12.5};
};

// Bidirectional point<->viewpoint coverage index.
struct CoverageIndex {
    std::unordered_map<int64_t, int64_t> point_to_viewpoint;
    std::unordered_map<int64_t, std::vector<int64_t>> viewpoint_to_points;

    void bind(int64_t point, int64_t viewpoint) {
        point_to_viewpoint[point] = viewpoint;
        viewpoint_to_points[viewpoint].push_back(point);
    }
};

// Euclidean (26-adjacency) clusters of non-extracted surface voxels.
std::vector<std::vector<VoxelId>> surface_clusters(const VoxelGrid& grid);

// Clusters with no surface-frontier cell within the exclusion radius of any
// member voxel: surfaces whose neighborhood is fully explored.
std::vector<std::vector<VoxelId>> detect_explored_surface(
    const VoxelGrid& grid, const std::unordered_set<VoxelId>& frontier_cells,
    const std::vector<std::vector<VoxelId>>& clusters, double near_radius_voxels);

// Collects the stored points of every member voxel and marks the voxels
// extracted; a voxel's points are returned at most once over the whole run.
std::vector<SurfacePoint> extract_new_points(VoxelGrid& grid,
                                             const std::vector<std::vector<VoxelId>>& s_exp,
                                             int64_t& next_point_id);

// k-nearest-neighbor plane-fit normals over the batch; isolated points fall
// back to the voxel-face direction toward an adjacent Free voxel.
void estimate_normals(std::vector<SurfacePoint>& points, int k, const VoxelGrid& grid);

// Normal-guided viewpoint candidates at distance D, both normal signs,
// filtered to free, clear-of-obstacle positions with line of sight.
std::vector<Viewpoint5D> sample_viewpoints(const std::vector<SurfacePoint>& uncovered,
                                           const VoxelGrid& grid,
                                           const DistanceField& field,
                                           const CoverageParams& params,
                                           int64_t& next_vp_id);

// Fills n_obs / n_cover and the point->viewpoint index over the candidates.
CoverageIndex evaluate_coverage(std::vector<Viewpoint5D>& candidates,
                                const std::vector<SurfacePoint>& uncovered,
                                const VoxelGrid& grid, const CameraModel& cam);

// Gravitation merge: strong viewpoints absorb weaker neighbors within r_q,
// which become dormant. Returns ids of surviving (non-dormant) candidates in
// processing order. Updated poses are re-validated against the grid.
std::vector<int64_t> gravitation_update(std::vector<Viewpoint5D>& candidates,
                                        double r_q, const VoxelGrid& grid,
                                        const DistanceField& field, double clearance);

struct CoverageCycleStats {
    int64_t cycle = 0;
    int64_t new_points = 0;
    int64_t new_viewpoints = 0;
    double coverage_rate = 1.0;
    bool threshold_missed = false;
};

// Incremental coverage state: accepted viewpoints (CV_hq), the carried
// uncovered point set, and the global point->viewpoint coverage index.
class CoverageTracker {
public:
    explicit CoverageTracker(CoverageParams params = {}) : params_(std::move(params)) {}

    // One generation cycle over freshly extracted points. Returns the stats
    // line; newly accepted viewpoints are appended to viewpoints().
    CoverageCycleStats coverage_cycle(const VoxelGrid& grid, const DistanceField& field,
                                      std::vector<SurfacePoint> new_points);

    // Retires accepted viewpoints whose whole cover set is visible from the
    // remaining ones; their points rebind. Viewpoints in `frozen` (already
    // executed) are kept. Returns the retired ids, smallest covers first.
    std::vector<int64_t> prune_redundant(const VoxelGrid& grid,
                                         const std::unordered_set<int64_t>& frozen);

    const std::vector<Viewpoint5D>& viewpoints() const { return viewpoints_; }
    const CoverageIndex& index() const { return index_; }
    const std::vector<SurfacePoint>& carried_uncovered() const { return uncovered_; }
    const std::vector<SurfacePoint>& all_points() const { return all_points_; }
    const CoverageParams& params() const { return params_; }
    int64_t viewpoints_added_since(size_t mark) const {
        return static_cast<int64_t>(viewpoints_.size() - mark);
    }

private:
    CoverageParams params_;
    std::vector<Viewpoint5D> viewpoints_;  // CV_hq, id == publication order
    std::vector<SurfacePoint> uncovered_;  // PT_unc carried across cycles
    std::vector<SurfacePoint> all_points_; // every extracted point, flags updated
    std::unordered_map<int64_t, size_t> point_index_;  // id -> all_points_ slot
    CoverageIndex index_;
    int64_t next_vp_id_ = 0;
    int64_t cycle_ = 0;
};

}  // namespace surveyor
