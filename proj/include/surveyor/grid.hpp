#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <unordered_set>
#include <vector>

#include "surveyor/geometry.hpp"

namespace surveyor {

enum class VoxelState : uint8_t { Unknown = 0, Free = 1, Occupied = 2 };

using VoxelId = int64_t;
constexpr VoxelId kInvalidVoxel = -1;

// Result of a single-ray visibility query.
struct RaycastResult {
    enum class Kind { Clear, Blocked, ReachedOccupied } kind = Kind::Clear;
    VoxelId voxel = kInvalidVoxel;

    bool clear() const { return kind == Kind::Clear; }
    bool reached_occupied() const { return kind == Kind::ReachedOccupied; }
};

struct PathResult {
    std::vector<Vec3> points;
    double length = 0.0;
};

class DistanceField;

// Dense voxel occupancy map with per-voxel point storage, surface flags and
// extraction flags. Copyable by value; planners work on snapshots.
class VoxelGrid {
public:
    static constexpr int kMaxPointsPerVoxel = 32;

    VoxelGrid() = default;
    VoxelGrid(const Vec3& origin, double resolution, const VoxelCoord& dims,
              VoxelState initial = VoxelState::Unknown, uint64_t reservoir_seed = 0);

    const Vec3& origin() const { return origin_; }
    double resolution() const { return resolution_; }
    const VoxelCoord& dims() const { return dims_; }
    int64_t voxel_count() const { return static_cast<int64_t>(state_.size()); }
    Aabb bounds() const;

    bool in_bounds(const VoxelCoord& c) const {
        return c.x >= 0 && c.y >= 0 && c.z >= 0 && c.x < dims_.x && c.y < dims_.y &&
               c.z < dims_.z;
    }
    bool in_bounds(const Vec3& p) const { return in_bounds(coord_of(p)); }

    VoxelId id_of(const VoxelCoord& c) const {
        return static_cast<VoxelId>(c.x) +
               static_cast<VoxelId>(dims_.x) *
                   (static_cast<VoxelId>(c.y) + static_cast<VoxelId>(dims_.y) * c.z);
    }
    VoxelCoord coord_of(VoxelId id) const {
        const int64_t x = id % dims_.x;
        const int64_t rest = id / dims_.x;
        return {static_cast<int>(x), static_cast<int>(rest % dims_.y),
                static_cast<int>(rest / dims_.y)};
    }
    VoxelCoord coord_of(const Vec3& p) const {
        return {static_cast<int>(std::floor((p.x - origin_.x) / resolution_)),
                static_cast<int>(std::floor((p.y - origin_.y) / resolution_)),
                static_cast<int>(std::floor((p.z - origin_.z) / resolution_))};
    }
    VoxelId id_of(const Vec3& p) const {
        const VoxelCoord c = coord_of(p);
        return in_bounds(c) ? id_of(c) : kInvalidVoxel;
    }
    Vec3 center_of(VoxelId id) const {
        const VoxelCoord c = coord_of(id);
        return origin_ + Vec3{(c.x + 0.5) * resolution_, (c.y + 0.5) * resolution_,
                              (c.z + 0.5) * resolution_};
    }

    VoxelState state(VoxelId id) const { return state_[static_cast<size_t>(id)]; }
    VoxelState state(const VoxelCoord& c) const {
        return in_bounds(c) ? state_[static_cast<size_t>(id_of(c))] : VoxelState::Unknown;
    }
    bool is_free(VoxelId id) const { return id >= 0 && state(id) == VoxelState::Free; }
    bool is_free(const Vec3& p) const {
        const VoxelId id = id_of(p);
        return id >= 0 && state(id) == VoxelState::Free;
    }
    bool is_surface(VoxelId id) const { return surface_[static_cast<size_t>(id)]; }
    bool is_extracted(VoxelId id) const { return extracted_[static_cast<size_t>(id)]; }
    const std::vector<Vec3>& points(VoxelId id) const {
        return points_[static_cast<size_t>(id)];
    }

    void set_state(VoxelId id, VoxelState s) { state_[static_cast<size_t>(id)] = s; }
    void add_point(VoxelId id, const Vec3& p);
    // Marks a voxel extracted. Returns false if it was already extracted.
    bool mark_extracted(VoxelId id);
    int64_t extraction_count() const { return extraction_count_; }

    std::vector<VoxelId> neighbors6(VoxelId id) const;
    std::vector<VoxelId> neighbors26(VoxelId id) const;

    // Surface predicate: Occupied with at least one Free 6-neighbor.
    bool surface_predicate(VoxelId id) const;
    // Re-evaluates the surface predicate for each candidate, updates the
    // cached flags and returns the candidates that are surface voxels.
    std::vector<VoxelId> classify_surface(const std::vector<VoxelId>& candidates);
    std::vector<VoxelId> all_surface_voxels() const;

    // Integrates one sensor scan. Traversed voxels before a hit become Free,
    // hit voxels become Occupied (sticky). Returns ids whose state or surface
    // flag changed, in deterministic order.
    std::vector<VoxelId> integrate_scan(const Vec3& sensor_origin,
                                        const std::vector<Vec3>& hits,
                                        const std::vector<Vec3>& misses);

    RaycastResult raycast(const Vec3& origin, const Vec3& target) const;

    // First Occupied voxel on the segment origin->end (excluding the origin
    // voxel), with the entry parameter t in [0, 1] along the segment.
    struct RayHit {
        VoxelId voxel;
        double entry_t;
    };
    std::optional<RayHit> first_occupied(const Vec3& origin, const Vec3& end) const;

    // 26-connected A* over Free voxels between the voxels containing a and b.
    // With min_clearance > 0 every path voxel must satisfy field(v) >= clearance.
    std::optional<PathResult> astar_path(const Vec3& a, const Vec3& b,
                                         double min_clearance = 0.0,
                                         const DistanceField* field = nullptr) const;

private:
    // Walks the voxels from `from` toward `to`, invoking visit(id, entry_t) for
    // each in-bounds voxel. visit returns false to stop.
    template <typename Visit>
    void walk_ray(const Vec3& from, const Vec3& to, Visit&& visit) const;

    Vec3 origin_;
    double resolution_ = 1.0;
    VoxelCoord dims_;
    std::vector<VoxelState> state_;
    std::vector<uint8_t> surface_;
    std::vector<uint8_t> extracted_;
    std::vector<std::vector<Vec3>> points_;
    std::vector<uint32_t> point_seen_;  // reservoir counters
    int64_t extraction_count_ = 0;
    std::mt19937_64 reservoir_rng_{0};
};

// Per-voxel distance to the nearest Occupied voxel center, over the whole grid.
class DistanceField {
public:
    DistanceField() = default;
    // With unknown_as_occupied the field measures distance to non-Free
    // space, the conservative variant motion planners clear against.
    DistanceField(const VoxelGrid& grid, double max_distance,
                  bool unknown_as_occupied = false);

    double at(VoxelId id) const { return dist_[static_cast<size_t>(id)]; }
    double at(const VoxelGrid& grid, const Vec3& p) const {
        const VoxelId id = grid.id_of(p);
        return id >= 0 ? at(id) : 0.0;
    }
    double max_distance() const { return max_distance_; }
    bool empty() const { return dist_.empty(); }

private:
    std::vector<double> dist_;
    double max_distance_ = 0.0;
};

// Builds a ground-truth grid: Occupied where points fall, Free elsewhere.
// Throws std::invalid_argument naming the first out-of-bounds point index.
VoxelGrid voxelize_scene(const std::vector<Vec3>& points, double resolution,
                         const Aabb& bounds);

// Planning grid with the same geometry as `truth`, all Unknown.
VoxelGrid make_planning_grid(const VoxelGrid& truth, uint64_t reservoir_seed = 0);

}  // namespace surveyor
