#include "surveyor/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace surveyor {

namespace {

constexpr int kStep6[6][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0},
                              {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};

}  // namespace

VoxelGrid::VoxelGrid(const Vec3& origin, double resolution, const VoxelCoord& dims,
                     VoxelState initial, uint64_t reservoir_seed)
    : origin_(origin),
      resolution_(resolution),
      dims_(dims),
      reservoir_rng_(reservoir_seed) {
    const size_t n = static_cast<size_t>(dims.x) * dims.y * dims.z;
    state_.assign(n, initial);
    surface_.assign(n, 0);
    extracted_.assign(n, 0);
    points_.resize(n);
    point_seen_.assign(n, 0);
}

Aabb VoxelGrid::bounds() const {
    return {origin_, origin_ + Vec3{dims_.x * resolution_, dims_.y * resolution_,
                                    dims_.z * resolution_}};
}

void VoxelGrid::add_point(VoxelId id, const Vec3& p) {
    auto& pts = points_[static_cast<size_t>(id)];
    uint32_t& seen = point_seen_[static_cast<size_t>(id)];
    ++seen;
    if (pts.size() < kMaxPointsPerVoxel) {
        pts.push_back(p);
        return;
    }
    // Reservoir: keep each of the `seen` points with probability cap/seen.
    std::uniform_int_distribution<uint32_t> pick(0, seen - 1);
    const uint32_t slot = pick(reservoir_rng_);
    if (slot < kMaxPointsPerVoxel) pts[slot] = p;
}

bool VoxelGrid::mark_extracted(VoxelId id) {
    uint8_t& flag = extracted_[static_cast<size_t>(id)];
    if (flag) return false;
    flag = 1;
    ++extraction_count_;
    return true;
}

std::vector<VoxelId> VoxelGrid::neighbors6(VoxelId id) const {
    const VoxelCoord c = coord_of(id);
    std::vector<VoxelId> out;
    out.reserve(6);
    for (const auto& s : kStep6) {
        const VoxelCoord n{c.x + s[0], c.y + s[1], c.z + s[2]};
        if (in_bounds(n)) out.push_back(id_of(n));
    }
    return out;
}

std::vector<VoxelId> VoxelGrid::neighbors26(VoxelId id) const {
    const VoxelCoord c = coord_of(id);
    std::vector<VoxelId> out;
    out.reserve(26);
    for (int dz = -1; dz <= 1; ++dz)
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx) {
                if (dx == 0 && dy == 0 && dz == 0) continue;
                const VoxelCoord n{c.x + dx, c.y + dy, c.z + dz};
                if (in_bounds(n)) out.push_back(id_of(n));
            }
    return out;
}

bool VoxelGrid::surface_predicate(VoxelId id) const {
    if (state(id) != VoxelState::Occupied) return false;
    const VoxelCoord c = coord_of(id);
    for (const auto& s : kStep6) {
        const VoxelCoord n{c.x + s[0], c.y + s[1], c.z + s[2]};
        if (in_bounds(n) && state(n) == VoxelState::Free) return true;
    }
    return false;
}

std::vector<VoxelId> VoxelGrid::classify_surface(const std::vector<VoxelId>& candidates) {
    std::vector<VoxelId> out;
    for (VoxelId id : candidates) {
        const bool s = surface_predicate(id);
        surface_[static_cast<size_t>(id)] = s ? 1 : 0;
        if (s) out.push_back(id);
    }
    return out;
}

std::vector<VoxelId> VoxelGrid::all_surface_voxels() const {
    std::vector<VoxelId> out;
    for (VoxelId id = 0; id < voxel_count(); ++id)
        if (surface_[static_cast<size_t>(id)]) out.push_back(id);
    return out;
}

template <typename Visit>
void VoxelGrid::walk_ray(const Vec3& from, const Vec3& to, Visit&& visit) const {
    // Amanatides & Woo traversal in grid coordinates. Face-crossing ties are
    // resolved x, then y, then z.
    const Vec3 rel0 = (from - origin_) / resolution_;
    const Vec3 rel1 = (to - origin_) / resolution_;
    const Vec3 dir = rel1 - rel0;
    const double seg_len = dir.norm();

    int x = static_cast<int>(std::floor(rel0.x));
    int y = static_cast<int>(std::floor(rel0.y));
    int z = static_cast<int>(std::floor(rel0.z));
    const int ex = static_cast<int>(std::floor(rel1.x));
    const int ey = static_cast<int>(std::floor(rel1.y));
    const int ez = static_cast<int>(std::floor(rel1.z));

    const int step_x = dir.x > 0 ? 1 : (dir.x < 0 ? -1 : 0);
    const int step_y = dir.y > 0 ? 1 : (dir.y < 0 ? -1 : 0);
    const int step_z = dir.z > 0 ? 1 : (dir.z < 0 ? -1 : 0);

    constexpr double inf = std::numeric_limits<double>::infinity();
    auto t_first = [](double p, double d, int step) {
        if (step == 0) return inf;
        const double boundary = step > 0 ? std::floor(p) + 1.0 : std::floor(p);
        return (boundary - p) / d;
    };
    double t_max_x = t_first(rel0.x, dir.x, step_x);
    double t_max_y = t_first(rel0.y, dir.y, step_y);
    double t_max_z = t_first(rel0.z, dir.z, step_z);
    const double t_dx = step_x ? std::abs(1.0 / dir.x) : inf;
    const double t_dy = step_y ? std::abs(1.0 / dir.y) : inf;
    const double t_dz = step_z ? std::abs(1.0 / dir.z) : inf;

    double t = 0.0;  // entry parameter of the current voxel, in [0, 1]
    // Step count bound guards against degenerate float cases.
    const int64_t max_steps =
        3 + std::abs(ex - x) + std::abs(ey - y) + std::abs(ez - z) +
        static_cast<int64_t>(seg_len) * 4;
    for (int64_t i = 0; i < max_steps; ++i) {
        const VoxelCoord c{x, y, z};
        if (in_bounds(c)) {
            if (!visit(id_of(c), t)) return;
        }
        if (x == ex && y == ey && z == ez) return;
        if (t_max_x <= t_max_y && t_max_x <= t_max_z) {
            t = t_max_x;
            x += step_x;
            t_max_x += t_dx;
        } else if (t_max_y <= t_max_z) {
            t = t_max_y;
            y += step_y;
            t_max_y += t_dy;
        } else {
            t = t_max_z;
            z += step_z;
            t_max_z += t_dz;
        }
        if (t > 1.0) return;
    }
}

std::vector<VoxelId> VoxelGrid::integrate_scan(const Vec3& sensor_origin,
                                               const std::vector<Vec3>& hits,
                                               const std::vector<Vec3>& misses) {
    std::vector<VoxelId> touched;
    auto set_if_changed = [&](VoxelId id, VoxelState s) {
        VoxelState& cur = state_[static_cast<size_t>(id)];
        if (cur == s) return;
        if (cur == VoxelState::Occupied) return;  // Occupied is sticky
        cur = s;
        touched.push_back(id);
    };

    for (const Vec3& hit : hits) {
        const VoxelId hit_id = id_of(hit);
        walk_ray(sensor_origin, hit, [&](VoxelId id, double) {
            if (id == hit_id) return false;
            set_if_changed(id, VoxelState::Free);
            return true;
        });
        if (hit_id >= 0) {
            if (state(hit_id) != VoxelState::Occupied) {
                state_[static_cast<size_t>(hit_id)] = VoxelState::Occupied;
                touched.push_back(hit_id);
            }
            add_point(hit_id, hit);
        }
    }
    for (const Vec3& end : misses) {
        walk_ray(sensor_origin, end, [&](VoxelId id, double) {
            set_if_changed(id, VoxelState::Free);
            return true;
        });
    }

    // Surface flags must be refreshed for every touched voxel and its
    // 6-neighbors; flag flips count as changes too.
    std::vector<VoxelId> changed = touched;
    std::unordered_set<VoxelId> seen(touched.begin(), touched.end());
    std::vector<VoxelId> recheck = touched;
    for (VoxelId id : touched)
        for (VoxelId n : neighbors6(id)) recheck.push_back(n);
    std::unordered_set<VoxelId> rechecked;
    for (VoxelId id : recheck) {
        if (!rechecked.insert(id).second) continue;
        const bool s = surface_predicate(id);
        if (surface_[static_cast<size_t>(id)] != (s ? 1 : 0)) {
            surface_[static_cast<size_t>(id)] = s ? 1 : 0;
            if (seen.insert(id).second) changed.push_back(id);
        }
    }
    std::sort(changed.begin(), changed.end());
    changed.erase(std::unique(changed.begin(), changed.end()), changed.end());
    return changed;
}

RaycastResult VoxelGrid::raycast(const Vec3& origin, const Vec3& target) const {
    const VoxelId origin_id = id_of(origin);
    const VoxelId target_id = id_of(target);
    RaycastResult result;
    walk_ray(origin, target, [&](VoxelId id, double) {
        if (id == origin_id) return true;
        const VoxelState s = state(id);
        if (s == VoxelState::Occupied) {
            if (id == target_id) {
                result = {RaycastResult::Kind::ReachedOccupied, id};
            } else {
                result = {RaycastResult::Kind::Blocked, id};
            }
            return false;
        }
        if (s == VoxelState::Unknown && id != target_id) {
            result = {RaycastResult::Kind::Blocked, id};
            return false;
        }
        return true;
    });
    return result;
}

std::optional<VoxelGrid::RayHit> VoxelGrid::first_occupied(const Vec3& origin,
                                                           const Vec3& end) const {
    const VoxelId origin_id = id_of(origin);
    std::optional<RayHit> hit;
    walk_ray(origin, end, [&](VoxelId id, double t) {
        if (id == origin_id) return true;
        if (state(id) == VoxelState::Occupied) {
            hit = RayHit{id, t};
            return false;
        }
        return true;
    });
    return hit;
}

std::optional<PathResult> VoxelGrid::astar_path(const Vec3& a, const Vec3& b,
                                                double min_clearance,
                                                const DistanceField* field) const {
    const VoxelId start = id_of(a);
    const VoxelId goal = id_of(b);
    if (start < 0 || goal < 0) return std::nullopt;
    auto passable = [&](VoxelId id) {
        if (state(id) != VoxelState::Free) return false;
        if (min_clearance > 0.0 && field && field->at(id) < min_clearance) return false;
        return true;
    };
    if (!passable(start) || !passable(goal)) return std::nullopt;
    if (start == goal) return PathResult{{a}, 0.0};

    const Vec3 goal_center = center_of(goal);
    struct Node {
        double f;
        double g;
        VoxelId id;
        bool operator>(const Node& o) const {
            return f > o.f || (f == o.f && id > o.id);
        }
    };
    std::priority_queue<Node, std::vector<Node>, std::greater<Node>> open;
    std::unordered_map<VoxelId, double> g_score;
    std::unordered_map<VoxelId, VoxelId> came_from;
    auto h = [&](VoxelId id) { return (center_of(id) - goal_center).norm(); };
    g_score[start] = 0.0;
    open.push({h(start), 0.0, start});

    while (!open.empty()) {
        const Node cur = open.top();
        open.pop();
        if (cur.g > g_score[cur.id] + 1e-12) continue;
        if (cur.id == goal) break;
        const VoxelCoord c = coord_of(cur.id);
        const Vec3 cur_center = center_of(cur.id);
        for (int dz = -1; dz <= 1; ++dz)
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    if (dx == 0 && dy == 0 && dz == 0) continue;
                    const VoxelCoord nc{c.x + dx, c.y + dy, c.z + dz};
                    if (!in_bounds(nc)) continue;
                    const VoxelId nid = id_of(nc);
                    if (!passable(nid)) continue;
                    const double w = (center_of(nid) - cur_center).norm();
                    const double tentative = cur.g + w;
                    auto it = g_score.find(nid);
                    if (it == g_score.end() || tentative < it->second - 1e-12) {
                        g_score[nid] = tentative;
                        came_from[nid] = cur.id;
                        open.push({tentative + h(nid), tentative, nid});
                    }
                }
    }

    auto git = g_score.find(goal);
    if (git == g_score.end()) return std::nullopt;

    std::vector<VoxelId> rev;
    for (VoxelId id = goal; id != start; id = came_from.at(id)) rev.push_back(id);
    rev.push_back(start);
    std::reverse(rev.begin(), rev.end());

    PathResult out;
    out.points.push_back(a);
    for (size_t i = 1; i + 1 < rev.size(); ++i) out.points.push_back(center_of(rev[i]));
    out.points.push_back(b);
    for (size_t i = 1; i < out.points.size(); ++i)
        out.length += (out.points[i] - out.points[i - 1]).norm();
    return out;
}

namespace {

// 1D squared-distance transform (lower envelope of parabolas),
// Felzenszwalb & Huttenlocher.
void edt_1d(const std::vector<double>& f, std::vector<double>& d) {
    const int n = static_cast<int>(f.size());
    d.assign(f.size(), 0.0);
    std::vector<int> v(f.size());
    std::vector<double> z(f.size() + 1);
    constexpr double inf = std::numeric_limits<double>::infinity();
    int k = 0;
    v[0] = 0;
    z[0] = -inf;
    z[1] = inf;
    for (int q = 1; q < n; ++q) {
        double s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * q - 2.0 * v[k]);
        while (s <= z[k]) {
            --k;
            s = ((f[q] + q * q) - (f[v[k]] + v[k] * v[k])) / (2.0 * q - 2.0 * v[k]);
        }
        ++k;
        v[k] = q;
        z[k] = s;
        z[k + 1] = inf;
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[k + 1] < q) ++k;
        const double dq = q - v[k];
        d[q] = dq * dq + f[v[k]];
    }
}

}  // namespace

DistanceField::DistanceField(const VoxelGrid& grid, double max_distance,
                             bool unknown_as_occupied)
    : max_distance_(max_distance) {
    const VoxelCoord dims = grid.dims();
    const size_t n = static_cast<size_t>(grid.voxel_count());
    // Large finite sentinel keeps the parabola envelope code branch-free; any
    // result above max_distance is capped below.
    const double diag = static_cast<double>(dims.x) + dims.y + dims.z + 1.0;
    const double far2 = diag * diag;
    std::vector<double> sq(n);
    for (VoxelId id = 0; id < grid.voxel_count(); ++id) {
        const VoxelState s = grid.state(id);
        const bool obstacle = s == VoxelState::Occupied ||
                              (unknown_as_occupied && s == VoxelState::Unknown);
        sq[static_cast<size_t>(id)] = obstacle ? 0.0 : far2;
    }

    auto idx = [&](int x, int y, int z) {
        return static_cast<size_t>(x) +
               static_cast<size_t>(dims.x) *
                   (static_cast<size_t>(y) + static_cast<size_t>(dims.y) * z);
    };

    std::vector<double> line, out;
    // X pass
    line.resize(static_cast<size_t>(dims.x));
    for (int z = 0; z < dims.z; ++z)
        for (int y = 0; y < dims.y; ++y) {
            for (int x = 0; x < dims.x; ++x) line[x] = sq[idx(x, y, z)];
            edt_1d(line, out);
            for (int x = 0; x < dims.x; ++x) sq[idx(x, y, z)] = out[x];
        }
    // Y pass
    line.resize(static_cast<size_t>(dims.y));
    for (int z = 0; z < dims.z; ++z)
        for (int x = 0; x < dims.x; ++x) {
            for (int y = 0; y < dims.y; ++y) line[y] = sq[idx(x, y, z)];
            edt_1d(line, out);
            for (int y = 0; y < dims.y; ++y) sq[idx(x, y, z)] = out[y];
        }
    // Z pass
    line.resize(static_cast<size_t>(dims.z));
    for (int y = 0; y < dims.y; ++y)
        for (int x = 0; x < dims.x; ++x) {
            for (int z = 0; z < dims.z; ++z) line[z] = sq[idx(x, y, z)];
            edt_1d(line, out);
            for (int z = 0; z < dims.z; ++z) sq[idx(x, y, z)] = out[z];
        }

    const double res = grid.resolution();
    dist_.resize(n);
    for (size_t i = 0; i < n; ++i) {
        const double d = std::isinf(sq[i]) ? max_distance : std::sqrt(sq[i]) * res;
        dist_[i] = std::min(d, max_distance);
    }
}

VoxelGrid voxelize_scene(const std::vector<Vec3>& points, double resolution,
                         const Aabb& bounds) {
    if (resolution <= 0.0) throw std::invalid_argument("resolution must be positive");
    const Vec3 ext = bounds.extent();
    if (ext.x <= 0.0 || ext.y <= 0.0 || ext.z <= 0.0)
        throw std::invalid_argument("degenerate bounds");
    const VoxelCoord dims{static_cast<int>(std::ceil(ext.x / resolution)),
                          static_cast<int>(std::ceil(ext.y / resolution)),
                          static_cast<int>(std::ceil(ext.z / resolution))};
    VoxelGrid grid(bounds.min, resolution, dims, VoxelState::Free);
    for (size_t i = 0; i < points.size(); ++i) {
        const VoxelId id = grid.id_of(points[i]);
        if (id < 0)
            throw std::invalid_argument("point " + std::to_string(i) +
                                        " outside scene bounds");
        grid.set_state(id, VoxelState::Occupied);
        grid.add_point(id, points[i]);
    }
    // Ground-truth surface flags, for oracle/inspection use.
    std::vector<VoxelId> all(static_cast<size_t>(grid.voxel_count()));
    for (VoxelId id = 0; id < grid.voxel_count(); ++id) all[static_cast<size_t>(id)] = id;
    grid.classify_surface(all);
    return grid;
}

VoxelGrid make_planning_grid(const VoxelGrid& truth, uint64_t reservoir_seed) {
    return VoxelGrid(truth.origin(), truth.resolution(), truth.dims(),
                     VoxelState::Unknown, reservoir_seed);
}

}  // namespace surveyor
