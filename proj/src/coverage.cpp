#include "surveyor/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "surveyor/linalg.hpp"

namespace surveyor {

std::vector<std::vector<VoxelId>> surface_clusters(const VoxelGrid& grid) {
    std::unordered_set<VoxelId> pool;
    for (VoxelId id = 0; id < grid.voxel_count(); ++id)
        if (grid.is_surface(id) && !grid.is_extracted(id)) pool.insert(id);

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

std::vector<std::vector<VoxelId>> detect_explored_surface(
    const VoxelGrid& grid, const std::unordered_set<VoxelId>& frontier_cells,
    const std::vector<std::vector<VoxelId>>& clusters, double near_radius_voxels) {
    const double r = near_radius_voxels * grid.resolution();
    std::vector<Vec3> frontier_centers;
    frontier_centers.reserve(frontier_cells.size());
    for (VoxelId f : frontier_cells) frontier_centers.push_back(grid.center_of(f));

    std::vector<std::vector<VoxelId>> out;
    for (const auto& cluster : clusters) {
        bool near_frontier = false;
        for (VoxelId v : cluster) {
            const Vec3 c = grid.center_of(v);
            for (const Vec3& f : frontier_centers)
                if ((f - c).norm() <= r) {
                    near_frontier = true;
                    break;
                }
            if (near_frontier) break;
        }
        if (!near_frontier) out.push_back(cluster);
    }
    return out;
}

std::vector<SurfacePoint> extract_new_points(
    VoxelGrid& grid, const std::vector<std::vector<VoxelId>>& s_exp,
    int64_t& next_point_id) {
    std::vector<SurfacePoint> out;
    for (const auto& cluster : s_exp)
        for (VoxelId v : cluster) {
            if (!grid.mark_extracted(v)) continue;
            for (const Vec3& p : grid.points(v)) {
                SurfacePoint sp;
                sp.id = next_point_id++;
                sp.position = p;
                out.push_back(sp);
            }
        }
    return out;
}

namespace {

Vec3 face_normal_fallback(const VoxelGrid& grid, const Vec3& position) {
    const VoxelId id = grid.id_of(position);
    if (id >= 0) {
        const VoxelCoord c = grid.coord_of(id);
        constexpr int steps[6][3] = {{0, 0, 1}, {0, 0, -1}, {1, 0, 0},
                                     {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}};
        for (const auto& s : steps) {
            const VoxelCoord n{c.x + s[0], c.y + s[1], c.z + s[2]};
            if (grid.in_bounds(n) && grid.state(n) == VoxelState::Free)
                return Vec3{static_cast<double>(s[0]), static_cast<double>(s[1]),
                            static_cast<double>(s[2])};
        }
    }
    return {0, 0, 1};
}

}  // namespace

void estimate_normals(std::vector<SurfacePoint>& points, int k, const VoxelGrid& grid) {
    const size_t n = points.size();
    for (size_t i = 0; i < n; ++i) {
        // k nearest neighbors within the batch (brute force: batches are the
        // freshly extracted points of a few voxels).
        std::vector<std::pair<double, size_t>> dists;
        dists.reserve(n - 1);
        for (size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            dists.push_back({(points[j].position - points[i].position).squared_norm(), j});
        }
        const size_t kk = std::min(static_cast<size_t>(k), dists.size());
        std::partial_sort(dists.begin(), dists.begin() + kk, dists.end());

        if (kk < 2) {
            points[i].normal = face_normal_fallback(grid, points[i].position);
            continue;
        }

        Vec3 mean = points[i].position;
        for (size_t m = 0; m < kk; ++m) mean += points[dists[m].second].position;
        mean = mean / static_cast<double>(kk + 1);

        double xx = 0, xy = 0, xz = 0, yy = 0, yz = 0, zz = 0;
        auto accumulate = [&](const Vec3& p) {
            const Vec3 d = p - mean;
            xx += d.x * d.x; xy += d.x * d.y; xz += d.x * d.z;
            yy += d.y * d.y; yz += d.y * d.z; zz += d.z * d.z;
        };
        accumulate(points[i].position);
        for (size_t m = 0; m < kk; ++m) accumulate(points[dists[m].second].position);

        const auto eig = sym3_eigen(xx, xy, xz, yy, yz, zz);
        const Vec3 normal = eig.vectors[0];  // smallest variance
        if (normal.norm() < 0.5) {
            points[i].normal = face_normal_fallback(grid, points[i].position);
        } else {
            points[i].normal = normal;
        }
    }
}

std::vector<Viewpoint5D> sample_viewpoints(const std::vector<SurfacePoint>& uncovered,
                                           const VoxelGrid& grid,
                                           const DistanceField& field,
                                           const CoverageParams& params,
                                           int64_t& next_vp_id) {
    std::vector<Viewpoint5D> out;
    for (const SurfacePoint& pt : uncovered) {
        for (double sign : {1.0, -1.0}) {
            const Vec3 nv = pt.normal * sign;
            const Vec3 pos = pt.position + nv * params.standoff;
            const VoxelId id = grid.id_of(pos);
            if (id < 0 || grid.state(id) != VoxelState::Free) continue;
            if (field.at(id) < params.clearance) continue;
            const RaycastResult rc = grid.raycast(pos, pt.position);
            if (!(rc.reached_occupied() && rc.voxel == grid.id_of(pt.position))) continue;

            Viewpoint5D vp;
            vp.id = next_vp_id++;
            vp.position = pos;
            vp.pitch = std::atan2(nv.z, std::sqrt(nv.x * nv.x + nv.y * nv.y));
            // Looking straight up/down leaves yaw undefined.
            vp.yaw = std::abs(nv.z) > 0.999 ? 0.0 : std::atan2(-nv.y, -nv.x);
            out.push_back(vp);
        }
    }
    return out;
}

CoverageIndex evaluate_coverage(std::vector<Viewpoint5D>& candidates,
                                const std::vector<SurfacePoint>& uncovered,
                                const VoxelGrid& grid, const CameraModel& cam) {
    // visible[p] = candidate indexes seeing point p
    std::vector<std::vector<size_t>> visible(uncovered.size());
    for (size_t c = 0; c < candidates.size(); ++c) {
        candidates[c].n_obs = 0;
        candidates[c].n_cover = 0;
        for (size_t p = 0; p < uncovered.size(); ++p)
            if (camera_visible(grid, candidates[c], uncovered[p].position, cam)) {
                ++candidates[c].n_obs;
                visible[p].push_back(c);
            }
    }

    CoverageIndex index;
    for (size_t p = 0; p < uncovered.size(); ++p) {
        if (visible[p].empty()) continue;
        size_t best = visible[p][0];
        for (size_t c : visible[p])
            if (candidates[c].n_obs > candidates[best].n_obs ||
                (candidates[c].n_obs == candidates[best].n_obs &&
                 candidates[c].id < candidates[best].id))
                best = c;
        ++candidates[best].n_cover;
        index.bind(uncovered[p].id, candidates[best].id);
    }
    return index;
}

std::vector<int64_t> gravitation_update(std::vector<Viewpoint5D>& candidates,
                                        double r_q, const VoxelGrid& grid,
                                        const DistanceField& field, double clearance) {
    std::vector<size_t> order(candidates.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        if (candidates[a].n_cover != candidates[b].n_cover)
            return candidates[a].n_cover > candidates[b].n_cover;
        return candidates[a].id < candidates[b].id;
    });

    std::vector<int64_t> survivors;
    for (size_t i : order) {
        Viewpoint5D& vp = candidates[i];
        if (vp.dormant) continue;
        if (vp.n_cover <= 0) continue;  // nothing to weight against

        std::vector<size_t> neighbors;
        for (size_t j = 0; j < candidates.size(); ++j) {
            if (j == i || candidates[j].dormant) continue;
            if ((candidates[j].position - vp.position).norm() <= r_q)
                neighbors.push_back(j);
        }

        if (!neighbors.empty()) {
            Vec3 pos = vp.position;
            double weight_sum = 0.0;
            double pitch_acc = 0.0;
            double yaw_x = 0.0, yaw_y = 0.0;
            for (size_t j : neighbors) {
                const double w = static_cast<double>(candidates[j].n_cover) /
                                 static_cast<double>(vp.n_cover);
                weight_sum += w;
                pos += (candidates[j].position - vp.position) * w;
                pitch_acc += w * candidates[j].pitch;
                yaw_x += w * std::cos(candidates[j].yaw);
                yaw_y += w * std::sin(candidates[j].yaw);
            }
            // Same affine weights as the position update: self weight is
            // 1 - sum(w). Yaw is blended on the circle.
            const double self_w = 1.0 - weight_sum;
            double pitch = self_w * vp.pitch + pitch_acc;
            yaw_x += self_w * std::cos(vp.yaw);
            yaw_y += self_w * std::sin(vp.yaw);
            double yaw = (yaw_x == 0.0 && yaw_y == 0.0) ? vp.yaw : std::atan2(yaw_y, yaw_x);
            pitch = std::clamp(pitch, -M_PI / 2, M_PI / 2);

            const VoxelId new_id = grid.id_of(pos);
            const bool pose_ok =
                new_id >= 0 && grid.state(new_id) == VoxelState::Free &&
                field.at(new_id) >= clearance;
            if (pose_ok) {
                vp.position = pos;
                vp.pitch = pitch;
                vp.yaw = yaw;
            }
            for (size_t j : neighbors) candidates[j].dormant = true;
        }
        survivors.push_back(vp.id);
    }
    return survivors;
}

CoverageCycleStats CoverageTracker::coverage_cycle(const VoxelGrid& grid,
                                                   const DistanceField& field,
                                                   std::vector<SurfacePoint> new_points) {
    CoverageCycleStats stats;
    stats.cycle = cycle_++;
    stats.new_points = static_cast<int64_t>(new_points.size());

    const size_t vp_mark = viewpoints_.size();

    for (SurfacePoint& sp : new_points) {
        point_index_[sp.id] = all_points_.size();
        all_points_.push_back(sp);
    }
    if (new_points.empty() && uncovered_.empty()) {
        stats.coverage_rate = 1.0;
        return stats;
    }

    // Filter-covered: new points already visible from an accepted viewpoint
    // are bound to it immediately.
    std::vector<SurfacePoint> pool = std::move(uncovered_);
    uncovered_.clear();
    size_t covered_count = 0;  // covered among this cycle's working set
    for (SurfacePoint& sp : new_points) {
        bool covered = false;
        for (const Viewpoint5D& vp : viewpoints_) {
            if (camera_visible(grid, vp, sp.position, params_.camera)) {
                index_.bind(sp.id, vp.id);
                all_points_[point_index_[sp.id]].covered = true;
                covered = true;
                ++covered_count;
                break;
            }
        }
        if (!covered) pool.push_back(sp);
    }

    // Rate is measured over the carried-in points plus this cycle's new ones.
    const size_t working_set = pool.size() + covered_count;

    int round = 0;
    while (!pool.empty() && round < params_.max_rounds) {
        ++round;
        estimate_normals(pool, params_.normal_neighbors, grid);
        auto candidates = sample_viewpoints(pool, grid, field, params_, next_vp_id_);
        if (candidates.empty()) break;
        evaluate_coverage(candidates, pool, grid, params_.camera);
        gravitation_update(candidates, params_.merge_radius, grid, field,
                           params_.clearance);

        // Survivors ordered by n_cover then id for deterministic publication.
        std::vector<const Viewpoint5D*> survivors;
        for (const auto& c : candidates)
            if (!c.dormant && c.n_cover > 0) survivors.push_back(&c);
        std::sort(survivors.begin(), survivors.end(),
                  [](const Viewpoint5D* a, const Viewpoint5D* b) {
                      if (a->n_cover != b->n_cover) return a->n_cover > b->n_cover;
                      return a->id < b->id;
                  });

        // Re-bind pool points against the survivors' final (merged) poses;
        // publish only viewpoints that still cover something.
        std::vector<SurfacePoint> still_uncovered;
        std::vector<Viewpoint5D> published;
        for (SurfacePoint& sp : pool) {
            const Viewpoint5D* chosen = nullptr;
            int64_t chosen_pub_id = -1;
            for (const auto& vp : published)
                if (camera_visible(grid, vp, sp.position, params_.camera)) {
                    chosen = &vp;
                    chosen_pub_id = vp.id;
                    break;
                }
            if (!chosen) {
                for (const Viewpoint5D* vp : survivors) {
                    if (!camera_visible(grid, *vp, sp.position, params_.camera)) continue;
                    Viewpoint5D pub = *vp;
                    pub.id = static_cast<int64_t>(viewpoints_.size()) +
                             static_cast<int64_t>(published.size());
                    pub.n_obs = 0;
                    pub.n_cover = 0;
                    published.push_back(pub);
                    // Remove from survivors so it is not republished.
                    survivors.erase(std::find(survivors.begin(), survivors.end(), vp));
                    chosen_pub_id = pub.id;
                    chosen = &published.back();
                    break;
                }
            }
            if (chosen) {
                index_.bind(sp.id, chosen_pub_id);
                all_points_[point_index_[sp.id]].covered = true;
                ++covered_count;
            } else {
                still_uncovered.push_back(sp);
            }
        }
        for (auto& vp : published) {
            vp.n_cover = static_cast<int64_t>(index_.viewpoint_to_points[vp.id].size());
            vp.n_obs = vp.n_cover;
            viewpoints_.push_back(vp);
        }
        pool = std::move(still_uncovered);

        const double rate =
            working_set == 0
                ? 1.0
                : static_cast<double>(covered_count) / static_cast<double>(working_set);
        if (rate >= params_.coverage_threshold) break;
    }

    uncovered_ = std::move(pool);
    stats.new_viewpoints = static_cast<int64_t>(viewpoints_.size() - vp_mark);
    stats.coverage_rate =
        working_set == 0 ? 1.0
                         : static_cast<double>(covered_count) / static_cast<double>(working_set);
    if (stats.coverage_rate < params_.coverage_threshold && !uncovered_.empty())
        stats.threshold_missed = true;
    return stats;
}

std::vector<int64_t> CoverageTracker::prune_redundant(
    const VoxelGrid& grid, const std::unordered_set<int64_t>& frozen) {
    std::vector<int64_t> pruned;
    auto cover_of = [&](int64_t id) -> const std::vector<int64_t>* {
        const auto it = index_.viewpoint_to_points.find(id);
        return it == index_.viewpoint_to_points.end() ? nullptr : &it->second;
    };

    bool changed = true;
    while (changed) {
        changed = false;
        // Smallest covers first so fragments fold into larger neighbors.
        std::vector<size_t> order;
        for (size_t i = 0; i < viewpoints_.size(); ++i)
            if (!viewpoints_[i].dormant && !frozen.count(viewpoints_[i].id))
                order.push_back(i);
        std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
            const auto* ca = cover_of(viewpoints_[a].id);
            const auto* cb = cover_of(viewpoints_[b].id);
            const size_t na = ca ? ca->size() : 0, nb = cb ? cb->size() : 0;
            if (na != nb) return na < nb;
            return viewpoints_[a].id < viewpoints_[b].id;
        });

        for (size_t i : order) {
            Viewpoint5D& vp = viewpoints_[i];
            if (vp.dormant) continue;
            const auto* cover = cover_of(vp.id);
            if (!cover) continue;

            std::vector<std::pair<int64_t, int64_t>> rebind;  // point, new vp
            bool redundant = true;
            for (int64_t pt_id : *cover) {
                const Vec3& pos = all_points_[point_index_.at(pt_id)].position;
                int64_t host = -1;
                for (const Viewpoint5D& other : viewpoints_) {
                    if (other.dormant || other.id == vp.id) continue;
                    if ((pos - other.position).norm() > params_.camera.max_view_dist)
                        continue;
                    if (camera_visible(grid, other, pos, params_.camera)) {
                        host = other.id;
                        break;
                    }
                }
                if (host < 0) {
                    redundant = false;
                    break;
                }
                rebind.push_back({pt_id, host});
            }
            if (!redundant) continue;

            for (const auto& [pt_id, host] : rebind) {
                index_.point_to_viewpoint[pt_id] = host;
                index_.viewpoint_to_points[host].push_back(pt_id);
                viewpoints_[static_cast<size_t>(host)].n_cover += 1;
            }
            index_.viewpoint_to_points.erase(vp.id);
            vp.n_cover = 0;
            vp.dormant = true;
            pruned.push_back(vp.id);
            changed = true;
        }
    }
    return pruned;
}

}  // namespace surveyor
