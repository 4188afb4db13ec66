#include "surveyor/photographer.hpp"

#include <algorithm>
#include <cmath>

namespace surveyor {

LocalPlan plan_local_path(const Pose& state,
                          const std::vector<int64_t>& global_path,
                          const VctSet& vcts,
                          const std::vector<Viewpoint5D>& vp_table,
                          int k_local, const VoxelGrid& grid,
                          const MotionLimits& limits, uint64_t seed) {
    LocalPlan plan;
    if (global_path.empty()) return plan;

    std::vector<int64_t> vp_ids;
    int used = 0;
    for (int64_t vct_id : global_path) {
        if (used >= k_local) break;
        auto it = vcts.clusters().find(vct_id);
        if (it == vcts.clusters().end()) continue;
        for (int64_t vp : it->second.vp_ids) vp_ids.push_back(vp);
        ++used;
    }
    if (vp_ids.empty()) return plan;

    for (size_t i = static_cast<size_t>(used); i < global_path.size(); ++i) {
        auto it = vcts.clusters().find(global_path[i]);
        if (it == vcts.clusters().end()) continue;
        plan.has_anchor = true;
        plan.anchor = it->second.p_avg;
        break;
    }

    std::vector<Pose> nodes;
    nodes.reserve(vp_ids.size());
    for (int64_t vp : vp_ids) {
        const Viewpoint5D& v = vp_table[static_cast<size_t>(vp)];
        nodes.push_back(Pose{v.position, v.yaw});
    }

    AtspMatrix m = build_atsp_matrix(grid, state, nodes, limits);
    if (plan.has_anchor) {
        // Extra endpoint column: reachable from every node at pure travel
        // time, but leaving it anywhere except back to the start is
        // prohibitive, so optimal tours place it last.
        const int n = m.n;
        AtspMatrix ext;
        ext.n = n + 1;
        ext.cost.assign(static_cast<size_t>(ext.n) * static_cast<size_t>(ext.n),
                        0.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) ext.at(i, j) = m.at(i, j);
        for (int i = 0; i < n; ++i) {
            const Vec3 from = (i == 0) ? state.position
                                       : nodes[static_cast<size_t>(i - 1)].position;
            auto res = grid.astar_path(from, plan.anchor);
            ext.at(i, n) = res ? res->length / limits.v_max : kUnreachableCost;
        }
        for (int j = 1; j < n; ++j) ext.at(n, j) = kUnreachableCost;
        m = std::move(ext);
    }

    AtspSolution sol = solve_atsp(m, seed);
    for (int node : sol.order) {
        if (plan.has_anchor && node == m.n - 1) continue;
        plan.viewpoint_ids.push_back(vp_ids[static_cast<size_t>(node - 1)]);
    }
    return plan;
}

namespace {

bool segment_clear(const VoxelGrid& grid, const DistanceField& field,
                   const Vec3& a, const Vec3& b, double r_s) {
    const double step = grid.resolution() * 0.5;
    const double len = (b - a).norm();
    const int n = std::max(1, static_cast<int>(std::ceil(len / step)));
    for (int i = 0; i <= n; ++i) {
        const Vec3 p = a + (b - a) * (static_cast<double>(i) / n);
        const VoxelId id = grid.id_of(p);
        if (id < 0 || grid.state(id) != VoxelState::Free) return false;
        if (field.at(id) < r_s) return false;
    }
    return true;
}

std::vector<Vec3> shortcut(const VoxelGrid& grid, const DistanceField& field,
                           const std::vector<Vec3>& pts, double r_s) {
    if (pts.size() <= 2) return pts;
    std::vector<Vec3> out;
    out.push_back(pts.front());
    size_t i = 0;
    while (i + 1 < pts.size()) {
        size_t j = pts.size() - 1;
        while (j > i + 1 && !segment_clear(grid, field, pts[i], pts[j], r_s)) --j;
        out.push_back(pts[j]);
        i = j;
    }
    return out;
}

// Symmetric trapezoid (or triangle) reaching at most v_max with ramps a_max.
void profile_times(double length, const MotionLimits& lim, double& motion_time,
                   double& v_peak, double& ramp_time) {
    if (length <= 1e-12) {
        motion_time = 0.0;
        v_peak = 0.0;
        ramp_time = 0.0;
        return;
    }
    if (length >= lim.v_max * lim.v_max / lim.a_max) {
        v_peak = lim.v_max;
        ramp_time = lim.v_max / lim.a_max;
        motion_time = length / lim.v_max + lim.v_max / lim.a_max;
    } else {
        v_peak = std::sqrt(length * lim.a_max);
        ramp_time = v_peak / lim.a_max;
        motion_time = 2.0 * ramp_time;
    }
}

// Arc length covered after time t of the unstretched profile.
double profile_arc(const TrajectoryPiece& p, double t, const MotionLimits& lim,
                   double& speed) {
    const double a = lim.a_max;
    const double tr = p.ramp_time;
    const double tm = p.motion_time;
    t = std::clamp(t, 0.0, tm);
    if (t <= tr) {
        speed = a * t;
        return 0.5 * a * t * t;
    }
    if (t <= tm - tr) {
        speed = p.v_peak;
        return 0.5 * a * tr * tr + p.v_peak * (t - tr);
    }
    const double td = tm - t;
    speed = a * td;
    return p.length - 0.5 * a * td * td;
}

Vec3 polyline_at(const TrajectoryPiece& p, double s) {
    if (p.points.size() == 1) return p.points[0];
    s = std::clamp(s, 0.0, p.length);
    size_t k = 1;
    while (k + 1 < p.points.size() && p.cum_len[k] < s) ++k;
    const double seg = p.cum_len[k] - p.cum_len[k - 1];
    const double f = seg > 1e-12 ? (s - p.cum_len[k - 1]) / seg : 0.0;
    return p.points[k - 1] + (p.points[k] - p.points[k - 1]) * f;
}

}  // namespace

double Trajectory::total_duration() const {
    double t = 0.0;
    for (const auto& p : pieces) t += p.duration;
    return t;
}

Trajectory generate_trajectory(const GimbalPose& state,
                               const std::vector<Viewpoint5D>& plan,
                               const VoxelGrid& grid,
                               const DistanceField& field,
                               const MotionLimits& limits, double r_s) {
    Trajectory traj;
    Vec3 pos = state.position;
    double yaw = state.yaw;
    double pitch = state.pitch;

    for (const Viewpoint5D& vp : plan) {
        TrajectoryPiece piece;
        piece.target_vp = vp.id;
        piece.yaw0 = yaw;
        piece.yaw1 = vp.yaw;
        piece.pitch0 = pitch;
        piece.pitch1 = vp.pitch;

        if ((vp.position - pos).norm() <= 1e-12) {
            piece.points = {pos};
        } else {
            auto res = grid.astar_path(pos, vp.position, r_s, &field);
            if (!res) {
                traj.dropped.push_back(vp.id);
                continue;
            }
            piece.points = shortcut(grid, field, res->points, r_s);
        }
        piece.cum_len.resize(piece.points.size(), 0.0);
        for (size_t i = 1; i < piece.points.size(); ++i)
            piece.cum_len[i] = piece.cum_len[i - 1] +
                               (piece.points[i] - piece.points[i - 1]).norm();
        piece.length = piece.cum_len.back();

        profile_times(piece.length, limits, piece.motion_time, piece.v_peak,
                      piece.ramp_time);
        const double yaw_time =
            yaw_distance(piece.yaw0, piece.yaw1) / limits.yaw_rate_max;
        const double pitch_time =
            std::abs(piece.pitch1 - piece.pitch0) / limits.yaw_rate_max;
        piece.duration = std::max({piece.motion_time, yaw_time, pitch_time});

        traj.pieces.push_back(std::move(piece));
        pos = vp.position;
        yaw = vp.yaw;
        pitch = vp.pitch;
    }
    return traj;
}

SampledState sample(const Trajectory& traj, double t) {
    SampledState out;
    if (traj.pieces.empty()) return out;
    t = std::max(t, 0.0);

    size_t k = 0;
    while (k + 1 < traj.pieces.size() && t > traj.pieces[k].duration) {
        t -= traj.pieces[k].duration;
        ++k;
    }
    const TrajectoryPiece& p = traj.pieces[k];
    t = std::min(t, p.duration);

    // Gimbal-stretched pieces run the translation profile on compressed time.
    const double scale = (p.duration > 1e-12 && p.motion_time > 0.0)
                             ? p.motion_time / p.duration
                             : 0.0;
    MotionLimits lim;  // profile_arc only needs a_max via ramp/peak relation
    lim.a_max = p.ramp_time > 1e-12 ? p.v_peak / p.ramp_time : 1.0;
    double speed = 0.0;
    const double s = p.motion_time > 0.0
                         ? profile_arc(p, t * scale, lim, speed)
                         : 0.0;
    out.position = polyline_at(p, s);
    out.speed = speed * scale;

    const double f = p.duration > 1e-12 ? std::clamp(t / p.duration, 0.0, 1.0)
                                        : 1.0;
    out.yaw = wrap_angle(p.yaw0 + wrap_angle(p.yaw1 - p.yaw0) * f);
    out.pitch = p.pitch0 + (p.pitch1 - p.pitch0) * f;
    return out;
}

bool viewpoint_reached(const GimbalPose& state, const Viewpoint5D& vp,
                       double eps_pos, double eps_ang) {
    return (state.position - vp.position).norm() <= eps_pos &&
           yaw_distance(state.yaw, vp.yaw) <= eps_ang &&
           std::abs(state.pitch - vp.pitch) <= eps_ang;
}

void Photographer::replan(const VctSet& vcts,
                          const std::vector<Viewpoint5D>& vp_table,
                          const VoxelGrid& grid, const DistanceField& field,
                          uint64_t seed) {
    plan_ = plan_local_path(Pose{pose_.position, pose_.yaw}, global_path_, vcts,
                            vp_table, params_.k_local, grid, params_.limits,
                            seed);

    std::vector<Viewpoint5D> batch;
    for (int64_t vp : plan_.viewpoint_ids) {
        if (visited_.count(vp)) continue;
        batch.push_back(vp_table[static_cast<size_t>(vp)]);
        if (static_cast<int>(batch.size()) >= params_.m_kc) break;
    }
    traj_ = generate_trajectory(pose_, batch, grid, field, params_.limits,
                                params_.r_s);
    time_ = 0.0;
}

std::vector<int64_t> Photographer::advance(
    double dt, const std::vector<Viewpoint5D>& vp_table) {
    std::vector<int64_t> events;
    if (!traj_.pieces.empty() && time_ < traj_.total_duration()) {
        time_ += dt;
        const SampledState s = sample(traj_, time_);
        distance_ += (s.position - pose_.position).norm();
        pose_.position = s.position;
        pose_.yaw = s.yaw;
        pose_.pitch = s.pitch;
        speed_ = s.speed;
    } else {
        speed_ = 0.0;
    }

    for (int64_t vp_id : plan_.viewpoint_ids) {
        if (visited_.count(vp_id)) continue;
        const Viewpoint5D& vp = vp_table[static_cast<size_t>(vp_id)];
        if (viewpoint_reached(pose_, vp, params_.eps_pos, params_.eps_ang)) {
            visited_.insert(vp_id);
            events.push_back(vp_id);
        }
    }
    return events;
}

}  // namespace surveyor
