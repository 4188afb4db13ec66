#pragma once

#include <cstdint>
#include <unordered_set>
#include <vector>

#include "surveyor/assign.hpp"
#include "surveyor/grid.hpp"
#include "surveyor/routes.hpp"
#include "surveyor/sensors.hpp"

namespace surveyor {

struct PhotographerParams {
    int k_local = 2;       // clusters refined per local plan
    int m_kc = 3;          // viewpoints per trajectory batch
    double r_s = 0.8;      // safety clearance (m)
    double eps_pos = 0.3;  // visitation tolerance (m)
    double eps_ang = 0.15; // rad
    MotionLimits limits{1.0, 1.0, 1.0, 1.0};
};

struct GimbalPose {
    Vec3 position{};
    double yaw = 0.0;
    double pitch = 0.0;
};

struct LocalPlan {
    std::vector<int64_t> viewpoint_ids;  // ordered visit sequence
    bool has_anchor = false;
    Vec3 anchor{};  // next cluster center, pulls the tour toward it
};

// Refines the first k_local clusters of the assigned global path into a
// single ordered viewpoint route starting at the current pose. When a
// further cluster exists its center is a forced-last endpoint.
LocalPlan plan_local_path(const Pose& state,
                          const std::vector<int64_t>& global_path,
                          const VctSet& vcts,
                          const std::vector<Viewpoint5D>& vp_table,
                          int k_local, const VoxelGrid& grid,
                          const MotionLimits& limits, uint64_t seed);

struct TrajectoryPiece {
    std::vector<Vec3> points;      // smoothed polyline
    std::vector<double> cum_len;   // arc length at each point
    double length = 0.0;
    double duration = 0.0;
    double motion_time = 0.0;      // unstretched translation time
    double v_peak = 0.0;
    double ramp_time = 0.0;
    double yaw0 = 0.0, yaw1 = 0.0;
    double pitch0 = 0.0, pitch1 = 0.0;
    int64_t target_vp = -1;
};

struct Trajectory {
    std::vector<TrajectoryPiece> pieces;
    std::vector<int64_t> dropped;  // unreachable viewpoint ids
    double total_duration() const;
};

struct SampledState {
    Vec3 position{};
    double yaw = 0.0;
    double pitch = 0.0;
    double speed = 0.0;
};

// Clearance-constrained A* polylines, shortcut smoothed, trapezoidal speed
// profiles; yaw and pitch interpolate linearly and stretch the piece
// duration when the gimbal rate binds.
Trajectory generate_trajectory(const GimbalPose& state,
                               const std::vector<Viewpoint5D>& plan,
                               const VoxelGrid& grid,
                               const DistanceField& field,
                               const MotionLimits& limits, double r_s);

// Piecewise evaluation; t clamped to [0, total duration].
SampledState sample(const Trajectory& traj, double t);

bool viewpoint_reached(const GimbalPose& state, const Viewpoint5D& vp,
                       double eps_pos, double eps_ang);

class Photographer {
  public:
    Photographer(int id, const GimbalPose& start, PhotographerParams params = {})
        : id_(id), pose_(start), params_(params) {}

    void set_assignment(std::vector<int64_t> vct_path) {
        global_path_ = std::move(vct_path);
    }

    void replan(const VctSet& vcts, const std::vector<Viewpoint5D>& vp_table,
                const VoxelGrid& grid, const DistanceField& field,
                uint64_t seed);

    // Advances dt along the current trajectory; returns viewpoint ids newly
    // reached this tick (latched, at most once each).
    std::vector<int64_t> advance(double dt,
                                 const std::vector<Viewpoint5D>& vp_table);

    int id() const { return id_; }
    const GimbalPose& pose() const { return pose_; }
    const LocalPlan& plan() const { return plan_; }
    const Trajectory& trajectory() const { return traj_; }
    const std::vector<int64_t>& global_path() const { return global_path_; }
    bool idle() const { return traj_.pieces.empty() || time_ >= traj_.total_duration(); }
    double distance_flown() const { return distance_; }
    double speed() const { return speed_; }

  private:
    int id_;
    GimbalPose pose_;
    PhotographerParams params_;
    std::vector<int64_t> global_path_;
    LocalPlan plan_;
    Trajectory traj_;
    double time_ = 0.0;
    double distance_ = 0.0;
    double speed_ = 0.0;
    std::unordered_set<int64_t> visited_;
};

}  // namespace surveyor
