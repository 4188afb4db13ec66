#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "nlohmann/json.hpp"
#include "surveyor/assign.hpp"
#include "surveyor/coverage.hpp"
#include "surveyor/explore.hpp"
#include "surveyor/photographer.hpp"

namespace surveyor {

// Denser elevation fan than the bare sensor default; with per-scan jitter it
// closes the angular gaps a fixed pattern would leave unknown forever.
inline LidarParams sim_default_lidar() {
    LidarParams l;
    l.elevation_angles.clear();
    for (double e = -75.0; e <= 75.0; e += 7.5) l.elevation_angles.push_back(e);
    return l;
}

struct Scenario {
    std::string scene_path;
    double resolution = 0.5;
    Aabb bounds{{0, 0, 0}, {20, 20, 10}};
    int n_photographers = 2;
    Vec3 explorer_start{1, 1, 1};
    std::vector<Vec3> photographer_starts;  // empty: all at explorer_start
    double dt = 0.1;
    double planning_period = 1.0;
    int64_t tick_budget = 20000;
    uint64_t seed = 1;

    CoverageParams coverage;
    AssignParams assign;
    PhotographerParams photographer;
    ExploreParams explore;
    LidarParams lidar = sim_default_lidar();
};

// Every violation, not just the first; empty means valid.
std::vector<std::string> validate_scenario(const Scenario& s);

Scenario scenario_from_json(const nlohmann::json& j, const std::string& base_dir);
nlohmann::json scenario_to_json(const Scenario& s);

// Throws std::runtime_error listing all violations, one per line.
Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& s, const std::string& path);

// CSV rows `x,y,z` or JSON {"points": [...], "boxes": [{"min","max"}]};
// boxes expand to voxel centers at the given resolution.
std::vector<Vec3> load_scene_points(const std::string& path, double resolution,
                                    const Aabb& bounds);

struct IssuedTrajectory {
    Trajectory traj;
    MotionLimits limits;
    double clearance = 0.0;
};

struct AgentMetrics {
    std::string name;
    double flight_time = 0.0;
    double path_length = 0.0;
};

struct Metrics {
    AgentMetrics explorer;
    std::vector<AgentMetrics> photographers;
    double completion_time = 0.0;   // max over photographers
    double exploration_time = 0.0;  // first tick with no frontiers left
    int64_t viewpoint_count = 0;
    int64_t visited_viewpoints = 0;
    int64_t abandoned_viewpoints = 0;
    int64_t pruned_viewpoints = 0;
    int64_t point_count = 0;
    double coverage_rate = 0.0;   // points bound to a published viewpoint
    double captured_rate = 0.0;   // points whose viewpoint was visited
    bool complete = false;
    int64_t ticks = 0;
    std::vector<std::vector<int>> k_same_trace;

    nlohmann::json to_json() const;
};

class Engine {
  public:
    explicit Engine(Scenario scenario);

    void step();
    bool finished() const;
    const Metrics& run();
    void export_results(const std::string& out_dir) const;

    double time() const { return static_cast<double>(tick_) * scenario_.dt; }
    int64_t tick() const { return tick_; }
    const Scenario& scenario() const { return scenario_; }
    const VoxelGrid& truth() const { return truth_; }
    const VoxelGrid& map() const { return map_; }
    const CoverageTracker& coverage() const { return coverage_; }
    const FrontierTracker& frontiers() const { return frontiers_; }
    const VctSet& vcts() const { return vcts_; }
    const std::vector<Photographer>& photographers() const { return agents_; }
    const GimbalPose& explorer_pose() const { return explorer_pose_; }
    const Metrics& metrics() const { return metrics_; }
    const std::vector<std::string>& cycle_lines() const { return cycle_lines_; }
    const std::vector<IssuedTrajectory>& trajectory_log() const { return trajectory_log_; }

  private:
    void planning_cycle();
    void log_pose(const std::string& name, const GimbalPose& pose, double speed);
    void finalize_metrics();
    uint64_t draw_seed() { return rng_(); }

    Scenario scenario_;
    VoxelGrid truth_;
    VoxelGrid map_;
    DistanceField dfield_;
    FrontierTracker frontiers_;
    CoverageTracker coverage_;
    VctSet vcts_;
    Assigner assigner_;
    std::vector<Photographer> agents_;

    GimbalPose explorer_pose_;
    Trajectory explorer_traj_;
    double explorer_time_ = 0.0;
    double explorer_distance_ = 0.0;
    double explorer_last_active_ = 0.0;

    std::mt19937_64 rng_;
    int64_t tick_ = 0;
    int64_t planning_cycles_ = 0;
    int64_t next_point_id_ = 0;
    size_t published_ = 0;  // viewpoints already handed to the cluster set
    uint64_t assigned_version_ = ~uint64_t{0};
    std::unordered_map<int64_t, int64_t> vp_to_vct_;
    std::unordered_set<int64_t> handled_vps_;  // visited or abandoned
    std::unordered_set<int64_t> visited_vps_;
    int64_t visited_ = 0;
    int64_t abandoned_ = 0;
    int64_t pruned_ = 0;
    int64_t captured_points_ = 0;
    std::vector<double> agent_last_active_;
    double exploration_done_at_ = -1.0;

    Metrics metrics_;
    std::vector<std::string> cycle_lines_;
    std::unordered_map<std::string, std::string> pose_logs_;
    std::vector<std::string> agent_names_;
    std::vector<IssuedTrajectory> trajectory_log_;  // every trajectory ever issued
};

}  // namespace surveyor
