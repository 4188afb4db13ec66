#include "surveyor/sim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace surveyor {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<Vec3> load_scene_points(const std::string& path, double resolution,
                                    const Aabb& bounds) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("scene file not found: " + path);

    std::vector<Vec3> pts;
    if (fs::path(path).extension() == ".csv") {
        std::string line;
        size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) continue;
            Vec3 p;
            char c1 = 0, c2 = 0;
            std::istringstream row(line);
            if (!(row >> p.x >> c1 >> p.y >> c2 >> p.z) || c1 != ',' || c2 != ',') {
                if (lineno == 1) continue;  // header row
                throw std::runtime_error("bad scene row " + std::to_string(lineno) +
                                         " in " + path);
            }
            pts.push_back(p);
        }
        return pts;
    }

    json j;
    in >> j;
    for (const auto& p : j.value("points", json::array()))
        pts.push_back({p.at(0).get<double>(), p.at(1).get<double>(),
                       p.at(2).get<double>()});
    for (const auto& b : j.value("boxes", json::array())) {
        const auto& lo = b.at("min");
        const auto& hi = b.at("max");
        const Vec3 bmin{lo.at(0).get<double>(), lo.at(1).get<double>(),
                        lo.at(2).get<double>()};
        const Vec3 bmax{hi.at(0).get<double>(), hi.at(1).get<double>(),
                        hi.at(2).get<double>()};
        for (double x = bounds.min.x + resolution * 0.5; x < bounds.max.x;
             x += resolution)
            for (double y = bounds.min.y + resolution * 0.5; y < bounds.max.y;
                 y += resolution)
                for (double z = bounds.min.z + resolution * 0.5; z < bounds.max.z;
                     z += resolution) {
                    if (x >= bmin.x && x <= bmax.x && y >= bmin.y &&
                        y <= bmax.y && z >= bmin.z && z <= bmax.z)
                        pts.push_back({x, y, z});
                }
    }
    std::erase_if(pts, [&](const Vec3& p) { return !bounds.contains(p); });
    return pts;
}

std::vector<std::string> validate_scenario(const Scenario& s) {
    std::vector<std::string> errors;
    if (s.scene_path.empty())
        errors.push_back("scene path is empty");
    else if (!fs::exists(s.scene_path))
        errors.push_back("scene file not found: " + s.scene_path);
    if (s.resolution <= 0.0) errors.push_back("resolution must be positive");
    if (s.n_photographers < 1)
        errors.push_back("n_photographers must be at least 1");
    if (s.dt <= 0.0) errors.push_back("dt must be positive");
    if (s.planning_period < s.dt)
        errors.push_back("planning_period must be at least dt");
    if (s.tick_budget < 1) errors.push_back("tick_budget must be at least 1");
    const Vec3 ext = s.bounds.extent();
    if (ext.x <= 0.0 || ext.y <= 0.0 || ext.z <= 0.0)
        errors.push_back("bounds must have positive extent on every axis");
    else {
        if (!s.bounds.contains(s.explorer_start))
            errors.push_back("explorer_start is outside the bounds");
        for (size_t i = 0; i < s.photographer_starts.size(); ++i)
            if (!s.bounds.contains(s.photographer_starts[i]))
                errors.push_back("photographer_start " + std::to_string(i) +
                                 " is outside the bounds");
    }
    if (!s.photographer_starts.empty() &&
        static_cast<int>(s.photographer_starts.size()) != s.n_photographers)
        errors.push_back("photographer_starts must be empty or match n_photographers");
    if (s.coverage.coverage_threshold <= 0.0 ||
        s.coverage.coverage_threshold > 1.0)
        errors.push_back("coverage_threshold must be in (0, 1]");
    if (!s.lidar.valid()) errors.push_back("lidar parameters are invalid");
    if (!s.coverage.camera.valid()) errors.push_back("camera parameters are invalid");
    return errors;
}

namespace {

Vec3 vec_from(const json& a) {
    return {a.at(0).get<double>(), a.at(1).get<double>(), a.at(2).get<double>()};
}

json vec_to(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

}  // namespace

Scenario scenario_from_json(const json& j, const std::string& base_dir) {
    Scenario s;
    s.scene_path = j.value("scene", "");
    if (!s.scene_path.empty() && fs::path(s.scene_path).is_relative() &&
        !base_dir.empty())
        s.scene_path = (fs::path(base_dir) / s.scene_path).string();
    s.resolution = j.value("resolution", s.resolution);
    if (j.contains("bounds")) {
        s.bounds.min = vec_from(j.at("bounds").at("min"));
        s.bounds.max = vec_from(j.at("bounds").at("max"));
    }
    s.n_photographers = j.value("n_photographers", s.n_photographers);
    if (j.contains("explorer_start")) s.explorer_start = vec_from(j.at("explorer_start"));
    for (const auto& p : j.value("photographer_starts", json::array()))
        s.photographer_starts.push_back(vec_from(p));
    s.dt = j.value("dt", s.dt);
    s.planning_period = j.value("planning_period", s.planning_period);
    s.tick_budget = j.value("tick_budget", s.tick_budget);
    s.seed = j.value("seed", s.seed);

    const json p = j.value("params", json::object());
    s.coverage.standoff = p.value("standoff", s.coverage.standoff);
    s.coverage.merge_radius = p.value("merge_radius", s.coverage.merge_radius);
    s.coverage.coverage_threshold =
        p.value("coverage_threshold", s.coverage.coverage_threshold);
    s.coverage.camera.fov_h = p.value("camera_fov_h", s.coverage.camera.fov_h);
    s.coverage.camera.fov_v = p.value("camera_fov_v", s.coverage.camera.fov_v);
    s.coverage.camera.max_view_dist =
        p.value("max_view_dist", 2.5 * s.coverage.standoff);
    s.coverage.clearance = p.value("r_s", s.coverage.clearance);

    s.assign.lambda_h = p.value("lambda_h", s.assign.lambda_h);
    s.assign.d_thr = p.value("d_thr", s.assign.d_thr);
    s.assign.epsilon = p.value("epsilon", s.assign.epsilon);
    s.assign.consistency_gain = p.value("R", s.assign.consistency_gain);
    s.assign.consistency_decay = p.value("alpha", s.assign.consistency_decay);
    s.assign.generations = p.value("k_ga", s.assign.generations);
    s.assign.clearance = p.value("r_s", s.assign.clearance);

    s.photographer.k_local = p.value("k_local", s.photographer.k_local);
    s.photographer.m_kc = p.value("m_kc", s.photographer.m_kc);
    s.photographer.r_s = p.value("r_s", s.photographer.r_s);
    s.photographer.eps_pos = p.value("eps_pos", s.photographer.eps_pos);
    s.photographer.eps_ang = p.value("eps_ang", s.photographer.eps_ang);
    s.photographer.limits.v_max = p.value("photographer_v_max", 1.0);
    s.photographer.limits.a_max = p.value("photographer_a_max", 1.0);
    s.photographer.limits.yaw_rate_max = p.value("photographer_yaw_rate", 1.0);
    s.photographer.limits.j_max = p.value("photographer_j_max", 1.0);

    s.explore.clearance = p.value("r_s", s.explore.clearance);
    s.explore.max_cluster_extent =
        p.value("frontier_max_extent", s.explore.max_cluster_extent);
    s.explore.limits.v_max = p.value("explorer_v_max", 2.0);
    s.explore.limits.a_max = p.value("explorer_a_max", 2.0);
    s.explore.limits.yaw_rate_max = p.value("explorer_yaw_rate", 2.0);
    s.explore.limits.j_max = p.value("explorer_j_max", 2.0);

    s.lidar.max_range = p.value("lidar_range", s.lidar.max_range);
    s.lidar.azimuth_count = p.value("lidar_azimuths", s.lidar.azimuth_count);
    if (p.contains("lidar_elevations"))
        s.lidar.elevation_angles =
            p.at("lidar_elevations").get<std::vector<double>>();
    return s;
}

json scenario_to_json(const Scenario& s) {
    json p{{"standoff", s.coverage.standoff},
           {"merge_radius", s.coverage.merge_radius},
           {"coverage_threshold", s.coverage.coverage_threshold},
           {"camera_fov_h", s.coverage.camera.fov_h},
           {"camera_fov_v", s.coverage.camera.fov_v},
           {"max_view_dist", s.coverage.camera.max_view_dist},
           {"lambda_h", s.assign.lambda_h},
           {"d_thr", s.assign.d_thr},
           {"epsilon", s.assign.epsilon},
           {"R", s.assign.consistency_gain},
           {"alpha", s.assign.consistency_decay},
           {"k_ga", s.assign.generations},
           {"k_local", s.photographer.k_local},
           {"m_kc", s.photographer.m_kc},
           {"r_s", s.photographer.r_s},
           {"eps_pos", s.photographer.eps_pos},
           {"eps_ang", s.photographer.eps_ang},
           {"photographer_v_max", s.photographer.limits.v_max},
           {"photographer_a_max", s.photographer.limits.a_max},
           {"photographer_yaw_rate", s.photographer.limits.yaw_rate_max},
           {"photographer_j_max", s.photographer.limits.j_max},
           {"frontier_max_extent", s.explore.max_cluster_extent},
           {"explorer_v_max", s.explore.limits.v_max},
           {"explorer_a_max", s.explore.limits.a_max},
           {"explorer_yaw_rate", s.explore.limits.yaw_rate_max},
           {"explorer_j_max", s.explore.limits.j_max},
           {"lidar_range", s.lidar.max_range},
           {"lidar_azimuths", s.lidar.azimuth_count},
           {"lidar_elevations", json(s.lidar.elevation_angles)}};
    json j{{"scene", s.scene_path},
           {"resolution", s.resolution},
           {"bounds", {{"min", vec_to(s.bounds.min)}, {"max", vec_to(s.bounds.max)}}},
           {"n_photographers", s.n_photographers},
           {"explorer_start", vec_to(s.explorer_start)},
           {"dt", s.dt},
           {"planning_period", s.planning_period},
           {"tick_budget", s.tick_budget},
           {"seed", s.seed},
           {"params", p}};
    if (!s.photographer_starts.empty()) {
        json starts = json::array();
        for (const Vec3& v : s.photographer_starts) starts.push_back(vec_to(v));
        j["photographer_starts"] = starts;
    }
    return j;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("scenario file not found: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::runtime_error("scenario parse error: " + std::string(e.what()));
    }
    Scenario s = scenario_from_json(j, fs::path(path).parent_path().string());
    const auto errors = validate_scenario(s);
    if (!errors.empty()) {
        std::string msg;
        for (const auto& e : errors) {
            if (!msg.empty()) msg += "\n";
            msg += e;
        }
        throw std::runtime_error(msg);
    }
    return s;
}

void save_scenario(const Scenario& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write scenario: " + path);
    out << scenario_to_json(s).dump(2) << "\n";
}

json Metrics::to_json() const {
    json agents = json::array();
    for (const auto& a : photographers)
        agents.push_back({{"name", a.name},
                          {"flight_time", a.flight_time},
                          {"path_length", a.path_length}});
    return json{{"explorer",
                 {{"name", explorer.name},
                  {"flight_time", explorer.flight_time},
                  {"path_length", explorer.path_length}}},
                {"photographers", agents},
                {"completion_time", completion_time},
                {"exploration_time", exploration_time},
                {"viewpoint_count", viewpoint_count},
                {"visited_viewpoints", visited_viewpoints},
                {"abandoned_viewpoints", abandoned_viewpoints},
                {"pruned_viewpoints", pruned_viewpoints},
                {"point_count", point_count},
                {"coverage_rate", coverage_rate},
                {"captured_rate", captured_rate},
                {"complete", complete},
                {"ticks", ticks},
                {"k_same_trace", k_same_trace}};
}

namespace {

// The distance field measures voxel center to voxel center. A sampled agent
// position sits up to half a diagonal from its voxel center and an obstacle
// surface up to half a diagonal from the obstacle center, so planning checks
// need one full diagonal of margin to guarantee point-to-surface clearance.
template <typename Params>
Params inflate_clearance(Params p, double resolution) {
    p.clearance += resolution * std::sqrt(3.0);
    return p;
}

PhotographerParams inflate_rs(PhotographerParams p, double resolution) {
    p.r_s += resolution * std::sqrt(3.0);
    return p;
}

}  // namespace

Engine::Engine(Scenario scenario)
    : scenario_(std::move(scenario)),
      frontiers_(inflate_clearance(scenario_.explore, scenario_.resolution)),
      coverage_(inflate_clearance(scenario_.coverage, scenario_.resolution)),
      vcts_(scenario_.assign.lambda_h, scenario_.assign.d_thr),
      assigner_(inflate_clearance(scenario_.assign, scenario_.resolution)),
      rng_(scenario_.seed) {
    const auto errors = validate_scenario(scenario_);
    if (!errors.empty()) throw std::runtime_error(errors.front());

    const auto points =
        load_scene_points(scenario_.scene_path, scenario_.resolution, scenario_.bounds);
    truth_ = voxelize_scene(points, scenario_.resolution, scenario_.bounds);
    map_ = make_planning_grid(truth_, scenario_.seed);
    dfield_ = DistanceField(map_, 4.0 * scenario_.assign.d_thr, true);

    explorer_pose_ = GimbalPose{scenario_.explorer_start, 0.0, 0.0};
    agent_names_.push_back("explorer");
    for (int i = 0; i < scenario_.n_photographers; ++i) {
        const Vec3 start = scenario_.photographer_starts.empty()
                               ? scenario_.explorer_start
                               : scenario_.photographer_starts[static_cast<size_t>(i)];
        agents_.emplace_back(i, GimbalPose{start, 0.0, 0.0},
                             inflate_rs(scenario_.photographer, scenario_.resolution));
        agent_names_.push_back("photographer_" + std::to_string(i));
    }
    agent_last_active_.assign(agents_.size(), 0.0);
}

void Engine::log_pose(const std::string& name, const GimbalPose& pose,
                      double speed) {
    char row[160];
    std::snprintf(row, sizeof(row), "%.3f,%s,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f\n",
                  time(), name.c_str(), pose.position.x, pose.position.y,
                  pose.position.z, pose.yaw, pose.pitch, speed);
    pose_logs_[name] += row;
}

void Engine::planning_cycle() {
    // Sense and fuse.
    const LidarScan scan =
        lidar_scan(truth_, Pose{explorer_pose_.position, explorer_pose_.yaw},
                   scenario_.lidar, draw_seed() | 1);
    const auto changed = map_.integrate_scan(explorer_pose_.position, scan.hits,
                                             scan.misses);
    if (!changed.empty() || planning_cycles_ == 0)
        dfield_ = DistanceField(map_, 4.0 * scenario_.assign.d_thr, true);
    frontiers_.update(map_, dfield_, changed);
    if (exploration_done_at_ < 0.0 && planning_cycles_ > 0 &&
        frontiers_.exploration_done())
        exploration_done_at_ = time();

    // Surface extraction and viewpoint generation.
    const auto clusters = surface_clusters(map_);
    const auto s_exp = detect_explored_surface(
        map_, frontiers_.cells(), clusters, scenario_.coverage.frontier_near_voxels);
    auto new_points = extract_new_points(map_, s_exp, next_point_id_);
    const auto stats =
        coverage_.coverage_cycle(map_, dfield_, std::move(new_points));
    {
        json cj{{"type", "coverage"},
                {"cycle", stats.cycle},
                {"new_points", stats.new_points},
                {"new_viewpoints", stats.new_viewpoints},
                {"coverage_rate", stats.coverage_rate},
                {"threshold_missed", stats.threshold_missed}};
        cycle_lines_.push_back(cj.dump());
    }

    // Fold redundant viewpoints into their neighbors before publishing;
    // already published ones are retired from the cluster set.
    for (int64_t vp_id : coverage_.prune_redundant(map_, visited_vps_)) {
        const auto it = vp_to_vct_.find(vp_id);
        if (it == vp_to_vct_.end()) continue;
        if (handled_vps_.insert(vp_id).second) {
            vcts_.mark_visited(it->second, vp_id);
            ++pruned_;
        }
    }

    // Publish fresh viewpoints into the cluster set.
    const auto& vps = coverage_.viewpoints();
    for (; published_ < vps.size(); ++published_) {
        const Viewpoint5D& vp = vps[published_];
        if (vp.dormant) continue;
        const int64_t vct = vcts_.add_viewpoint(vp, map_);
        vp_to_vct_[vp.id] = vct;
    }

    // Explorer motion target.
    const uint64_t explore_seed = draw_seed();
    if (auto plan = plan_exploration_step(
            map_, Pose{explorer_pose_.position, explorer_pose_.yaw},
            frontiers_.clusters(), scenario_.explore.limits, explore_seed)) {
        Viewpoint5D target;
        target.id = -1;
        target.position = plan->next_viewpoint.position;
        target.yaw = plan->next_viewpoint.yaw;
        const double explorer_rs =
            scenario_.explore.clearance + scenario_.resolution * std::sqrt(3.0);
        explorer_traj_ =
            generate_trajectory(explorer_pose_, {target}, map_, dfield_,
                                scenario_.explore.limits, explorer_rs);
        explorer_time_ = 0.0;
        if (!explorer_traj_.pieces.empty())
            trajectory_log_.push_back({explorer_traj_, scenario_.explore.limits,
                                       scenario_.explore.clearance});
    } else {
        explorer_traj_ = Trajectory{};
    }

    // Reassign when the cluster set changed, then replan photographers.
    bool reassigned = false;
    const uint64_t assign_seed = draw_seed();
    if (vcts_.version() != assigned_version_) {
        std::vector<Vec3> positions;
        for (const auto& a : agents_) positions.push_back(a.pose().position);
        const auto outcome =
            assigner_.assignment_cycle(vcts_, positions, map_, dfield_, assign_seed);
        cycle_lines_.push_back(outcome.json_line);
        metrics_.k_same_trace.push_back(outcome.k_same);
        for (size_t i = 0; i < agents_.size(); ++i)
            agents_[i].set_assignment(outcome.best.paths[i]);
        assigned_version_ = vcts_.version();
        reassigned = true;
    }

    for (auto& agent : agents_) {
        const uint64_t replan_seed = draw_seed();
        if (!reassigned && !agent.idle()) continue;
        agent.replan(vcts_, coverage_.viewpoints(), map_, dfield_, replan_seed);
        if (!agent.trajectory().pieces.empty())
            trajectory_log_.push_back({agent.trajectory(),
                                       scenario_.photographer.limits,
                                       scenario_.photographer.r_s});
        // Unreachable viewpoints would stall completion; retire them.
        for (int64_t vp_id : agent.trajectory().dropped) {
            if (handled_vps_.count(vp_id)) continue;
            auto it = vp_to_vct_.find(vp_id);
            if (it != vp_to_vct_.end()) vcts_.mark_visited(it->second, vp_id);
            handled_vps_.insert(vp_id);
            ++abandoned_;
        }
    }
    ++planning_cycles_;
}

void Engine::step() {
    const int64_t period_ticks = std::max<int64_t>(
        1, static_cast<int64_t>(std::llround(scenario_.planning_period / scenario_.dt)));
    if (tick_ % period_ticks == 0) planning_cycle();

    // Explorer advances along its current trajectory.
    double explorer_speed = 0.0;
    if (!explorer_traj_.pieces.empty() &&
        explorer_time_ < explorer_traj_.total_duration()) {
        explorer_time_ += scenario_.dt;
        const SampledState s = sample(explorer_traj_, explorer_time_);
        explorer_distance_ += (s.position - explorer_pose_.position).norm();
        explorer_pose_.position = s.position;
        explorer_pose_.yaw = s.yaw;
        explorer_speed = s.speed;
    }
    ++tick_;
    log_pose("explorer", explorer_pose_, explorer_speed);
    if (explorer_speed > 1e-9) explorer_last_active_ = time();

    for (size_t i = 0; i < agents_.size(); ++i) {
        auto& agent = agents_[i];
        const auto events = agent.advance(scenario_.dt, coverage_.viewpoints());
        log_pose(agent_names_[i + 1], agent.pose(), agent.speed());
        if (agent.speed() > 1e-9 || !events.empty())
            agent_last_active_[i] = time();
        for (int64_t vp_id : events) {
            if (handled_vps_.count(vp_id)) continue;
            handled_vps_.insert(vp_id);
            visited_vps_.insert(vp_id);
            ++visited_;
            auto it = vp_to_vct_.find(vp_id);
            if (it != vp_to_vct_.end()) vcts_.mark_visited(it->second, vp_id);
            auto pts = coverage_.index().viewpoint_to_points.find(vp_id);
            if (pts != coverage_.index().viewpoint_to_points.end())
                captured_points_ += static_cast<int64_t>(pts->second.size());
        }
    }
}

bool Engine::finished() const {
    if (planning_cycles_ < 2) return false;
    if (!frontiers_.exploration_done()) return false;
    return handled_vps_.size() == vp_to_vct_.size();
}

void Engine::finalize_metrics() {
    metrics_.explorer = {"explorer", explorer_last_active_, explorer_distance_};
    metrics_.photographers.clear();
    double completion = 0.0;
    for (size_t i = 0; i < agents_.size(); ++i) {
        metrics_.photographers.push_back({agent_names_[i + 1],
                                          agent_last_active_[i],
                                          agents_[i].distance_flown()});
        completion = std::max(completion, agent_last_active_[i]);
    }
    metrics_.completion_time = completion;
    metrics_.exploration_time =
        exploration_done_at_ >= 0.0 ? exploration_done_at_ : time();
    metrics_.viewpoint_count = static_cast<int64_t>(vp_to_vct_.size());
    metrics_.visited_viewpoints = visited_;
    metrics_.abandoned_viewpoints = abandoned_;
    metrics_.pruned_viewpoints = pruned_;
    metrics_.point_count = static_cast<int64_t>(coverage_.all_points().size());
    int64_t bound = 0;
    for (const auto& p : coverage_.all_points())
        if (p.covered) ++bound;
    metrics_.coverage_rate =
        metrics_.point_count > 0
            ? static_cast<double>(bound) / static_cast<double>(metrics_.point_count)
            : 1.0;
    metrics_.captured_rate =
        metrics_.point_count > 0
            ? static_cast<double>(captured_points_) /
                  static_cast<double>(metrics_.point_count)
            : 1.0;
    metrics_.ticks = tick_;
    metrics_.complete = finished();
}

const Metrics& Engine::run() {
    while (!finished() && tick_ < scenario_.tick_budget) step();
    finalize_metrics();
    return metrics_;
}

void Engine::export_results(const std::string& out_dir) const {
    fs::create_directories(out_dir);
    {
        std::ofstream out(fs::path(out_dir) / "metrics.json");
        if (!out) throw std::runtime_error("cannot write to " + out_dir);
        out << metrics_.to_json().dump(2) << "\n";
    }
    for (const auto& name : agent_names_) {
        std::ofstream out(fs::path(out_dir) / ("poses_" + name + ".csv"));
        out << "t,agent_id,x,y,z,yaw,pitch,v\n";
        auto it = pose_logs_.find(name);
        if (it != pose_logs_.end()) out << it->second;
    }
    {
        std::ofstream out(fs::path(out_dir) / "cycles.jsonl");
        for (const auto& line : cycle_lines_) out << line << "\n";
    }
    {
        std::ofstream out(fs::path(out_dir) / "summary.md");
        out << "# Run summary\n\n";
        if (!metrics_.complete) out << "**Status: incomplete (budget exhausted)**\n\n";
        out << "| Agent | Time (s) | Path Length (m) |\n|---|---|---|\n";
        char row[160];
        std::snprintf(row, sizeof(row), "| %s | %.1f | %.1f |\n",
                      metrics_.explorer.name.c_str(), metrics_.explorer.flight_time,
                      metrics_.explorer.path_length);
        out << row;
        for (const auto& a : metrics_.photographers) {
            std::snprintf(row, sizeof(row), "| %s | %.1f | %.1f |\n",
                          a.name.c_str(), a.flight_time, a.path_length);
            out << row;
        }
        out << "\n| Viewpoint Num | Coverage Rate |\n|---|---|\n";
        std::snprintf(row, sizeof(row), "| %lld | %.3f |\n",
                      static_cast<long long>(metrics_.viewpoint_count),
                      metrics_.coverage_rate);
        out << row;
    }
}

}  // namespace surveyor
