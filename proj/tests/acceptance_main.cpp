// Acceptance gate: one pass/fail line per criterion, exit code is the
// number of failed criteria. Run from the repository root.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "surveyor/oracle.hpp"
#include "surveyor/sim.hpp"

using namespace surveyor;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(bool ok, const std::string& name, const std::string& detail) {
    std::printf("%s  %-24s %s\n", ok ? "PASS" : "FAIL", name.c_str(),
                detail.c_str());
    if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

AssignmentCostModel make_model(int n_agents, int n_tasks,
                               std::vector<double> depot,
                               std::vector<double> legs, double gain,
                               double decay = 0.1, double eps = 1e-4) {
    AssignmentCostModel m;
    m.n_agents = n_agents;
    m.n_tasks = n_tasks;
    for (int t = 0; t < n_tasks; ++t) {
        m.task_index[t] = t;
        m.task_ids.push_back(t);
    }
    m.depot_cost = std::move(depot);
    m.leg_cost = std::move(legs);
    m.consistency_gain = gain;
    m.consistency_decay = decay;
    m.epsilon = eps;
    return m;
}

// Agents at fixed depots, tasks at seeded planar positions, Euclidean costs.
AssignmentCostModel euclidean_model(int n_tasks, uint64_t seed, double gain) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(0.0, 40.0), uy(0.0, 20.0);
    const Vec3 depots[2] = {{5, 5, 0}, {35, 15, 0}};
    std::vector<Vec3> tasks;
    for (int t = 0; t < n_tasks; ++t) tasks.push_back({ux(rng), uy(rng), 0.0});
    std::vector<double> depot, legs;
    for (const Vec3& d : depots)
        for (const Vec3& t : tasks) depot.push_back((t - d).norm());
    for (const Vec3& a : tasks)
        for (const Vec3& b : tasks) legs.push_back((b - a).norm());
    return make_model(2, n_tasks, std::move(depot), std::move(legs), gain);
}

Individual ga_best(const AssignmentCostModel& model,
                   const std::vector<int64_t>& open,
                   const std::vector<int64_t>& fresh, const Individual* prev,
                   int generations, uint64_t seed) {
    AssignParams params;
    auto pop = init_population(prev, open, fresh, model.n_agents,
                               params.population, seed);
    return run_ga(std::move(pop), model, prev, generations, params, seed + 1);
}

size_t prefix_len(const std::vector<int64_t>& a, const std::vector<int64_t>& b) {
    size_t k = 0;
    while (k < a.size() && k < b.size() && a[k] == b[k]) ++k;
    return k;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void check_formula_suite() {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    const double tol = 1e-9;

    // Cluster execution cost: lambda_h * (NUM - 1) * d_thr.
    VoxelGrid grid({0, 0, 0}, 0.5, {40, 40, 20}, VoxelState::Free);
    VctSet vcts(0.6, 6.0);
    Viewpoint5D vp;
    vp.id = 0;
    vp.position = {3, 3, 3};
    vcts.add_viewpoint(vp, grid);
    ok &= std::abs(vcts.clusters().begin()->second.h_cost) <= tol;
    vp.id = 1;
    vp.position = {4, 3, 3};
    vcts.add_viewpoint(vp, grid);
    vp.id = 2;
    vp.position = {5, 3, 3};
    vcts.add_viewpoint(vp, grid);
    ok &= vcts.clusters().size() == 1;
    ok &= std::abs(vcts.clusters().begin()->second.h_cost - 0.6 * 2.0 * 6.0) <= tol;

    // Route cost: depot leg plus chained legs.
    auto model = make_model(1, 3, {3.0, 5.0, 7.0},
                            {0.0, 2.0, 4.0, 2.0, 0.0, 6.0, 4.0, 6.0, 0.0}, 50.0);
    ok &= std::abs(path_cost({0, 1, 2}, 0, model) - (3.0 + 2.0 + 6.0)) <= tol;

    // Consistency reward: -sum_k R * exp(-alpha * DSUM(k)), DSUM(1) = 0.
    ok &= std::abs(consistency_cost({0, 1}, {1, 0}, model)) <= tol;
    auto m2 = make_model(1, 2, {0.0, 0.0}, {0.0, 10.0, 10.0, 0.0}, 50.0);
    ok &= std::abs(consistency_cost({0, 1}, {0, 1}, m2) -
                   (-50.0 - 50.0 * std::exp(-0.1 * 10.0))) <= tol;

    // Fitness: minus the balanced min-max objective.
    auto m3 = make_model(2, 2, {10.0, 1.0, 1.0, 20.0},
                         {0.0, 0.0, 0.0, 0.0}, 0.0);
    Individual ind;
    ind.paths = {{0}, {1}};
    ok &= std::abs(fitness(ind, nullptr, m3) -
                   -(20.0 + 1e-4 * (10.0 + 20.0))) <= tol;

    const double el = seconds_since(t0);
    ok &= el < 1.0;
    char buf[96];
    std::snprintf(buf, sizeof buf, "hand-computed route costs, %.3f s", el);
    report(ok, "formula-unit-suite", buf);
}

void check_mtsp_oracle() {
    const auto t0 = std::chrono::steady_clock::now();
    int matched = 0;
    for (uint64_t seed = 0; seed < 20; ++seed) {
        const int n_tasks = 4 + static_cast<int>(seed % 4);
        auto model = euclidean_model(n_tasks, seed * 131 + 7, 0.0);
        const Individual best =
            ga_best(model, model.task_ids, model.task_ids, nullptr, 700, seed);

        oracle::MtspInstance inst;
        inst.n_agents = 2;
        inst.n_tasks = n_tasks;
        inst.depot_cost = model.depot_cost;
        inst.task_cost = model.leg_cost;
        inst.epsilon = model.epsilon;
        const auto sol = oracle::exhaustive_mtsp(inst);
        if (std::abs(-best.fitness - sol.objective) <= 1e-9) ++matched;
    }
    const double el = seconds_since(t0);
    char buf[96];
    std::snprintf(buf, sizeof buf, "%d/20 instances optimal, %.1f s", matched, el);
    report(matched >= 19 && el < 60.0, "mtsp-oracle", buf);
}

void check_warm_start() {
    const auto t0 = std::chrono::steady_clock::now();
    double gap_sum = 0.0;
    const int warm_gens = 175;  // 25% of the configured 700
    for (uint64_t seed = 0; seed < 20; ++seed) {
        auto model = euclidean_model(20, seed * 97 + 3, 0.0);
        Individual prev;
        bool has_prev = false;
        double warm_cost = 0.0;
        std::vector<int64_t> open;
        for (int cycle = 0; cycle < 10; ++cycle) {
            std::vector<int64_t> fresh = {2 * cycle, 2 * cycle + 1};
            open.insert(open.end(), fresh.begin(), fresh.end());
            prev = ga_best(model, open, fresh, has_prev ? &prev : nullptr,
                           warm_gens, seed * 1000 + cycle);
            has_prev = true;
            warm_cost = -prev.fitness;
        }
        const Individual cold =
            ga_best(model, open, open, nullptr, 700, seed * 1000 + 50);
        gap_sum += (warm_cost - -cold.fitness) / -cold.fitness;
    }
    const double mean_gap = gap_sum / 20.0;
    const double el = seconds_since(t0);
    char buf[96];
    std::snprintf(buf, sizeof buf, "mean gap %.3f%% at 25%% generations, %.1f s",
                  mean_gap * 100.0, el);
    report(mean_gap <= 0.01, "warm-start-ablation", buf);
}

void check_consistency() {
    const auto t0 = std::chrono::steady_clock::now();
    auto total_k = [](double gain, uint64_t seed) {
        auto model = euclidean_model(20, seed * 97 + 3, gain);
        Individual prev;
        bool has_prev = false;
        std::vector<int64_t> open;
        double k_total = 0.0;
        for (int cycle = 0; cycle < 10; ++cycle) {
            std::vector<int64_t> fresh = {2 * cycle, 2 * cycle + 1};
            open.insert(open.end(), fresh.begin(), fresh.end());
            const Individual cur = ga_best(
                model, open, fresh, has_prev ? &prev : nullptr, 150,
                seed * 1000 + cycle);
            if (has_prev)
                for (size_t i = 0; i < cur.paths.size(); ++i)
                    k_total += static_cast<double>(
                        prefix_len(filter_path(prev.paths[i], open), cur.paths[i]));
            prev = cur;
            has_prev = true;
        }
        return k_total;
    };
    double with_gain = 0.0, without = 0.0;
    for (uint64_t seed = 0; seed < 20; ++seed) {
        with_gain += total_k(50.0, seed);
        without += total_k(0.0, seed);
    }
    const double el = seconds_since(t0);
    char buf[96];
    std::snprintf(buf, sizeof buf, "K_same %.0f (R=50) vs %.0f (R=0), %.1f s",
                  with_gain, without, el);
    report(with_gain > without, "consistency-ablation", buf);
}

void check_frontier_oracle() {
    const auto t0 = std::chrono::steady_clock::now();
    // 64^3 corridor: hollow square tube along x, capped at the far end.
    VoxelGrid truth({0, 0, 0}, 0.5, {64, 64, 64}, VoxelState::Free);
    auto wall = [&](int x, int y, int z) {
        truth.set_state(truth.id_of(VoxelCoord{x, y, z}), VoxelState::Occupied);
    };
    for (int x = 0; x < 64; ++x)
        for (int y = 20; y <= 28; ++y)
            for (int z = 20; z <= 28; ++z)
                if (y == 20 || y == 28 || z == 20 || z == 28) wall(x, y, z);
    for (int y = 20; y <= 28; ++y)
        for (int z = 20; z <= 28; ++z) wall(63, y, z);

    VoxelGrid map = make_planning_grid(truth);
    FrontierTracker tracker;
    LidarParams lidar = sim_default_lidar();
    bool ok = true;
    for (int i = 0; i < 25 && ok; ++i) {
        Pose pose{{2.0 + i, 12.25, 12.25}, 0.0};
        const LidarScan scan = lidar_scan(truth, pose, lidar, i + 1);
        const auto changed = map.integrate_scan(pose.position, scan.hits, scan.misses);
        DistanceField field(map, 3.0);
        tracker.update(map, field, changed);

        std::vector<VoxelId> got(tracker.cells().begin(), tracker.cells().end());
        std::sort(got.begin(), got.end());
        ok &= got == oracle::brute_force_frontiers(map);
    }
    const double el = seconds_since(t0);
    char buf[96];
    std::snprintf(buf, sizeof buf, "25 incremental updates exact, %.1f s", el);
    report(ok && el < 30.0, "frontier-oracle", buf);
}

void check_box_run(const Metrics& m, const Engine& engine) {
    // Exactly-once extraction on the finished box run.
    bool ok = m.complete && m.point_count > 0;
    std::set<int64_t> ids;
    for (const auto& sp : engine.coverage().all_points()) ids.insert(sp.id);
    ok &= static_cast<int64_t>(ids.size()) == m.point_count;

    VoxelGrid map = engine.map();
    int64_t next_id = 0;
    const auto clusters = surface_clusters(map);
    const auto explored = detect_explored_surface(
        map, {}, clusters, engine.scenario().coverage.frontier_near_voxels);
    const auto again = extract_new_points(map, explored, next_id);
    ok &= again.empty();

    char buf[96];
    std::snprintf(buf, sizeof buf, "%lld unique points, re-extraction empty",
                  static_cast<long long>(m.point_count));
    report(ok, "exactly-once-extraction", buf);
}

double soundness_ratio(const Engine& engine) {
    std::unordered_map<int64_t, Vec3> pos;
    for (const auto& sp : engine.coverage().all_points()) pos[sp.id] = sp.position;
    const auto& vps = engine.coverage().viewpoints();
    const CameraModel& cam = engine.scenario().coverage.camera;
    int64_t visible = 0, bound = 0;
    for (const auto& [pt_id, vp_id] : engine.coverage().index().point_to_viewpoint) {
        ++bound;
        if (camera_visible(engine.map(), vps[static_cast<size_t>(vp_id)],
                           pos.at(pt_id), cam))
            ++visible;
    }
    return bound == 0 ? 0.0 : static_cast<double>(visible) / bound;
}

void check_building(const Engine& engine, const Metrics& m, double el) {
    const double ratio = soundness_ratio(engine);
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.1f%% of %lld points visible, %.0f s",
                  ratio * 100.0, static_cast<long long>(m.point_count), el);
    report(m.complete && ratio >= 0.95 && el < 300.0, "coverage-soundness", buf);

    // Single-shot sampler on the final map as the economy baseline.
    CoverageParams cov = engine.scenario().coverage;
    cov.clearance += engine.scenario().resolution * std::sqrt(3.0);
    CoverageTracker global(cov);
    std::vector<SurfacePoint> pts = engine.coverage().all_points();
    for (auto& sp : pts) sp.covered = false;
    DistanceField field(engine.map(), 4.0 * engine.scenario().assign.d_thr,
                        true);
    global.coverage_cycle(engine.map(), field, std::move(pts));
    auto active = [](const CoverageTracker& t) {
        double n = 0;
        for (const auto& vp : t.viewpoints())
            if (!vp.dormant) ++n;
        return n;
    };
    const double inc = active(engine.coverage());
    const double glob = active(global);
    std::snprintf(buf, sizeof buf, "%.0f incremental vs %.0f single-shot",
                  inc, glob);
    report(glob > 0 && std::abs(inc - glob) <= 0.15 * glob,
           "viewpoint-economy", buf);
}

void check_atsp() {
    const auto t0 = std::chrono::steady_clock::now();
    int within = 0;
    for (uint64_t seed = 0; seed < 100; ++seed) {
        std::mt19937_64 rng(seed * 37 + 11);
        std::uniform_real_distribution<double> u(1.0, 20.0);
        AtspMatrix m;
        m.n = 5 + static_cast<int>(seed % 5);
        m.cost.assign(static_cast<size_t>(m.n) * m.n, 0.0);
        for (int i = 0; i < m.n; ++i)
            for (int j = 1; j < m.n; ++j)
                if (i != j) m.at(i, j) = u(rng);
        const auto got = solve_atsp(m, seed);
        const auto opt = oracle::exhaustive_atsp(m);
        if (got.cost <= opt.cost * 1.05 + 1e-12) ++within;
    }
    const double el = seconds_since(t0);
    char buf[96];
    std::snprintf(buf, sizeof buf, "%d/100 within 5%% of optimum, %.1f s",
                  within, el);
    report(within >= 95 && el < 10.0, "atsp-quality", buf);
}

// Distance from a point to the nearest occupied voxel box, not center to
// center; the field only prescreens.
double surface_clearance(const VoxelGrid& grid, const DistanceField& field,
                         const Vec3& p, double need) {
    const double res = grid.resolution();
    if (field.at(grid, p) >= need + 2.0 * res) return need + res;
    const VoxelCoord c = grid.coord_of(p);
    const int r = static_cast<int>(std::ceil((need + 2.0 * res) / res)) + 1;
    double best = 1e9;
    for (int dz = -r; dz <= r; ++dz)
        for (int dy = -r; dy <= r; ++dy)
            for (int dx = -r; dx <= r; ++dx) {
                const VoxelCoord n{c.x + dx, c.y + dy, c.z + dz};
                if (!grid.in_bounds(n) || grid.state(n) != VoxelState::Occupied)
                    continue;
                const Vec3 ctr = grid.center_of(grid.id_of(n));
                const double ex = std::max(std::abs(p.x - ctr.x) - res * 0.5, 0.0);
                const double ey = std::max(std::abs(p.y - ctr.y) - res * 0.5, 0.0);
                const double ez = std::max(std::abs(p.z - ctr.z) - res * 0.5, 0.0);
                best = std::min(best, std::sqrt(ex * ex + ey * ey + ez * ez));
            }
    return best;
}

void check_kinodynamics(const std::vector<const Engine*>& engines) {
    bool ok = true;
    int64_t trajectories = 0;
    double worst_clear = 1e9;
    for (const Engine* engine : engines) {
        DistanceField field(engine->map(), 10.0);
        for (const IssuedTrajectory& it : engine->trajectory_log()) {
            ++trajectories;
            const double T = it.traj.total_duration();
            double prev_speed = 0.0;
            for (double t = 0.0; t <= T + 1e-9; t += 0.01) {
                const SampledState s = sample(it.traj, std::min(t, T));
                ok &= s.speed <= it.limits.v_max + 1e-6;
                if (t > 0.0)
                    ok &= std::abs(s.speed - prev_speed) / 0.01 <=
                          it.limits.a_max + 1e-6;
                prev_speed = s.speed;
                const double clear = surface_clearance(engine->map(), field,
                                                       s.position, it.clearance);
                worst_clear = std::min(worst_clear, clear);
                ok &= clear >= it.clearance - 1e-6;
            }
        }
    }
    char buf[96];
    std::snprintf(buf, sizeof buf,
                  "%lld trajectories at 100 Hz, min clearance %.2f m",
                  static_cast<long long>(trajectories), worst_clear);
    report(ok && trajectories > 0, "kinodynamic-safety", buf);
}

void check_determinism(const Engine& first, const Scenario& scenario) {
    const fs::path dir_a = fs::temp_directory_path() / "acceptance_run_a";
    const fs::path dir_b = fs::temp_directory_path() / "acceptance_run_b";
    fs::create_directories(dir_a);
    fs::create_directories(dir_b);
    first.export_results(dir_a.string());
    Engine second(scenario);
    second.run();
    second.export_results(dir_b.string());

    bool ok = true;
    int compared = 0;
    for (const auto& entry : fs::directory_iterator(dir_a)) {
        const std::string name = entry.path().filename().string();
        if (name != "metrics.json" && name.rfind("poses_", 0) != 0) continue;
        ++compared;
        ok &= slurp(entry.path()) == slurp(dir_b / name);
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "%d exported files bitwise identical", compared);
    report(ok && compared >= 2, "determinism", buf);
}

}  // namespace

int main() {
    check_formula_suite();
    check_mtsp_oracle();
    check_warm_start();
    check_consistency();
    check_frontier_oracle();
    check_atsp();

    Scenario box = load_scenario("scenarios/box.json");
    Engine box_engine(box);
    const Metrics& box_metrics = box_engine.run();
    check_box_run(box_metrics, box_engine);

    Scenario building = load_scenario("scenarios/building.json");
    const auto t0 = std::chrono::steady_clock::now();
    Engine building_engine(building);
    const Metrics& building_metrics = building_engine.run();
    check_building(building_engine, building_metrics, seconds_since(t0));

    check_kinodynamics({&box_engine, &building_engine});
    check_determinism(building_engine, building);

    std::printf("%s: %d criteria failed\n", failures == 0 ? "OK" : "FAILED",
                failures);
    return failures;
}
