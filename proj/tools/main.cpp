#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nlohmann/json.hpp"
#include "surveyor/oracle.hpp"
#include "surveyor/sim.hpp"

using json = nlohmann::json;
using namespace surveyor;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitBudget = 3;

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json j;
    in >> j;
    return j;
}

int cmd_run(const std::string& path, int64_t seed, const std::string& out_dir,
            int64_t ticks) {
    Scenario s;
    try {
        s = load_scenario(path);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitInvalid;
    }
    if (seed >= 0) s.seed = static_cast<uint64_t>(seed);
    if (ticks > 0) s.tick_budget = ticks;

    Engine engine(s);
    const Metrics& m = engine.run();
    engine.export_results(out_dir);
    std::cout << m.to_json().dump(2) << "\n";
    return m.complete ? kExitOk : kExitBudget;
}

int cmd_validate(const std::string& path) {
    try {
        (void)load_scenario(path);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitInvalid;
    }
    std::cout << "ok\n";
    return kExitOk;
}

// {"n_agents", "n_tasks", "depot_cost" (n_agents x n_tasks),
//  "task_cost" (n_tasks x n_tasks), "epsilon"}
int cmd_mtsp(const std::string& path) {
    const json j = read_json(path);
    oracle::MtspInstance inst;
    inst.n_agents = j.at("n_agents").get<int>();
    inst.n_tasks = j.at("n_tasks").get<int>();
    inst.epsilon = j.value("epsilon", 1e-4);
    for (const auto& row : j.at("depot_cost"))
        for (const auto& v : row) inst.depot_cost.push_back(v.get<double>());
    for (const auto& row : j.at("task_cost"))
        for (const auto& v : row) inst.task_cost.push_back(v.get<double>());
    if (inst.depot_cost.size() != size_t(inst.n_agents) * inst.n_tasks ||
        inst.task_cost.size() != size_t(inst.n_tasks) * inst.n_tasks)
        throw std::runtime_error("cost matrix shape mismatch");

    const auto sol = oracle::exhaustive_mtsp(inst);
    std::cout << json{{"objective", sol.objective}, {"paths", sol.paths}}.dump()
              << "\n";
    return kExitOk;
}

// {"cost": n x n matrix}; row/column 0 is the start node, tour stays open.
int cmd_atsp(const std::string& path) {
    const json j = read_json(path);
    AtspMatrix m;
    for (const auto& row : j.at("cost")) {
        ++m.n;
        for (const auto& v : row) m.cost.push_back(v.get<double>());
    }
    if (m.cost.size() != size_t(m.n) * m.n)
        throw std::runtime_error("cost matrix shape mismatch");

    const auto sol = oracle::exhaustive_atsp(m);
    std::cout << json{{"order", sol.order},
                      {"cost", sol.cost},
                      {"has_unreachable_edge", sol.has_unreachable_edge}}
                     .dump()
              << "\n";
    return kExitOk;
}

// {"resolution", "origin", "dims", "free": [[x,y,z]...], "occupied": [...]};
// unlisted voxels stay Unknown. Prints frontier voxel centers.
int cmd_frontier(const std::string& path) {
    const json j = read_json(path);
    const auto& o = j.at("origin");
    const auto& d = j.at("dims");
    VoxelGrid grid({o.at(0), o.at(1), o.at(2)}, j.at("resolution").get<double>(),
                   {d.at(0).get<int>(), d.at(1).get<int>(), d.at(2).get<int>()});
    auto paint = [&](const char* key, VoxelState s) {
        for (const auto& p : j.value(key, json::array())) {
            const VoxelId id = grid.id_of(Vec3{p.at(0), p.at(1), p.at(2)});
            if (id < 0) throw std::runtime_error(std::string(key) + " point out of grid");
            grid.set_state(id, s);
        }
    };
    paint("free", VoxelState::Free);
    paint("occupied", VoxelState::Occupied);

    json centers = json::array();
    for (VoxelId id : oracle::brute_force_frontiers(grid)) {
        const Vec3 c = grid.center_of(id);
        centers.push_back({c.x, c.y, c.z});
    }
    std::cout << json{{"frontiers", centers}}.dump() << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"multi-agent surface survey simulator"};
    app.require_subcommand(1);

    std::string scenario_path;
    int64_t seed = -1;
    std::string out_dir = "out";
    int64_t ticks = 0;
    auto* run = app.add_subcommand("run", "run a scenario and export results");
    run->add_option("scenario", scenario_path, "scenario json file")->required();
    run->add_option("--seed", seed, "override the scenario seed");
    run->add_option("--out", out_dir, "output directory");
    run->add_option("--ticks", ticks, "override the tick budget");

    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "check a scenario file");
    validate->add_option("scenario", validate_path, "scenario json file")->required();

    auto* oracle_cmd = app.add_subcommand("oracle", "brute-force reference solvers");
    oracle_cmd->require_subcommand(1);
    std::string mtsp_path, atsp_path, frontier_path;
    auto* mtsp = oracle_cmd->add_subcommand("mtsp-exhaustive",
                                            "exhaustive multi-depot assignment");
    mtsp->add_option("instance", mtsp_path, "instance json file")->required();
    auto* atsp = oracle_cmd->add_subcommand("atsp-exhaustive", "exhaustive open tour");
    atsp->add_option("instance", atsp_path, "instance json file")->required();
    auto* frontier = oracle_cmd->add_subcommand("frontier-bruteforce",
                                                "full-grid frontier scan");
    frontier->add_option("grid", frontier_path, "grid json file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return cmd_run(scenario_path, seed, out_dir, ticks);
        if (validate->parsed()) return cmd_validate(validate_path);
        if (mtsp->parsed()) return cmd_mtsp(mtsp_path);
        if (atsp->parsed()) return cmd_atsp(atsp_path);
        if (frontier->parsed()) return cmd_frontier(frontier_path);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kExitInvalid;
    }
    return kExitOk;
}
